#pragma once

// Subcommand implementations for the `cbd` executable. Each returns the
// process exit code and writes to the given streams, so tests can drive
// them in-process.
//
// Exit codes: 0 ok, 1 domain negative, 2 parse, 3 capacity, 4 shape.

#include "cbd/cbd.hpp"

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <future>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace cbd::cli {

enum ExitCode : int { kOk = 0, kNegative = 1, kParse = 2, kCapacity = 3, kShape = 4 };

struct AnalyzeOptions {
  bool witness = false;
  bool json = false;
  std::size_t max_slots = kDefaultMaxSlots;
  unsigned jobs = 1;
};

namespace detail {

struct Loaded {
  std::optional<System> system;
  int code = kOk;
  std::string message;
};

inline Loaded load_valid(const std::string& path) {
  Loaded out;
  try {
    out.system = load_system(path);
  } catch (const ParseError& e) {
    out.code = kParse;
    out.message = path + ": parse error at " + e.what();
    return out;
  }
  auto problems = validate(*out.system);
  if (!problems.empty()) {
    out.code = kNegative;
    out.message = path + ": invalid system";
    for (const auto& p : problems) out.message += "\n  " + p;
    out.system.reset();
  }
  return out;
}

inline int write_output(const std::string& out_path, const std::string& text, std::ostream& out,
                        std::ostream& err) {
  if (out_path.empty() || out_path == "-") {
    out << text;
    return kOk;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) {
    err << "cannot write '" << out_path << "'\n";
    return kNegative;
  }
  f << text;
  return kOk;
}

inline const char* verdict(bool noncontextual) { return noncontextual ? "noncontextual" : "contextual"; }

inline std::string slot_name(const Slot& s) { return s.content + "@" + s.context; }

inline Json result_fields(const AnalysisResult& r) {
  Json j;
  j["verdict"] = verdict(r.noncontextual);
  j["delta_max"] = to_string(r.delta_max);
  j["delta0"] = to_string(r.delta0);
  j["measure"] = to_string(r.measure);
  return j;
}

inline Json witness_json(const Coupling& c) {
  Json w;
  Json slots = Json::array();
  for (const auto& s : c.slots) slots.push_back(slot_name(s));
  w["slots"] = std::move(slots);
  Json atoms = Json::array();
  for (const auto& [v, p] : c.pmf) {
    Json a;
    a["values"] = v;
    a["p"] = to_string(p);
    atoms.push_back(std::move(a));
  }
  w["atoms"] = std::move(atoms);
  Json eq = Json::array();
  for (const auto& [pair, p] : connection_equality_probs(c)) {
    Json e;
    e["content"] = pair.content;
    e["context_a"] = pair.context_a;
    e["context_b"] = pair.context_b;
    e["p"] = to_string(p);
    eq.push_back(std::move(e));
  }
  w["connection_equality"] = std::move(eq);
  return w;
}

// Throws CapacityError.
inline Json analysis_report(const System& system, bool with_witness, std::size_t max_slots) {
  const auto result = analyze(system, max_slots);
  Json report = result_fields(result);

  const auto consistency = is_consistently_connected(system);
  report["consistently_connected"] = consistency.consistent;
  Json violations = Json::array();
  for (const auto& v : consistency.violations) {
    Json e;
    e["content"] = v.pair.content;
    e["context_a"] = v.pair.context_a;
    e["context_b"] = v.pair.context_b;
    e["plus_a"] = to_string(v.plus_a);
    e["plus_b"] = to_string(v.plus_b);
    violations.push_back(std::move(e));
  }
  report["consistency_violations"] = std::move(violations);
  report["slots"] = system.slots().size();
  report["connection_pairs"] = system.connection_pairs().size();

  if (auto view = is_cyclic3(system); view && consistency.consistent)
    report["suppes_zanotti"] = to_string(suppes_zanotti_value(*view));

  const auto parts = connected_components(system);
  if (parts.size() > 1) {
    Json components = Json::array();
    for (const auto& part : parts) {
      Json c;
      Json labels = Json::array();
      for (const auto& d : part.contexts()) labels.push_back(d.context);
      c["contexts"] = std::move(labels);
      c.update(result_fields(analyze(part, max_slots)));
      components.push_back(std::move(c));
    }
    report["components"] = std::move(components);
  }
  if (with_witness) report["witness"] = witness_json(result.witness);
  return report;
}

inline std::string report_text(const Json& r) {
  std::string out;
  out += "verdict: " + r["verdict"].get<std::string>() + "\n";
  out += "delta_max: " + r["delta_max"].get<std::string>() + "\n";
  out += "delta0: " + r["delta0"].get<std::string>() + "\n";
  out += "measure: " + r["measure"].get<std::string>() + "\n";
  out += std::string("consistently connected: ") +
         (r["consistently_connected"].get<bool>() ? "yes" : "no") + "\n";
  for (const auto& v : r["consistency_violations"])
    out += "  Pr[" + v["content"].get<std::string>() + "=+1] is " + v["plus_a"].get<std::string>() +
           " in " + v["context_a"].get<std::string>() + " but " + v["plus_b"].get<std::string>() +
           " in " + v["context_b"].get<std::string>() + "\n";
  if (r.contains("suppes_zanotti"))
    out += "suppes-zanotti value: " + r["suppes_zanotti"].get<std::string>() + "\n";
  if (r.contains("components")) {
    out += "components:\n";
    for (const auto& c : r["components"]) {
      std::string labels;
      for (const auto& l : c["contexts"]) labels += (labels.empty() ? "" : ",") + l.get<std::string>();
      out += "  [" + labels + "] " + c["verdict"].get<std::string>() + ", delta_max " +
             c["delta_max"].get<std::string>() + ", delta0 " + c["delta0"].get<std::string>() +
             ", measure " + c["measure"].get<std::string>() + "\n";
    }
  }
  if (r.contains("witness")) {
    const auto& w = r["witness"];
    std::string header;
    for (const auto& s : w["slots"]) header += (header.empty() ? "" : " ") + s.get<std::string>();
    out += "witness coupling over (" + header + "):\n";
    for (const auto& a : w["atoms"]) {
      std::string vals;
      for (const auto& v : a["values"]) vals += v.get<int>() > 0 ? '+' : '-';
      out += "  " + vals + "  " + a["p"].get<std::string>() + "\n";
    }
    out += "connection equality probabilities:\n";
    for (const auto& e : w["connection_equality"])
      out += "  Pr[" + e["content"].get<std::string>() + "@" + e["context_a"].get<std::string>() +
             " = " + e["content"].get<std::string>() + "@" + e["context_b"].get<std::string>() +
             "] = " + e["p"].get<std::string>() + "\n";
  }
  return out;
}

struct FileOutcome {
  int code = kOk;
  std::optional<Json> report;
  std::string message;
};

inline FileOutcome analyze_file(const std::string& path, const AnalyzeOptions& opts) {
  auto loaded = load_valid(path);
  if (!loaded.system) return {loaded.code, std::nullopt, loaded.message};
  try {
    return {kOk, analysis_report(*loaded.system, opts.witness, opts.max_slots), {}};
  } catch (const CapacityError& e) {
    return {kCapacity, std::nullopt, path + ": " + e.what()};
  }
}

}  // namespace detail

inline int cmd_validate(const std::string& path, std::ostream& out, std::ostream& err) {
  System system;
  try {
    system = load_system(path);
  } catch (const ParseError& e) {
    err << path << ": parse error at " << e.what() << "\n";
    return kParse;
  }
  auto problems = validate(system);
  for (const auto& p : problems) out << p << "\n";
  if (problems.empty()) out << path << ": valid\n";
  return problems.empty() ? kOk : kNegative;
}

inline int cmd_analyze(const std::vector<std::string>& paths, const AnalyzeOptions& opts,
                       std::ostream& out, std::ostream& err) {
  // File-level parallelism only; results are collected in input order.
  std::vector<detail::FileOutcome> outcomes(paths.size());
  const std::size_t jobs = std::max(1u, opts.jobs);
  for (std::size_t start = 0; start < paths.size(); start += jobs) {
    std::vector<std::future<detail::FileOutcome>> batch;
    const std::size_t stop = std::min(paths.size(), start + jobs);
    for (std::size_t i = start; i < stop; ++i)
      batch.push_back(std::async(jobs > 1 ? std::launch::async : std::launch::deferred,
                                 detail::analyze_file, paths[i], opts));
    for (std::size_t i = start; i < stop; ++i) outcomes[i] = batch[i - start].get();
  }

  int code = kOk;
  for (const auto& o : outcomes) {
    code = std::max(code, o.code);
    if (!o.message.empty()) err << o.message << "\n";
  }

  if (opts.json) {
    if (paths.size() == 1) {
      if (outcomes[0].report) out << outcomes[0].report->dump(2) << "\n";
      return code;
    }
    Json all = Json::array();
    for (std::size_t i = 0; i < paths.size(); ++i) {
      Json e;
      e["file"] = paths[i];
      e["exit_code"] = outcomes[i].code;
      if (outcomes[i].report) e["report"] = *outcomes[i].report;
      all.push_back(std::move(e));
    }
    Json doc;
    doc["reports"] = std::move(all);
    out << doc.dump(2) << "\n";
    return code;
  }

  for (std::size_t i = 0; i < paths.size(); ++i) {
    if (paths.size() > 1) out << "== " << paths[i] << " ==\n";
    if (outcomes[i].report) out << detail::report_text(*outcomes[i].report);
  }
  return code;
}

inline int cmd_criterion(const std::string& path, std::size_t max_slots, std::ostream& out,
                         std::ostream& err) {
  auto loaded = detail::load_valid(path);
  if (!loaded.system) {
    err << loaded.message << "\n";
    return loaded.code;
  }
  const System& system = *loaded.system;
  auto view = is_cyclic3(system);
  if (!view) {
    err << path << ": not a rank-3 cyclic system (3 contents, 3 two-content contexts in a "
        << "triangle); use `cbd analyze` for the general test\n";
    return kShape;
  }
  if (!is_consistently_connected(system).consistent) {
    err << path << ": system is not consistently connected; the closed-form criterion does not "
        << "apply, use `cbd analyze`\n";
    return kShape;
  }
  const Rational value = suppes_zanotti_value(*view);
  const bool contextual = cyclic3_contextual(system);
  out << "cycle: " << view->contexts[0] << " -> " << view->contexts[1] << " -> "
      << view->contexts[2] << "\n";
  for (std::size_t i = 0; i < 3; ++i)
    out << "  <" << view->contents[i] << " " << view->contents[(i + 1) % 3] << ">@"
        << view->contexts[i] << " = " << to_string(view->e[i]) << "\n";
  out << "suppes-zanotti value: " << to_string(value) << "\n";
  out << "verdict: " << detail::verdict(!contextual) << "\n";

  AnalysisResult lp;
  try {
    lp = analyze(system, max_slots);
  } catch (const CapacityError& e) {
    err << path << ": " << e.what() << "\n";
    return kCapacity;
  }
  out << "lp verdict: " << detail::verdict(lp.noncontextual) << " (measure " << to_string(lp.measure)
      << ")\n";
  if (lp.noncontextual == contextual) {
    err << path << ": closed-form and LP verdicts disagree\n";
    return kNegative;
  }
  out << "agreement: yes\n";
  return kOk;
}

inline int cmd_extract_hv(const std::string& path, const std::string& out_path,
                          std::size_t max_slots, std::ostream& out, std::ostream& err) {
  auto loaded = detail::load_valid(path);
  if (!loaded.system) {
    err << loaded.message << "\n";
    return loaded.code;
  }
  const System& system = *loaded.system;
  if (system.contexts().size() == 1)
    return detail::write_output(out_path, write_hv(context_specific_hv(system.contexts().front())),
                                out, err);

  AnalysisResult result;
  try {
    result = analyze(system, max_slots);
  } catch (const CapacityError& e) {
    err << path << ": " << e.what() << "\n";
    return kCapacity;
  }
  const auto consistency = is_consistently_connected(system);
  if (!consistency.consistent) {
    const auto& v = consistency.violations.front();
    err << path << ": not consistently connected (Pr[" << v.pair.content << "=+1] is "
        << to_string(v.plus_a) << " in " << v.pair.context_a << " but " << to_string(v.plus_b)
        << " in " << v.pair.context_b << "); no context-independent hidden variable exists"
        << " (measure " << to_string(result.measure) << ")\n";
    return kNegative;
  }
  if (!result.noncontextual) {
    err << path << ": contextual, measure " << to_string(result.measure)
        << "; no context-independent hidden variable exists\n";
    return kNegative;
  }
  auto coupling = identically_connected_coupling(system, max_slots);
  if (!coupling) {
    err << path << ": no identically connected coupling found\n";
    return kNegative;
  }
  return detail::write_output(out_path, write_hv(extract(*coupling), layout_of(system)), out, err);
}

// `layout` is either empty (use the file's own layout) or "c1=q1,q2;c2=q2,q3".
inline int cmd_simulate(const std::string& hv_path, const std::string& layout,
                        const std::string& out_path, std::ostream& out, std::ostream& err) {
  HvFile file;
  try {
    file = parse_hv(cbd::detail::read_file(hv_path));
  } catch (const ParseError& e) {
    err << hv_path << ": parse error at " << e.what() << "\n";
    return kParse;
  }

  std::optional<Layout> chosen = file.layout;
  if (!layout.empty()) {
    chosen = parse_layout_spec(layout);
    if (!chosen) {
      err << "malformed layout '" << layout << "'; expected c1=q1,q2;c2=q2,q3\n";
      return kParse;
    }
  }
  if (!chosen) {
    err << hv_path << ": no layout in the file; pass --layout\n";
    return kParse;
  }

  System system;
  try {
    if (file.context_model) {
      if (chosen->size() != 1 || chosen->front().first != file.context_model->context ||
          chosen->front().second != file.context_model->contents) {
        err << hv_path << ": a per-context model only realizes its own context\n";
        return kNegative;
      }
      system = System({realize(*file.context_model)});
    } else {
      auto problems = validate(*file.model);
      if (!problems.empty()) {
        for (const auto& p : problems) err << hv_path << ": " << p << "\n";
        return kNegative;
      }
      system = realize(*file.model, *chosen);
    }
  } catch (const LookupError& e) {
    err << hv_path << ": " << e.what() << "\n";
    return kNegative;
  }
  auto problems = validate(system);
  if (!problems.empty()) {
    for (const auto& p : problems) err << "realized system: " << p << "\n";
    return kNegative;
  }
  return detail::write_output(out_path, write_system(system), out, err);
}

inline int cmd_canonicalize(const std::string& path, const std::string& out_path, std::ostream& out,
                            std::ostream& err) {
  auto loaded = detail::load_valid(path);
  if (!loaded.system) {
    err << loaded.message << "\n";
    return loaded.code;
  }
  return detail::write_output(out_path, write_system(*loaded.system), out, err);
}

}  // namespace cbd::cli
