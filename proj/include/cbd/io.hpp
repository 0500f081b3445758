#pragma once

// Text formats. All probabilities are rational strings ("3/4"); no decimals.
//
// System file:
//   {
//     "contents": ["q1", "q2", "q3"],
//     "contexts": [
//       {"label": "c1", "contents": ["q1", "q2"],
//        "pmf": {"-1,-1": "1/2", "+1,+1": "1/2"}},
//       ...
//     ]
//   }
//
// A pmf key lists the values of the context's contents in declaration order.
// Missing keys have probability 0. Unknown keys are rejected everywhere.
//
// Hidden-variable model file:
//   {
//     "contents": ["q1", "q2"],
//     "support": [{"p": "1/2", "responses": {"q1": -1, "q2": -1}}, ...],
//     "layout": [{"label": "c1", "contents": ["q1", "q2"]}, ...]
//   }
// A per-context model additionally carries "context": "<label>" and its
// "contents" are that context's contents in declaration order.

#include "cbd/hidden_variable.hpp"
#include "cbd/rational.hpp"
#include "cbd/system.hpp"

#include "json.hpp"

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <initializer_list>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cbd {

using Json = nlohmann::ordered_json;

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                           ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

namespace detail {

struct Position {
  std::size_t line = 1;
  std::size_t column = 1;
};

inline Position position_at(std::string_view text, std::size_t offset) {
  Position p;
  offset = std::min(offset, text.size());
  for (std::size_t i = 0; i < offset; ++i) {
    if (text[i] == '\n') {
      ++p.line;
      p.column = 1;
    } else {
      ++p.column;
    }
  }
  return p;
}

// Semantic errors are located at the first occurrence of the offending
// token; the parsed tree carries no positions.
class Locator {
 public:
  explicit Locator(std::string_view text) : text_(text) {}

  [[noreturn]] void fail(const std::string& message, const std::string& token = {}) const {
    std::size_t offset = 0;
    if (!token.empty())
      if (auto at = text_.find(token); at != std::string_view::npos) offset = at;
    auto p = position_at(text_, offset);
    throw ParseError(message, p.line, p.column);
  }

  [[noreturn]] void fail_at_string(const std::string& message, const std::string& value) const {
    fail(message, Json(value).dump());
  }

 private:
  std::string_view text_;
};

inline Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    // e.byte is 1-based and points just past the offending character.
    auto p = position_at(text, e.byte == 0 ? 0 : e.byte - 1);
    std::string what = e.what();
    if (auto colon = what.rfind(": "); colon != std::string::npos) what = what.substr(colon + 2);
    throw ParseError(what, p.line, p.column);
  }
}

inline void require_keys(const Json& obj, std::initializer_list<std::string_view> allowed,
                         std::initializer_list<std::string_view> required, const Locator& loc,
                         const std::string& where) {
  if (!obj.is_object()) loc.fail(where + " must be a JSON object");
  for (const auto& [key, value] : obj.items())
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      loc.fail("unknown key '" + key + "' in " + where, Json(key).dump());
  for (auto key : required)
    if (!obj.contains(key)) loc.fail(where + " is missing required key '" + std::string(key) + "'");
}

inline std::vector<std::string> string_list(const Json& j, const Locator& loc,
                                            const std::string& where) {
  if (!j.is_array()) loc.fail(where + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& item : j) {
    if (!item.is_string()) loc.fail(where + " must contain only strings", item.dump());
    out.push_back(item.get<std::string>());
  }
  return out;
}

inline Rational rational_field(const Json& j, const Locator& loc, const std::string& where) {
  if (!j.is_string())
    loc.fail(where + " must be a rational string such as \"3/4\"", j.dump());
  const auto text = j.get<std::string>();
  auto r = parse_rational(text);
  if (!r) loc.fail_at_string("malformed rational '" + text + "' in " + where, text);
  return *r;
}

inline int signed_value(std::string_view token, const Locator& loc, const std::string& key) {
  if (token == "+1" || token == "1") return +1;
  if (token == "-1") return -1;
  loc.fail("value '" + std::string(token) + "' in pmf key '" + key +
               "' is not +1 or -1; categorical variables must be dichotomized before analysis",
           Json(key).dump());
}

inline Values parse_values_key(const std::string& key, std::size_t arity, const Locator& loc) {
  Values v;
  std::size_t start = 0;
  for (;;) {
    auto comma = key.find(',', start);
    auto token = std::string_view(key).substr(start, comma == std::string::npos ? comma : comma - start);
    v.push_back(signed_value(token, loc, key));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (v.size() != arity)
    loc.fail("pmf key '" + key + "' has " + std::to_string(v.size()) + " values, expected " +
                 std::to_string(arity),
             Json(key).dump());
  return v;
}

inline std::string values_key(const Values& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += v[i] > 0 ? "+1" : "-1";
  }
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'", 1, 1);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace detail

// Structural parse only; semantic checks are left to validate().
inline System parse_system(std::string_view text) {
  const detail::Locator loc(text);
  const Json root = detail::parse_json(text);
  detail::require_keys(root, {"contents", "contexts"}, {"contents", "contexts"}, loc,
                       "system file");
  auto declared = detail::string_list(root["contents"], loc, "\"contents\"");
  if (!root["contexts"].is_array()) loc.fail("\"contexts\" must be an array");

  std::vector<ContextDistribution> contexts;
  for (const auto& cj : root["contexts"]) {
    detail::require_keys(cj, {"label", "contents", "pmf"}, {"label", "contents", "pmf"}, loc,
                         "context");
    if (!cj["label"].is_string()) loc.fail("context \"label\" must be a string", cj["label"].dump());
    ContextDistribution d;
    d.context = cj["label"].get<std::string>();
    const std::string where = "context '" + d.context + "'";
    d.contents = detail::string_list(cj["contents"], loc, where + " contents");
    if (!cj["pmf"].is_object()) loc.fail(where + " pmf must be an object", Json(d.context).dump());
    for (const auto& [key, value] : cj["pmf"].items()) {
      auto v = detail::parse_values_key(key, d.contents.size(), loc);
      if (d.pmf.contains(v)) loc.fail(where + " repeats pmf entry '" + key + "'", Json(key).dump());
      d.pmf.emplace(std::move(v), detail::rational_field(value, loc, where + " pmf"));
    }
    contexts.push_back(std::move(d));
  }
  return System(std::move(contexts), std::move(declared));
}

inline System load_system(const std::string& path) { return parse_system(detail::read_file(path)); }

// Canonical form: sorted contents, contexts sorted by label, each context's
// contents sorted (pmf permuted to match), zero entries dropped, pmf keys in
// lexicographic order with -1 before +1.
inline Json system_to_json(const System& system) {
  Json root;
  root["contents"] = system.contents();
  std::vector<const ContextDistribution*> order;
  for (const auto& d : system.contexts()) order.push_back(&d);
  std::sort(order.begin(), order.end(),
            [](const auto* a, const auto* b) { return a->context < b->context; });
  Json contexts = Json::array();
  for (const auto* d : order) {
    std::vector<std::size_t> perm(d->contents.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::sort(perm.begin(), perm.end(),
              [&](std::size_t a, std::size_t b) { return d->contents[a] < d->contents[b]; });
    std::vector<ContentId> sorted;
    for (auto i : perm) sorted.push_back(d->contents[i]);
    Pmf permuted;
    for (const auto& [v, p] : d->pmf) {
      if (p == 0) continue;
      Values w;
      for (auto i : perm) w.push_back(v[i]);
      permuted[std::move(w)] += p;
    }
    Json pmf = Json::object();
    for (const auto& [v, p] : permuted) pmf[detail::values_key(v)] = to_string(p);
    Json cj;
    cj["label"] = d->context;
    cj["contents"] = sorted;
    cj["pmf"] = std::move(pmf);
    contexts.push_back(std::move(cj));
  }
  root["contexts"] = std::move(contexts);
  return root;
}

inline std::string write_system(const System& system) { return system_to_json(system).dump(2) + "\n"; }

// A hidden-variable file holds one of the two model kinds plus an optional layout.
struct HvFile {
  std::optional<HiddenVariableModel> model;
  std::optional<ContextHvModel> context_model;
  std::optional<Layout> layout;
};

inline std::vector<std::string> validate(const HiddenVariableModel& model) {
  std::vector<std::string> out;
  Rational total = 0;
  for (const auto& atom : model.support) {
    if (atom.probability < 0) out.push_back("negative probability " + to_string(atom.probability));
    if (atom.responses.size() != model.contents.size())
      out.push_back("a support point does not define every response function");
    total += atom.probability;
  }
  if (total != 1) out.push_back("hidden-variable probabilities sum to " + to_string(total) + ", not 1");
  return out;
}

namespace detail {

inline Json layout_to_json(const Layout& layout) {
  Json arr = Json::array();
  for (const auto& [label, qs] : layout) {
    Json e;
    e["label"] = label;
    e["contents"] = qs;
    arr.push_back(std::move(e));
  }
  return arr;
}

inline Json support_to_json(const std::vector<ContentId>& contents,
                            const std::vector<HiddenAtom>& support) {
  Json arr = Json::array();
  for (const auto& atom : support) {
    Json responses = Json::object();
    for (std::size_t i = 0; i < contents.size(); ++i) responses[contents[i]] = atom.responses[i];
    Json e;
    e["p"] = to_string(atom.probability);
    e["responses"] = std::move(responses);
    arr.push_back(std::move(e));
  }
  return arr;
}

inline std::vector<HiddenAtom> support_from_json(const Json& j, const std::vector<ContentId>& contents,
                                                 const Locator& loc) {
  if (!j.is_array()) loc.fail("\"support\" must be an array");
  std::vector<HiddenAtom> out;
  for (const auto& e : j) {
    require_keys(e, {"p", "responses"}, {"p", "responses"}, loc, "support point");
    HiddenAtom atom{{}, rational_field(e["p"], loc, "support point")};
    const auto& r = e["responses"];
    if (!r.is_object()) loc.fail("\"responses\" must be an object");
    for (const auto& [key, value] : r.items())
      if (std::find(contents.begin(), contents.end(), key) == contents.end())
        loc.fail("response for undeclared content '" + key + "'", Json(key).dump());
    for (const auto& q : contents) {
      if (!r.contains(q)) loc.fail("support point has no response for content '" + q + "'");
      const auto& v = r[q];
      if (!v.is_number_integer() || (v.get<int>() != 1 && v.get<int>() != -1))
        loc.fail("response for '" + q + "' must be +1 or -1", v.dump());
      atom.responses.push_back(v.get<int>());
    }
    out.push_back(std::move(atom));
  }
  return out;
}

}  // namespace detail

inline std::string write_hv(const HiddenVariableModel& model, const std::optional<Layout>& layout) {
  Json root;
  root["contents"] = model.contents;
  root["support"] = detail::support_to_json(model.contents, model.support);
  if (layout) root["layout"] = detail::layout_to_json(*layout);
  return root.dump(2) + "\n";
}

inline std::string write_hv(const ContextHvModel& model) {
  Json root;
  root["context"] = model.context;
  root["contents"] = model.contents;
  root["support"] = detail::support_to_json(model.contents, model.support);
  root["layout"] = detail::layout_to_json({{model.context, model.contents}});
  return root.dump(2) + "\n";
}

inline Layout parse_layout_json(const Json& j, const detail::Locator& loc) {
  if (!j.is_array()) loc.fail("\"layout\" must be an array");
  Layout out;
  for (const auto& e : j) {
    detail::require_keys(e, {"label", "contents"}, {"label", "contents"}, loc, "layout entry");
    if (!e["label"].is_string()) loc.fail("layout \"label\" must be a string");
    out.emplace_back(e["label"].get<std::string>(),
                     detail::string_list(e["contents"], loc, "layout contents"));
  }
  return out;
}

inline HvFile parse_hv(std::string_view text) {
  const detail::Locator loc(text);
  const Json root = detail::parse_json(text);
  detail::require_keys(root, {"context", "contents", "support", "layout"}, {"contents", "support"},
                       loc, "hidden-variable file");
  auto contents = detail::string_list(root["contents"], loc, "\"contents\"");
  auto support = detail::support_from_json(root["support"], contents, loc);
  HvFile file;
  if (root.contains("layout")) file.layout = parse_layout_json(root["layout"], loc);
  if (root.contains("context")) {
    if (!root["context"].is_string()) loc.fail("\"context\" must be a string");
    file.context_model = ContextHvModel{root["context"].get<std::string>(), std::move(contents),
                                        std::move(support)};
    return file;
  }
  // Context-independent models are kept in canonical (sorted) order.
  std::vector<std::size_t> perm(contents.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end(), [&](auto a, auto b) { return contents[a] < contents[b]; });
  HiddenVariableModel model;
  for (auto i : perm) model.contents.push_back(contents[i]);
  for (std::size_t i = 1; i < model.contents.size(); ++i)
    if (model.contents[i] == model.contents[i - 1])
      loc.fail("duplicate content '" + model.contents[i] + "'", Json(model.contents[i]).dump());
  for (auto& atom : support) {
    Values r;
    for (auto i : perm) r.push_back(atom.responses[i]);
    model.support.push_back({std::move(r), atom.probability});
  }
  std::sort(model.support.begin(), model.support.end(),
            [](const auto& a, const auto& b) { return a.responses < b.responses; });
  file.model = std::move(model);
  return file;
}

// "c1=q1,q2;c2=q2,q3"
inline std::optional<Layout> parse_layout_spec(std::string_view spec) {
  Layout out;
  auto split = [](std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;) {
      auto at = s.find(sep, start);
      parts.push_back(s.substr(start, at == std::string_view::npos ? at : at - start));
      if (at == std::string_view::npos) break;
      start = at + 1;
    }
    return parts;
  };
  for (auto entry : split(spec, ';')) {
    if (entry.empty()) continue;
    auto eq = entry.find('=');
    if (eq == std::string_view::npos || eq == 0) return std::nullopt;
    std::vector<ContentId> qs;
    for (auto q : split(entry.substr(eq + 1), ',')) {
      if (q.empty()) return std::nullopt;
      qs.emplace_back(q);
    }
    out.emplace_back(std::string(entry.substr(0, eq)), std::move(qs));
  }
  if (out.empty()) return std::nullopt;
  return out;
}

}  // namespace cbd
