// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "commands.hpp"
#include "oracle.hpp"
#include "test_support.hpp"

#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace cbd;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("failed: ") + what;
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

Rational oracle_max_delta(const System& s) {
  auto summary = oracle::enumerate_vertices(build_coupling_lp(s, CouplingObjective::Delta));
  if (!summary.max_objective) throw std::runtime_error("oracle: empty polytope");
  return *summary.max_objective;
}

Outcome criterion_lp_equivalence() {
  Outcome o;
  std::mt19937_64 rng(2019);
  const int n = 500;
  int agree = 0, contextual = 0;
  const auto start = Clock::now();
  for (int i = 0; i < n; ++i) {
    auto s = test::random_consistent_cyclic3(rng, 64);
    const bool closed_form = cyclic3_contextual(s);
    const bool lp = analyze(s).measure > 0;
    agree += closed_form == lp;
    contextual += closed_form;
  }
  const double t = seconds_since(start);
  o.require(agree == n, std::to_string(n - agree) + " disagreements");
  o.require(t < 60.0, "runtime " + std::to_string(t) + " s >= 60 s");
  o.note(std::to_string(agree) + "/" + std::to_string(n) + " agree, " + std::to_string(contextual) +
         " contextual, " + std::to_string(t) + " s");
  return o;
}

Outcome criterion_anticorrelated() {
  Outcome o;
  auto s = test::cyclic3(-1, -1, -1);
  const Rational oracle = oracle_max_delta(s);
  o.require(oracle == 2, "vertex oracle gives " + to_string(oracle));
  const auto start = Clock::now();
  const auto sz = suppes_zanotti_value(*is_cyclic3(s));
  const bool contextual = cyclic3_contextual(s);
  const auto r = analyze(s);
  const double t = seconds_since(start);
  o.require(sz == 3, "SZ value " + to_string(sz));
  o.require(contextual && !r.noncontextual, "verdict");
  o.require(r.delta_max == 2 && r.delta_max == oracle, "delta_max " + to_string(r.delta_max));
  o.require(r.delta0 == 3, "delta0 " + to_string(r.delta0));
  o.require(r.measure == 1, "measure " + to_string(r.measure));
  o.require(t < 1.0, "runtime " + std::to_string(t) + " s");
  o.note("SZ 3, delta_max 2, measure 1, " + std::to_string(t) + " s");
  return o;
}

Outcome criterion_correlated() {
  Outcome o;
  auto s = test::cyclic3(1, 1, 1);
  o.require(suppes_zanotti_value(*is_cyclic3(s)) == 1, "SZ value");
  o.require(!cyclic3_contextual(s) && analyze(s).noncontextual, "verdict");
  auto ic = identically_connected_coupling(s);
  o.require(ic.has_value(), "identically connected coupling exists");
  if (!ic) return o;
  o.require(ic->pmf.size() == 2, "two atoms");
  for (const auto& [v, p] : ic->pmf) o.require(p == Rational(1, 2), "atom mass 1/2");
  auto back = realize(extract(*ic), layout_of(s));
  bool same = back.contexts().size() == s.contexts().size();
  for (std::size_t i = 0; same && i < s.contexts().size(); ++i)
    same = back.contexts()[i].contents == s.contexts()[i].contents &&
           same_distribution(back.contexts()[i].pmf, s.contexts()[i].pmf);
  o.require(same, "extract/realize round trip");
  o.note("2 atoms of mass 1/2, round trip exact");
  return o;
}

Outcome criterion_pairwise() {
  Outcome o;
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<long> den(1, 64);
  int ok = 0;
  for (int i = 0; i < 100; ++i) {
    const auto p1 = test::random_grid(rng, 0, 1, den(rng));
    const auto p2 = test::random_grid(rng, 0, 1, den(rng));
    LinearProgram lp;
    lp.num_vars = 4;
    lp.objective = {1, 0, 0, 1};
    lp.constraints = {{1, 1, 0, 0}, {1, 0, 1, 0}, {1, 1, 1, 1}};
    lp.rhs = {p1, p2, 1};
    ok += max_pair_equal_prob(p1, p2) == *oracle::enumerate_vertices(lp).max_objective;
  }
  o.require(ok == 100, std::to_string(100 - ok) + " mismatches");
  o.note(std::to_string(ok) + "/100 exact");
  return o;
}

Outcome criterion_joint_bound() {
  Outcome o;
  std::mt19937_64 rng(5);
  Rational worst = -3;
  for (int i = 0; i < 500; ++i) {
    System joint({ContextDistribution{"c", {"r1", "r2", "r3"}, test::random_pmf(rng, 3)}});
    const auto v = suppes_zanotti_value(correlation(joint, "c", "r1", "r2"),
                                        correlation(joint, "c", "r2", "r3"),
                                        correlation(joint, "c", "r3", "r1"));
    worst = std::max(worst, v);
  }
  o.require(worst <= 1, "max SZ value " + to_string(worst));
  o.note("max SZ over 500 joints " + to_string(worst));
  return o;
}

Outcome criterion_prbox() {
  Outcome o;
  auto s = test::cyclic({1, 1, 1, -1});
  const Rational oracle = oracle_max_delta(s);
  o.require(oracle == 3, "vertex oracle gives " + to_string(oracle));
  const auto start = Clock::now();
  const auto r = analyze(s);
  const double t = seconds_since(start);
  o.require(!r.noncontextual, "verdict");
  o.require(r.delta0 == 4, "delta0 " + to_string(r.delta0));
  o.require(r.delta_max == 3 && r.delta_max == oracle, "delta_max " + to_string(r.delta_max));
  o.require(r.measure == 1, "measure " + to_string(r.measure));
  o.require(t < 5.0, "runtime " + std::to_string(t) + " s");
  o.note("256 atoms, delta0 4, delta_max 3, measure 1, " + std::to_string(t) + " s");
  return o;
}

Outcome criterion_inconsistent() {
  Outcome o;
  auto s = test::inconsistent_cyclic3();
  o.require(!is_consistently_connected(s).consistent, "system is inconsistently connected");
  const auto r = analyze(s);
  o.require(r.delta0 == Rational(11, 4), "delta0 " + to_string(r.delta0));
  o.require(0 <= r.delta_max && r.delta_max <= r.delta0, "0 <= delta_max <= delta0");
  const Rational oracle = oracle_max_delta(s);
  o.require(r.delta_max == oracle, "vertex oracle gives " + to_string(oracle));
  o.require(verify_coupling(s, r.witness), "witness verifies");
  o.note("delta0 11/4, delta_max " + to_string(r.delta_max) + ", measure " + to_string(r.measure));
  return o;
}

Outcome criterion_additivity() {
  Outcome o;
  auto u = test::disjoint_union(test::cyclic3(-1, -1, -1, "x"), test::cyclic3(1, 1, 1, "y"));
  const auto total = analyze(u);
  Rational sum = 0;
  std::size_t contextual_parts = 0;
  const auto parts = connected_components(u);
  for (const auto& part : parts) {
    auto r = analyze(part);
    sum += r.measure;
    contextual_parts += !r.noncontextual;
  }
  o.require(parts.size() == 2 && contextual_parts == 1, "one contextual and one noncontextual part");
  o.require(sum == total.measure, "sum " + to_string(sum) + " vs total " + to_string(total.measure));
  o.note("component measures sum to " + to_string(sum) + " = total");
  return o;
}

Outcome criterion_determinism() {
  Outcome o;
  std::size_t files = 0;
  for (const auto& entry : std::filesystem::directory_iterator(CBD_FIXTURES)) {
    cli::AnalyzeOptions opts;
    opts.json = true;
    std::string first;
    for (int run = 0; run < 3; ++run) {
      std::ostringstream out, err;
      cli::cmd_analyze({entry.path().string()}, opts, out, err);
      if (run == 0) first = out.str();
      o.require(out.str() == first, entry.path().filename().string() + " differs between runs");
    }
    ++files;
  }
  o.note(std::to_string(files) + " fixtures, 3 runs each, byte-identical");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 criterion/LP equivalence (500 cyclic-3)", criterion_lp_equivalence},
      {"2 anticorrelated triple", criterion_anticorrelated},
      {"3 correlated triple", criterion_correlated},
      {"4 maximal pairwise coupling", criterion_pairwise},
      {"5 joint distributions satisfy SZ <= 1", criterion_joint_bound},
      {"6 cyclic-4 PR box", criterion_prbox},
      {"7 inconsistently connected support", criterion_inconsistent},
      {"8 decomposition additivity", criterion_additivity},
      {"9 determinism of analyze --json", criterion_determinism},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += !o.pass;
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << name << " -- " << o.detail << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
