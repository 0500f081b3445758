#pragma once

// Couplings of a system: joint distributions over every slot (q, c) whose
// per-context marginals reproduce the system. The coupling polytope is
// described over the full assignment space {-1,+1}^K, K = number of slots,
// and optimized with the exact simplex solver.

#include "cbd/error.hpp"
#include "cbd/lp.hpp"
#include "cbd/rational.hpp"
#include "cbd/system.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cbd {

inline constexpr std::size_t kDefaultMaxSlots = 16;

// Values aligned with System::slots().
using GlobalAssignment = Values;

struct Coupling {
  std::vector<Slot> slots;  // sorted, as System::slots()
  Pmf pmf;                  // keyed by GlobalAssignment, positive entries only
};

struct AnalysisResult {
  Rational delta_max;
  Rational delta0;
  Rational measure;  // delta0 - delta_max
  bool noncontextual = false;
  Coupling witness;
};

enum class CouplingObjective { Delta, Feasibility };

namespace detail {

inline std::vector<Slot> checked_slots(const System& system, std::size_t max_slots) {
  require_valid(system);
  auto slots = system.slots();
  if (slots.size() > max_slots) throw CapacityError(slots.size(), max_slots);
  return slots;
}

inline std::size_t slot_index(const std::vector<Slot>& slots, const Slot& s) {
  auto it = std::lower_bound(slots.begin(), slots.end(), s);
  if (it == slots.end() || *it != s)
    throw LookupError("slot (" + s.content + ", " + s.context + ") is not in the coupling");
  return static_cast<std::size_t>(it - slots.begin());
}

// Positions, in `slots`, of context d's variables in d's content order.
inline std::vector<std::size_t> context_positions(const std::vector<Slot>& slots,
                                                  const ContextDistribution& d) {
  std::vector<std::size_t> pos;
  for (const auto& q : d.contents) pos.push_back(slot_index(slots, Slot{q, d.context}));
  return pos;
}

struct PairPositions {
  ConnectionPair pair;
  std::size_t a;
  std::size_t b;
};

inline std::vector<PairPositions> pair_positions(const std::vector<Slot>& slots) {
  std::vector<PairPositions> out;
  for (std::size_t i = 0; i < slots.size(); ++i)
    for (std::size_t j = i + 1; j < slots.size() && slots[j].content == slots[i].content; ++j)
      out.push_back({{slots[i].content, slots[i].context, slots[j].context}, i, j});
  return out;
}

inline int count_equal_pairs(const std::vector<PairPositions>& pairs, const Values& v) {
  int n = 0;
  for (const auto& p : pairs) n += v[p.a] == v[p.b];
  return n;
}

// Coupling LP restricted to the given support columns.
inline LinearProgram coupling_lp(const System& system, const std::vector<Slot>& slots,
                                 const std::vector<GlobalAssignment>& columns,
                                 CouplingObjective objective) {
  LinearProgram lp;
  lp.num_vars = columns.size();
  lp.objective.assign(columns.size(), Rational(0));
  if (objective == CouplingObjective::Delta) {
    const auto pairs = pair_positions(slots);
    for (std::size_t j = 0; j < columns.size(); ++j)
      lp.objective[j] = count_equal_pairs(pairs, columns[j]);
  }
  for (const auto& d : system.contexts()) {
    const auto pos = context_positions(slots, d);
    const std::size_t first = lp.constraints.size();
    for (const auto& local : all_values(pos.size())) {
      lp.constraints.emplace_back(columns.size(), Rational(0));
      lp.rhs.push_back(probability(d.pmf, local));
    }
    for (std::size_t j = 0; j < columns.size(); ++j) {
      std::size_t code = 0;
      for (std::size_t p : pos) code = (code << 1) | (columns[j][p] > 0 ? 1u : 0u);
      lp.constraints[first + code][j] = 1;
    }
  }
  lp.constraints.emplace_back(columns.size(), Rational(1));
  lp.rhs.emplace_back(1);
  return lp;
}

inline Coupling coupling_from_solution(std::vector<Slot> slots,
                                       const std::vector<GlobalAssignment>& columns,
                                       const std::vector<Rational>& x) {
  Coupling c{std::move(slots), {}};
  for (std::size_t j = 0; j < columns.size(); ++j)
    if (x[j] > 0) c.pmf.emplace(columns[j], x[j]);
  return c;
}

}  // namespace detail

// All 2^K global assignments, lexicographic over the sorted slots, -1 before +1.
inline std::vector<GlobalAssignment> enumerate_assignments(const System& system,
                                                           std::size_t max_slots = kDefaultMaxSlots) {
  return all_values(detail::checked_slots(system, max_slots).size());
}

// Variables: probability of each global assignment. Rows: one marginal
// equality per (context, local assignment), then total mass 1.
inline LinearProgram build_coupling_lp(const System& system, CouplingObjective objective,
                                       std::size_t max_slots = kDefaultMaxSlots) {
  const auto slots = detail::checked_slots(system, max_slots);
  return detail::coupling_lp(system, slots, all_values(slots.size()), objective);
}

// Pr[S = S'] for every connection pair of the coupling.
inline std::map<ConnectionPair, Rational> connection_equality_probs(const Coupling& coupling) {
  std::map<ConnectionPair, Rational> out;
  for (const auto& p : detail::pair_positions(coupling.slots)) {
    Rational sum = 0;
    for (const auto& [v, prob] : coupling.pmf)
      if (v[p.a] == v[p.b]) sum += prob;
    out.emplace(p.pair, sum);
  }
  return out;
}

inline Rational coupling_delta(const Coupling& coupling) {
  Rational total = 0;
  for (const auto& [pair, p] : connection_equality_probs(coupling)) total += p;
  return total;
}

// Marginal of the coupling over an arbitrary list of its slots.
inline Pmf coupling_marginal(const Coupling& coupling, const std::vector<Slot>& over) {
  std::vector<std::size_t> pos;
  for (const auto& s : over) pos.push_back(detail::slot_index(coupling.slots, s));
  Pmf out;
  for (const auto& [v, p] : coupling.pmf) {
    Values key;
    for (std::size_t i : pos) key.push_back(v[i]);
    out[key] += p;
  }
  return out;
}

inline bool verify_coupling(const System& system, const Coupling& coupling) {
  if (coupling.slots != system.slots())
    throw StructuralError("coupling slots do not match the system's slot set");
  Rational total = 0;
  for (const auto& [v, p] : coupling.pmf) {
    if (v.size() != coupling.slots.size() || p < 0) return false;
    for (int x : v)
      if (x != 1 && x != -1) return false;
    total += p;
  }
  if (total != 1) return false;
  for (const auto& d : system.contexts()) {
    std::vector<Slot> over;
    for (const auto& q : d.contents) over.push_back(Slot{q, d.context});
    if (!same_distribution(coupling_marginal(coupling, over), d.pmf)) return false;
  }
  return true;
}

struct DeltaOptimum {
  Rational delta;
  Coupling witness;
};

// Maximum over all couplings of the sum of connection-equality probabilities.
inline DeltaOptimum max_delta(const System& system, std::size_t max_slots = kDefaultMaxSlots) {
  auto slots = detail::checked_slots(system, max_slots);
  const auto columns = all_values(slots.size());
  const auto lp = detail::coupling_lp(system, slots, columns, CouplingObjective::Delta);
  auto result = solve(lp);
  // The product coupling always exists and the objective is bounded by N.
  if (result.status != LpStatus::Optimal)
    throw std::logic_error(std::string("coupling LP unexpectedly ") + to_string(result.status));
  return {*result.optimum, detail::coupling_from_solution(std::move(slots), columns, result.solution)};
}

// Largest Pr[X = Y] over couplings of two +1/-1 variables with
// Pr[X = +1] = p1, Pr[Y = +1] = p2.
inline Rational max_pair_equal_prob(const Rational& p1, const Rational& p2) {
  if (p1 < 0 || p1 > 1 || p2 < 0 || p2 > 1)
    throw DomainError("probabilities must lie in [0, 1], got " + to_string(p1) + " and " +
                      to_string(p2));
  return 1 - abs(p1 - p2);
}

inline Rational delta0(const System& system) {
  require_valid(system);
  Rational sum = 0;
  for (const auto& pair : system.connection_pairs())
    sum += max_pair_equal_prob(prob_plus(system, pair.context_a, pair.content),
                               prob_plus(system, pair.context_b, pair.content));
  return sum;
}

inline AnalysisResult analyze(const System& system, std::size_t max_slots = kDefaultMaxSlots) {
  auto [dmax, witness] = max_delta(system, max_slots);
  Rational d0 = delta0(system);
  Rational measure = d0 - dmax;
  const bool noncontextual = measure == 0;
  return {std::move(dmax), std::move(d0), std::move(measure), noncontextual, std::move(witness)};
}

// A coupling in which every connection pair agrees with probability 1, if any.
inline std::optional<Coupling> identically_connected_coupling(
    const System& system, std::size_t max_slots = kDefaultMaxSlots) {
  auto slots = detail::checked_slots(system, max_slots);
  // Admissible atoms are content-value profiles spread over the slots.
  const auto contents = system.contents();
  std::vector<GlobalAssignment> columns;
  for (const auto& profile : all_values(contents.size())) {
    GlobalAssignment g(slots.size());
    for (std::size_t i = 0; i < slots.size(); ++i) {
      auto q = std::lower_bound(contents.begin(), contents.end(), slots[i].content);
      g[i] = profile[static_cast<std::size_t>(q - contents.begin())];
    }
    columns.push_back(std::move(g));
  }
  auto result = solve(detail::coupling_lp(system, slots, columns, CouplingObjective::Feasibility));
  if (result.status != LpStatus::Optimal) return std::nullopt;
  return detail::coupling_from_solution(std::move(slots), columns, result.solution);
}

// Product coupling: contexts mutually independent.
inline Coupling independent_coupling(const System& system, std::size_t max_slots = kDefaultMaxSlots) {
  auto slots = detail::checked_slots(system, max_slots);
  Pmf acc{{GlobalAssignment(slots.size(), 0), Rational(1)}};
  for (const auto& d : system.contexts()) {
    const auto pos = detail::context_positions(slots, d);
    Pmf next;
    for (const auto& [partial, pa] : acc)
      for (const auto& [local, pl] : d.pmf) {
        if (pl == 0) continue;
        GlobalAssignment g = partial;
        for (std::size_t k = 0; k < pos.size(); ++k) g[pos[k]] = local[k];
        next[std::move(g)] += pa * pl;
      }
    acc = std::move(next);
  }
  return {std::move(slots), std::move(acc)};
}

}  // namespace cbd
