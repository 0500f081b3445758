#pragma once

// Systems of dichotomous random variables R_q^c, indexed by content q and
// context c. Each context carries a joint pmf over the +1/-1 values of its
// contents, taken in declaration order.

#include "cbd/error.hpp"
#include "cbd/rational.hpp"

#include <algorithm>
#include <compare>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cbd {

using ContentId = std::string;
using ContextId = std::string;

// A tuple of +1/-1 values.
using Values = std::vector<int>;

// Sparse pmf over value tuples; a missing tuple has probability 0.
using Pmf = std::map<Values, Rational>;

inline Rational probability(const Pmf& pmf, const Values& v) {
  auto it = pmf.find(v);
  return it == pmf.end() ? Rational(0) : it->second;
}

// Equal as distributions: explicit zeros and missing entries are the same.
inline bool same_distribution(const Pmf& a, const Pmf& b) {
  for (const auto& [v, p] : a)
    if (probability(b, v) != p) return false;
  for (const auto& [v, p] : b)
    if (probability(a, v) != p) return false;
  return true;
}

// Iterates over {-1,+1}^n in lexicographic order, -1 before +1.
inline std::vector<Values> all_values(std::size_t n) {
  std::vector<Values> out;
  out.reserve(std::size_t{1} << n);
  for (std::size_t code = 0; code < (std::size_t{1} << n); ++code) {
    Values v(n);
    for (std::size_t k = 0; k < n; ++k) v[k] = (code >> (n - 1 - k)) & 1 ? +1 : -1;
    out.push_back(std::move(v));
  }
  return out;
}

struct ContextDistribution {
  ContextId context;
  std::vector<ContentId> contents;  // Q_c, declaration order
  Pmf pmf;

  std::size_t index_of(std::string_view q) const {
    auto it = std::find(contents.begin(), contents.end(), q);
    if (it == contents.end())
      throw LookupError("content '" + std::string(q) + "' is not in context '" + context + "'");
    return static_cast<std::size_t>(it - contents.begin());
  }
  bool contains(std::string_view q) const {
    return std::find(contents.begin(), contents.end(), q) != contents.end();
  }
};

// One random variable R_q^c.
struct Slot {
  ContentId content;
  ContextId context;
  auto operator<=>(const Slot&) const = default;
};

// Unordered pair of contexts sharing a content; stored with context_a < context_b.
struct ConnectionPair {
  ContentId content;
  ContextId context_a;
  ContextId context_b;
  auto operator<=>(const ConnectionPair&) const = default;
};

class System {
 public:
  System() = default;
  explicit System(std::vector<ContextDistribution> contexts,
                  std::vector<ContentId> declared_contents = {})
      : contexts_(std::move(contexts)), declared_(std::move(declared_contents)) {}

  const std::vector<ContextDistribution>& contexts() const { return contexts_; }
  // Contents listed explicitly by the author, possibly including unused ones.
  const std::vector<ContentId>& declared_contents() const { return declared_; }

  const ContextDistribution& context(std::string_view c) const {
    for (const auto& d : contexts_)
      if (d.context == c) return d;
    throw LookupError("unknown context '" + std::string(c) + "'");
  }

  // Q, sorted.
  std::vector<ContentId> contents() const {
    std::set<ContentId> q;
    for (const auto& d : contexts_) q.insert(d.contents.begin(), d.contents.end());
    return {q.begin(), q.end()};
  }

  // All (q, c) with q in Q_c, sorted by content then context.
  std::vector<Slot> slots() const {
    std::set<Slot> s;
    for (const auto& d : contexts_)
      for (const auto& q : d.contents) s.insert(Slot{q, d.context});
    return {s.begin(), s.end()};
  }

  // Content -> sorted contexts containing it.
  std::map<ContentId, std::vector<ContextId>> connections() const {
    std::map<ContentId, std::set<ContextId>> m;
    for (const auto& d : contexts_)
      for (const auto& q : d.contents) m[q].insert(d.context);
    std::map<ContentId, std::vector<ContextId>> out;
    for (auto& [q, cs] : m) out[q] = {cs.begin(), cs.end()};
    return out;
  }

  std::vector<ConnectionPair> connection_pairs() const {
    std::vector<ConnectionPair> out;
    for (const auto& [q, cs] : connections())
      for (std::size_t a = 0; a < cs.size(); ++a)
        for (std::size_t b = a + 1; b < cs.size(); ++b) out.push_back({q, cs[a], cs[b]});
    return out;
  }

 private:
  std::vector<ContextDistribution> contexts_;
  std::vector<ContentId> declared_;
};

// Every invariant violation, one message each; empty iff the system is valid.
inline std::vector<std::string> validate(const System& system) {
  std::vector<std::string> out;
  if (system.contexts().empty()) out.push_back("system has no contexts");

  std::set<ContextId> seen_contexts;
  for (const auto& d : system.contexts()) {
    const std::string where = "context '" + d.context + "'";
    if (d.context.empty()) out.push_back("a context has an empty label");
    if (!seen_contexts.insert(d.context).second)
      out.push_back("duplicate context label '" + d.context + "'");
    if (d.contents.empty()) out.push_back(where + " has no contents");

    std::set<ContentId> seen;
    for (const auto& q : d.contents) {
      if (q.empty()) out.push_back(where + " has a content with an empty label");
      if (!seen.insert(q).second)
        out.push_back(where + " lists content '" + q + "' more than once");
    }

    Rational total = 0;
    bool shape_ok = true;
    for (const auto& [v, p] : d.pmf) {
      if (v.size() != d.contents.size()) shape_ok = false;
      for (int x : v)
        if (x != 1 && x != -1) shape_ok = false;
      if (p < 0) out.push_back(where + " has negative probability " + to_string(p));
      total += p;
    }
    if (!shape_ok)
      out.push_back(where + " has a pmf entry that is not a +1/-1 tuple of length " +
                    std::to_string(d.contents.size()));
    if (total != 1) out.push_back(where + " pmf sums to " + to_string(total) + ", not 1");
  }

  std::set<ContentId> used;
  for (const auto& d : system.contexts()) used.insert(d.contents.begin(), d.contents.end());
  std::set<ContentId> declared;
  for (const auto& q : system.declared_contents()) {
    if (!declared.insert(q).second) out.push_back("duplicate content label '" + q + "'");
    if (!used.contains(q)) out.push_back("content '" + q + "' appears in no context");
  }
  if (!system.declared_contents().empty())
    for (const auto& q : used)
      if (!declared.contains(q)) out.push_back("content '" + q + "' is not declared");
  return out;
}

inline void require_valid(const System& system) {
  auto problems = validate(system);
  if (!problems.empty()) throw PreconditionError("invalid system: " + problems.front());
}

// Marginal pmf of the contents `subset` (in the given order) within context c.
inline Pmf marginal(const System& system, std::string_view c, const std::vector<ContentId>& subset) {
  const auto& d = system.context(c);
  if (subset.empty()) throw PreconditionError("marginal over an empty content set");
  std::vector<std::size_t> idx;
  for (const auto& q : subset) idx.push_back(d.index_of(q));
  Pmf out;
  for (const auto& [v, p] : d.pmf) {
    if (p == 0) continue;
    Values key;
    key.reserve(idx.size());
    for (std::size_t i : idx) key.push_back(v[i]);
    out[key] += p;
  }
  return out;
}

// Pr[R_q^c = +1].
inline Rational prob_plus(const System& system, std::string_view c, const ContentId& q) {
  return probability(marginal(system, c, {q}), Values{+1});
}

// <R_{q1}^c R_{q2}^c>.
inline Rational correlation(const System& system, std::string_view c, const ContentId& q1,
                            const ContentId& q2) {
  const auto& d = system.context(c);
  const std::size_t i = d.index_of(q1);
  const std::size_t j = d.index_of(q2);
  if (i == j) throw PreconditionError("correlation needs two distinct contents");
  Rational e = 0;
  for (const auto& [v, p] : d.pmf) e += p * (v[i] * v[j]);
  return e;
}

struct ConsistencyViolation {
  ConnectionPair pair;
  Rational plus_a;  // Pr[R_q^{context_a} = +1]
  Rational plus_b;
};

struct ConsistencyReport {
  bool consistent = true;
  std::vector<ConsistencyViolation> violations;
};

inline ConsistencyReport is_consistently_connected(const System& system) {
  ConsistencyReport r;
  for (const auto& pair : system.connection_pairs()) {
    Rational a = prob_plus(system, pair.context_a, pair.content);
    Rational b = prob_plus(system, pair.context_b, pair.content);
    if (a != b) {
      r.consistent = false;
      r.violations.push_back({pair, a, b});
    }
  }
  return r;
}

// Nodes are contexts; an edge joins two contexts sharing at least one content.
struct ContextGraph {
  std::vector<ContextId> nodes;  // sorted
  std::map<ContextId, std::set<ContextId>> adjacency;

  std::size_t edge_count() const {
    std::size_t twice = 0;
    for (const auto& [n, adj] : adjacency) twice += adj.size();
    return twice / 2;
  }
};

inline ContextGraph context_graph(const System& system) {
  ContextGraph g;
  for (const auto& d : system.contexts()) {
    g.nodes.push_back(d.context);
    g.adjacency[d.context];
  }
  std::sort(g.nodes.begin(), g.nodes.end());
  for (const auto& pair : system.connection_pairs()) {
    g.adjacency[pair.context_a].insert(pair.context_b);
    g.adjacency[pair.context_b].insert(pair.context_a);
  }
  return g;
}

// Subsystems induced by the connected components of the context graph,
// ordered by their smallest context label.
inline std::vector<System> connected_components(const System& system) {
  const auto g = context_graph(system);
  std::map<ContextId, std::size_t> component;
  std::size_t count = 0;
  for (const auto& start : g.nodes) {
    if (component.contains(start)) continue;
    std::vector<ContextId> stack{start};
    component[start] = count;
    while (!stack.empty()) {
      auto c = stack.back();
      stack.pop_back();
      for (const auto& n : g.adjacency.at(c))
        if (component.emplace(n, count).second) stack.push_back(n);
    }
    ++count;
  }
  std::vector<std::vector<ContextDistribution>> parts(count);
  for (const auto& d : system.contexts()) parts[component.at(d.context)].push_back(d);
  std::vector<System> out;
  out.reserve(count);
  for (auto& p : parts) out.emplace_back(std::move(p));
  return out;
}

}  // namespace cbd
