#pragma once

// Closed-form criterion for rank-3 cyclic systems: three contents, three
// contexts of two contents each, arranged in a triangle. A consistently
// connected system of this shape is contextual iff
//
//   max over sign patterns with an odd number of minuses of
//       +-e1 +- e2 +- e3  >  1
//
// where e1, e2, e3 are the within-context product expectations.

#include "cbd/error.hpp"
#include "cbd/rational.hpp"
#include "cbd/system.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <vector>

namespace cbd {

struct Cyclic3View {
  // contexts[i] holds contents[i] and contents[(i + 1) % 3];
  // e[i] = <R_{contents[i]} R_{contents[i+1]}> in contexts[i].
  std::array<ContextId, 3> contexts;
  std::array<ContentId, 3> contents;
  std::array<Rational, 3> e;
};

inline std::optional<Cyclic3View> is_cyclic3(const System& system) {
  const auto& ctx = system.contexts();
  if (ctx.size() != 3) return std::nullopt;
  for (const auto& d : ctx)
    if (d.contents.size() != 2 || d.contents[0] == d.contents[1]) return std::nullopt;
  const auto conn = system.connections();
  if (conn.size() != 3) return std::nullopt;
  for (const auto& [q, cs] : conn)
    if (cs.size() != 2) return std::nullopt;
  // Three 2-element contexts over three contents, each content used twice:
  // either a triangle or a repeated context; rule out the latter.
  const auto graph = context_graph(system);
  if (graph.edge_count() != 3) return std::nullopt;

  const ContextDistribution* cur = &*std::min_element(
      ctx.begin(), ctx.end(), [](const auto& x, const auto& y) { return x.context < y.context; });
  Cyclic3View view;
  ContentId a = cur->contents[0];
  ContentId b = cur->contents[1];
  for (std::size_t i = 0; i < 3; ++i) {
    view.contexts[i] = cur->context;
    view.contents[i] = a;
    view.e[i] = correlation(system, cur->context, a, b);
    const ContextDistribution* next = nullptr;
    for (const auto& d : ctx)
      if (&d != cur && d.contains(b)) next = &d;
    if (next == nullptr) return std::nullopt;
    a = b;
    b = next->contents[0] == b ? next->contents[1] : next->contents[0];
    cur = next;
  }
  return view;
}

inline Rational suppes_zanotti_value(const Cyclic3View& view) {
  const auto& [e1, e2, e3] = view.e;
  return std::max({Rational(-e1 + e2 + e3), Rational(e1 - e2 + e3), Rational(e1 + e2 - e3),
                   Rational(-e1 - e2 - e3)});
}

inline Rational suppes_zanotti_value(const Rational& e1, const Rational& e2, const Rational& e3) {
  return suppes_zanotti_value(Cyclic3View{{}, {}, {e1, e2, e3}});
}

inline bool cyclic3_contextual(const System& system) {
  require_valid(system);
  auto view = is_cyclic3(system);
  if (!view)
    throw PreconditionError("system is not rank-3 cyclic; use the general LP analysis instead");
  if (!is_consistently_connected(system).consistent)
    throw PreconditionError(
        "system is not consistently connected; use the general LP analysis instead");
  return suppes_zanotti_value(*view) > 1;
}

}  // namespace cbd
