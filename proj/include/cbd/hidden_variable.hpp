#pragma once

// Hidden-variable models with context-independent response functions:
// a finite random variable H and, for each content q, f_q : supp(H) -> {-1,+1},
// so that R_q^c is distributed as f_q(H) in every context c containing q.
//
// Hidden values are content-value profiles; f_q is the projection onto q.

#include "cbd/coupling.hpp"
#include "cbd/error.hpp"
#include "cbd/rational.hpp"
#include "cbd/system.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace cbd {

struct HiddenAtom {
  Values responses;  // f_q(h) for each q, aligned with the model's contents
  Rational probability;
};

struct HiddenVariableModel {
  std::vector<ContentId> contents;  // sorted
  std::vector<HiddenAtom> support;  // sorted by responses

  int response(const ContentId& q, std::size_t atom) const {
    auto it = std::lower_bound(contents.begin(), contents.end(), q);
    if (it == contents.end() || *it != q)
      throw LookupError("no response function for content '" + q + "'");
    return support.at(atom).responses[static_cast<std::size_t>(it - contents.begin())];
  }
};

// Per-context variant: H_c with f_q^c defined only on Q_c.
struct ContextHvModel {
  ContextId context;
  std::vector<ContentId> contents;  // Q_c in declaration order
  std::vector<HiddenAtom> support;
};

using Layout = std::vector<std::pair<ContextId, std::vector<ContentId>>>;

inline Layout layout_of(const System& system) {
  Layout out;
  for (const auto& d : system.contexts()) out.emplace_back(d.context, d.contents);
  return out;
}

// Collapses an identically connected coupling onto content-value profiles.
inline HiddenVariableModel extract(const Coupling& coupling) {
  for (const auto& [pair, p] : connection_equality_probs(coupling))
    if (p != 1)
      throw PreconditionError("coupling is not identically connected: Pr[" + pair.content + "@" +
                              pair.context_a + " = " + pair.content + "@" + pair.context_b +
                              "] = " + to_string(p));

  HiddenVariableModel model;
  for (const auto& s : coupling.slots)
    if (model.contents.empty() || model.contents.back() != s.content)
      model.contents.push_back(s.content);

  std::map<Values, Rational> merged;
  for (const auto& [g, p] : coupling.pmf) {
    if (p == 0) continue;
    Values profile;
    profile.reserve(model.contents.size());
    for (std::size_t i = 0; i < coupling.slots.size(); ++i)
      if (i == 0 || coupling.slots[i].content != coupling.slots[i - 1].content)
        profile.push_back(g[i]);
    merged[std::move(profile)] += p;
  }
  for (auto& [profile, p] : merged) model.support.push_back({profile, p});
  return model;
}

// Pushforward of H through the response functions, one context per layout entry.
inline System realize(const HiddenVariableModel& model, const Layout& layout) {
  std::vector<ContextDistribution> contexts;
  for (const auto& [label, qs] : layout) {
    ContextDistribution d{label, qs, {}};
    for (std::size_t h = 0; h < model.support.size(); ++h) {
      Values v;
      for (const auto& q : qs) v.push_back(model.response(q, h));
      if (model.support[h].probability != 0) d.pmf[v] += model.support[h].probability;
    }
    contexts.push_back(std::move(d));
  }
  return System(std::move(contexts));
}

inline ContextHvModel context_specific_hv(const ContextDistribution& dist) {
  ContextHvModel model{dist.context, dist.contents, {}};
  for (const auto& [v, p] : dist.pmf)
    if (p > 0) model.support.push_back({v, p});
  return model;
}

inline ContextDistribution realize(const ContextHvModel& model) {
  ContextDistribution d{model.context, model.contents, {}};
  for (const auto& atom : model.support) d.pmf[atom.responses] += atom.probability;
  return d;
}

}  // namespace cbd
