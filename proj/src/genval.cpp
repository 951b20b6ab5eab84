#include "toposval/genval.hpp"

#include <algorithm>

#include "toposval/error.hpp"

namespace toposval {

namespace {

std::string elem(const PropositionPresheaf& g, ObjId a, int d) {
  return g.underlying->element_label(a, d);
}

std::string stage(const PropositionPresheaf& g, ObjId a, int d) {
  return g.base().object_label(a) + "." + elem(g, a, d);
}

} // namespace

ValidationReport validate_proposition_presheaf(const PropositionPresheaf& g) {
  ValidationReport report = validate_presheaf(*g.underlying);
  const FiniteCategory& cat = g.base();
  if (static_cast<int>(g.leq.size()) != cat.object_count() ||
      static_cast<int>(g.bottom.size()) != cat.object_count() ||
      static_cast<int>(g.top.size()) != cat.object_count())
    throw_malformed("proposition presheaf order data does not cover every object");

  for (ObjId a = 0; a < cat.object_count(); ++a) {
    const int n = g.size_at(a);
    if (static_cast<int>(g.leq[a].size()) != n)
      throw_malformed("order relation at '" + cat.object_label(a) +
                      "' is not total");
    for (int d = 0; d < n; ++d) {
      if (static_cast<int>(g.leq[a][d].size()) != n)
        throw_malformed("order relation at '" + cat.object_label(a) +
                        "' is not total");
      if (!g.le(a, d, d))
        report.add("order-reflexivity", stage(g, a, d), "d <= d", "fails");
    }
    for (int d = 0; d < n; ++d) {
      for (int e = 0; e < n; ++e) {
        if (d != e && g.le(a, d, e) && g.le(a, e, d))
          report.add("order-antisymmetry",
                     stage(g, a, d) + " vs " + elem(g, a, e),
                     "d = e", "distinct");
        for (int h = 0; h < n; ++h) {
          if (g.le(a, d, e) && g.le(a, e, h) && !g.le(a, d, h))
            report.add("order-transitivity",
                       stage(g, a, d) + " <= " + elem(g, a, e) +
                           " <= " + elem(g, a, h),
                       "d <= h", "fails");
        }
      }
    }
    for (int d = 0; d < n; ++d) {
      if (!g.le(a, g.bottom[a], d))
        report.add("least-element", stage(g, a, d),
                   elem(g, a, g.bottom[a]) + " <= d", "fails");
      if (!g.le(a, d, g.top[a]))
        report.add("greatest-element", stage(g, a, d),
                   "d <= " + elem(g, a, g.top[a]), "fails");
    }
  }
  return report;
}

std::optional<int> order_meet(const PropositionPresheaf& g, ObjId a, int d,
                              int e) {
  const int n = g.size_at(a);
  std::vector<int> lower;
  for (int x = 0; x < n; ++x) {
    if (g.le(a, x, d) && g.le(a, x, e)) lower.push_back(x);
  }
  for (int x : lower) {
    bool greatest = true;
    for (int y : lower) {
      if (!g.le(a, y, x)) {
        greatest = false;
        break;
      }
    }
    if (greatest) return x;
  }
  return std::nullopt;
}

ValidationReport validate_comparison_functor(const PropositionPresheaf& g,
                                             const ComparisonFunctor& c) {
  const FiniteCategory& cat = g.base();
  if (!(c.base == g.underlying->base_ptr() || *c.base == cat))
    throw_malformed("comparison functor is over a different base category");
  if (static_cast<int>(c.map.size()) != cat.morphism_count())
    throw_malformed("comparison functor does not cover every morphism");

  ValidationReport report;
  for (MorphId f = 0; f < cat.morphism_count(); ++f) {
    const auto& m = cat.morphism(f);
    if (static_cast<int>(c.map[f].size()) != g.size_at(m.dom))
      throw_malformed("comparison map for '" + m.label + "' is not total");
    for (int v : c.map[f]) {
      if (v < 0 || v >= g.size_at(m.cod))
        throw_malformed("comparison map for '" + m.label +
                        "' falls outside the target set");
    }
    if (cat.is_identity(f)) {
      for (int d = 0; d < g.size_at(m.dom); ++d) {
        if (c.map[f][d] != d)
          report.add("comparison-identity", stage(g, m.dom, d),
                     elem(g, m.dom, d), elem(g, m.cod, c.map[f][d]));
      }
    }
  }
  // C(f∘g) = C(f)∘C(g) for g: C -> B, f: B -> A.
  for (MorphId gm = 0; gm < cat.morphism_count(); ++gm) {
    for (MorphId f = 0; f < cat.morphism_count(); ++f) {
      if (!cat.composable(gm, f)) continue;
      MorphId fg = cat.compose(gm, f);
      ObjId c_obj = cat.morphism(gm).dom;
      for (int d = 0; d < g.size_at(c_obj); ++d) {
        int direct = c.map[fg][d];
        int stepped = c.map[f][c.map[gm][d]];
        if (direct != stepped)
          report.add("comparison-functoriality",
                     "(" + cat.morphism_label(gm) + ", " +
                         cat.morphism_label(f) + ") at " + elem(g, c_obj, d),
                     elem(g, cat.morphism(f).cod, stepped),
                     elem(g, cat.morphism(f).cod, direct));
      }
    }
  }
  return report;
}

CoarseGrainingReport check_coarse_graining(const PropositionPresheaf& g,
                                           const ComparisonFunctor& c) {
  CoarseGrainingReport out;
  out.required.merge(validate_comparison_functor(g, c));
  const FiniteCategory& cat = g.base();

  for (MorphId f = 0; f < cat.morphism_count(); ++f) {
    const auto& m = cat.morphism(f);
    const auto& down = g.underlying->transition(f); // G(f): G(A) -> G(B)
    const auto& up = c.map[f];                      // C(f): G(B) -> G(A)

    for (int d = 0; d < g.size_at(m.cod); ++d) {
      if (!g.le(m.cod, d, up[down[d]]))
        out.required.add("coarse-graining",
                         cat.morphism_label(f) + " at " + elem(g, m.cod, d),
                         elem(g, m.cod, d) +
                             " <= " + elem(g, m.cod, up[down[d]]),
                         "fails");
      for (int e = 0; e < g.size_at(m.cod); ++e) {
        if (g.le(m.cod, d, e) && !g.le(m.dom, down[d], down[e]))
          out.required.add("monotonicity",
                           cat.morphism_label(f) + " at " +
                               elem(g, m.cod, d) + " <= " + elem(g, m.cod, e),
                           elem(g, m.dom, down[d]) +
                               " <= " + elem(g, m.dom, down[e]),
                           "fails");
      }
    }

    bool retraction_holds = true;
    for (int d = 0; d < g.size_at(m.dom); ++d) {
      if (down[up[d]] != d) {
        retraction_holds = false;
        out.retraction.add("retraction",
                           cat.morphism_label(f) + " at " + elem(g, m.dom, d),
                           elem(g, m.dom, d), elem(g, m.dom, down[up[d]]));
      }
    }
    bool injective = true;
    for (int d = 0; d < g.size_at(m.dom) && injective; ++d) {
      for (int e = d + 1; e < g.size_at(m.dom); ++e) {
        if (up[d] == up[e]) {
          injective = false;
          break;
        }
      }
    }
    if (!cat.is_identity(f))
      out.facts.push_back({cat.morphism_label(f), retraction_holds, injective});
  }
  return out;
}

ValidationReport check_local_valuation(const PropositionPresheaf& g, ObjId a,
                                       const std::vector<Sieve>& phi) {
  const FiniteCategory& cat = g.base();
  const int n = g.size_at(a);
  if (static_cast<int>(phi.size()) != n)
    throw_malformed("local valuation at '" + cat.object_label(a) +
                    "' is not total on G(A)");
  for (const Sieve& s : phi) {
    if (s.at != a)
      throw_malformed("local valuation value lives at the wrong object");
  }

  ValidationReport report;
  const Sieve top = principal_sieve(cat, a);

  if (!phi[g.bottom[a]].members.empty())
    report.add("null-proposition", stage(g, a, g.bottom[a]), "{}",
               sieve_to_string(cat, phi[g.bottom[a]]));

  for (int d = 0; d < n; ++d) {
    for (int e = 0; e < n; ++e) {
      if (g.le(a, d, e) && !sieve_subset(phi[d], phi[e]))
        report.add("monotonicity",
                   stage(g, a, d) + " <= " + elem(g, a, e),
                   sieve_to_string(cat, phi[d]) +
                       " ⊆ " + sieve_to_string(cat, phi[e]),
                   "fails");
    }
  }

  int skipped = 0;
  for (int d = 0; d < n; ++d) {
    for (int e = 0; e < n; ++e) {
      if (d == e) continue;
      auto meet = order_meet(g, a, d, e);
      if (!meet) {
        if (d < e) ++skipped;
        continue;
      }
      if (*meet == g.bottom[a] && phi[d] == top && phi[e] == top)
        report.add("exclusivity",
                   stage(g, a, d) + " ∧ " + elem(g, a, e) + " = 0",
                   "phi(e) strictly below the principal sieve",
                   sieve_to_string(cat, phi[e]));
    }
  }
  if (skipped > 0)
    report.note("exclusivity at '" + cat.object_label(a) + "': " +
                std::to_string(skipped) + " pair(s) without a meet skipped");
  return report;
}

ValidationReport check_sieve_valued(const GeneralisedValuation& nu) {
  ValidationReport report;
  const PropositionPresheaf& g = *nu.over;
  const FiniteCategory& cat = g.base();
  if (static_cast<int>(nu.assign.size()) != cat.object_count())
    throw_malformed("valuation does not cover every object");
  for (ObjId a = 0; a < cat.object_count(); ++a) {
    if (static_cast<int>(nu.assign[a].size()) != g.size_at(a))
      throw_malformed("valuation at '" + cat.object_label(a) +
                      "' is not total on G(A)");
    for (int d = 0; d < g.size_at(a); ++d) {
      const Sieve& s = nu.at(a, d);
      if (s.at != a)
        throw_malformed("value at " + stage(g, a, d) +
                        " lives at the wrong object");
      if (!is_sieve(cat, a, s.members))
        report.add("sieve-closure", stage(g, a, d),
                   "precomposition-closed set",
                   sieve_to_string(cat, s));
    }
  }
  return report;
}

ValidationReport check_func(const GeneralisedValuation& nu) {
  ValidationReport report;
  const PropositionPresheaf& g = *nu.over;
  const FiniteCategory& cat = g.base();

  for (MorphId f = 0; f < cat.morphism_count(); ++f) {
    const auto& m = cat.morphism(f);
    for (int d = 0; d < g.size_at(m.cod); ++d) {
      const Sieve& pulled = nu.at(m.dom, g.underlying->apply(f, d));
      Sieve expected = pullback_sieve(cat, nu.at(m.cod, d), f);
      if (pulled != expected)
        report.add("functional-composition",
                   cat.morphism_label(f) + " at " + stage(g, m.cod, d),
                   sieve_to_string(cat, expected),
                   sieve_to_string(cat, pulled));
    }
  }
  return report;
}

NatTransResult nat_trans_of_valuation(const GeneralisedValuation& nu,
                                      const Omega& omega) {
  const PropositionPresheaf& g = *nu.over;
  const FiniteCategory& cat = g.base();
  ValidationReport sieves = check_sieve_valued(nu);
  if (!sieves.ok())
    throw_malformed("valuation is not sieve-valued (" +
                    sieves.violations.front().where + ")");

  NaturalTransformation n{g.underlying, omega.presheaf(), {}};
  n.components.resize(cat.object_count());
  for (ObjId a = 0; a < cat.object_count(); ++a) {
    n.components[a].resize(g.size_at(a));
    for (int d = 0; d < g.size_at(a); ++d)
      n.components[a][d] = omega.index_of(a, nu.at(a, d));
  }

  ValidationReport squares = check_natural(n);
  NatTransResult result;
  if (squares.ok()) {
    result.transformation = std::move(n);
    return result;
  }
  for (MorphId f = 0; f < cat.morphism_count() && !result.witness; ++f) {
    const auto& m = cat.morphism(f);
    for (int d = 0; d < g.size_at(m.cod); ++d) {
      int down_then_map = n.components[m.dom][g.underlying->apply(f, d)];
      int map_then_down = n.target->apply(f, n.components[m.cod][d]);
      if (down_then_map != map_then_down) {
        result.witness = NatTransFailure{
            cat.morphism_label(f), stage(g, m.cod, d),
            n.target->element_label(m.dom, map_then_down),
            n.target->element_label(m.dom, down_then_map)};
        break;
      }
    }
  }
  return result;
}

TruthSetValuation valuation_from_truth_set(
    std::shared_ptr<const PropositionPresheaf> g,
    const std::function<bool(ObjId, int)>& totally_true) {
  const FiniteCategory& cat = g->base();
  GeneralisedValuation nu{g, {}};
  nu.assign.resize(cat.object_count());
  for (ObjId a = 0; a < cat.object_count(); ++a) {
    nu.assign[a].reserve(g->size_at(a));
    for (int d = 0; d < g->size_at(a); ++d) {
      Sieve s{a, {}};
      for (MorphId f : cat.morphisms_into(a)) {
        if (totally_true(cat.morphism(f).dom, g->underlying->apply(f, d)))
          s.members.insert(f);
      }
      nu.assign[a].push_back(std::move(s));
    }
  }
  TruthSetValuation out{std::move(nu), {}};
  out.sieve_report = check_sieve_valued(out.valuation);
  return out;
}

ValidationReport check_partial_truth_axioms(const GeneralisedValuation& nu) {
  const PropositionPresheaf& g = *nu.over;
  const FiniteCategory& cat = g.base();
  ValidationReport report = check_sieve_valued(nu);

  auto principal_at = [&](ObjId a) { return principal_sieve(cat, a); };
  auto is_totally_true = [&](ObjId a, int d) {
    return nu.at(a, d) == principal_at(a);
  };

  // (a) total truth propagates to every weakening.
  for (ObjId a = 0; a < cat.object_count(); ++a) {
    for (int d = 0; d < g.size_at(a); ++d) {
      if (!is_totally_true(a, d)) continue;
      for (MorphId f : cat.morphisms_into(a)) {
        ObjId b = cat.morphism(f).dom;
        int weak = g.underlying->apply(f, d);
        if (!is_totally_true(b, weak))
          report.add("total-truth-propagation",
                     cat.morphism_label(f) + " from " + stage(g, a, d),
                     "principal sieve at '" + cat.object_label(b) + "'",
                     sieve_to_string(cat, nu.at(b, weak)));
      }
    }
  }

  // (b) containment of totally-true weakening sets implies inclusion.
  for (ObjId a = 0; a < cat.object_count(); ++a) {
    const int n = g.size_at(a);
    std::vector<std::set<MorphId>> tt(n);
    for (int d = 0; d < n; ++d) {
      for (MorphId f : cat.morphisms_into(a)) {
        if (is_totally_true(cat.morphism(f).dom, g.underlying->apply(f, d)))
          tt[d].insert(f);
      }
    }
    for (int d = 0; d < n; ++d) {
      for (int e = 0; e < n; ++e) {
        bool contained = std::includes(tt[e].begin(), tt[e].end(),
                                       tt[d].begin(), tt[d].end());
        if (contained && !sieve_subset(nu.at(a, d), nu.at(a, e)))
          report.add("truth-order",
                     stage(g, a, d) + " vs " + elem(g, a, e),
                     sieve_to_string(cat, nu.at(a, d)) + " ⊆ " +
                         sieve_to_string(cat, nu.at(a, e)),
                     "fails");
      }
    }
  }

  // (c) nu is reconstructed from its own totally-true set.
  TruthSetValuation rebuilt =
      valuation_from_truth_set(nu.over, is_totally_true);
  for (ObjId a = 0; a < cat.object_count(); ++a) {
    for (int d = 0; d < g.size_at(a); ++d) {
      if (!(rebuilt.valuation.at(a, d) == nu.at(a, d)))
        report.add("reconstruction", stage(g, a, d),
                   sieve_to_string(cat, rebuilt.valuation.at(a, d)),
                   sieve_to_string(cat, nu.at(a, d)));
    }
  }
  return report;
}

} // namespace toposval
