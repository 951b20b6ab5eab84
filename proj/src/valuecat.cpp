#include "toposval/valuecat.hpp"

#include <algorithm>

#include "toposval/error.hpp"

namespace toposval {

ValidationReport validate_value_category(const ValueCategory& vc) {
  const FiniteCategory& cat = *vc.cat;
  if (static_cast<int>(vc.values.size()) != cat.object_count() ||
      static_cast<int>(vc.fn.size()) != cat.morphism_count())
    throw_malformed("value category tables do not cover the base category");

  ValidationReport report = validate_category(cat);
  for (MorphId f = 0; f < cat.morphism_count(); ++f) {
    const auto& m = cat.morphism(f);
    if (static_cast<int>(vc.fn[f].size()) != vc.value_count(m.cod))
      throw_malformed("carried function for '" + m.label + "' is not total");
    for (int v : vc.fn[f]) {
      if (v < 0 || v >= vc.value_count(m.dom))
        throw_malformed("carried function for '" + m.label +
                        "' maps outside the value set");
    }
    if (cat.is_identity(f)) {
      for (int v = 0; v < vc.value_count(m.cod); ++v) {
        if (vc.fn[f][v] != v)
          report.add("carried-identity", m.label, vc.values[m.cod][v],
                     vc.values[m.dom][vc.fn[f][v]]);
      }
    }
  }
  for (MorphId g = 0; g < cat.morphism_count(); ++g) {
    for (MorphId f = 0; f < cat.morphism_count(); ++f) {
      if (!cat.composable(g, f)) continue;
      MorphId fg = cat.compose(g, f);
      ObjId a = cat.morphism(f).cod;
      for (int v = 0; v < vc.value_count(a); ++v) {
        if (vc.fn[fg][v] != vc.fn[g][vc.fn[f][v]])
          report.add("carried-composition",
                     "(" + cat.morphism_label(g) + ", " +
                         cat.morphism_label(f) + ") at " + vc.values[a][v],
                     vc.values[cat.morphism(g).dom][vc.fn[g][vc.fn[f][v]]],
                     vc.values[cat.morphism(g).dom][vc.fn[fg][v]]);
      }
    }
  }
  return report;
}

std::shared_ptr<const Presheaf> value_presheaf_of(const ValueCategory& vc) {
  PresheafBuilder builder(vc.cat);
  for (ObjId a = 0; a < vc.cat->object_count(); ++a)
    builder.set_elements(a, vc.values[a]);
  for (MorphId f = 0; f < vc.cat->morphism_count(); ++f) {
    if (!vc.cat->is_identity(f)) builder.set_transition(f, vc.fn[f]);
  }
  return builder.build();
}

namespace {

std::string subset_label(const ValueCategory& vc, ObjId a, unsigned mask) {
  std::string out = "{";
  bool first = true;
  for (int i = 0; i < vc.value_count(a); ++i) {
    if ((mask >> i) & 1u) {
      if (!first) out += ",";
      out += vc.values[a][i];
      first = false;
    }
  }
  return out + "}";
}

unsigned direct_image(const std::vector<int>& fn, unsigned mask) {
  unsigned out = 0;
  for (int i = 0; i < static_cast<int>(fn.size()); ++i) {
    if ((mask >> i) & 1u) out |= 1u << fn[i];
  }
  return out;
}

unsigned preimage(const std::vector<int>& fn, unsigned mask) {
  unsigned out = 0;
  for (int i = 0; i < static_cast<int>(fn.size()); ++i) {
    if ((mask >> fn[i]) & 1u) out |= 1u << i;
  }
  return out;
}

} // namespace

CoarseGraining coarse_graining_of(const ValueCategory& vc) {
  const FiniteCategory& cat = *vc.cat;
  for (ObjId a = 0; a < cat.object_count(); ++a) {
    if (vc.value_count(a) > 16)
      throw Error(ErrorKind::ResourceLimit,
                  "coarse-graining propositions over " +
                      std::to_string(vc.value_count(a)) +
                      " values exceed the desk-scale bound");
  }

  PresheafBuilder builder(vc.cat);
  for (ObjId a = 0; a < cat.object_count(); ++a) {
    const unsigned total = 1u << vc.value_count(a);
    std::vector<std::string> labels(total);
    for (unsigned mask = 0; mask < total; ++mask)
      labels[mask] = subset_label(vc, a, mask);
    builder.set_elements(a, std::move(labels));
  }
  for (MorphId f = 0; f < cat.morphism_count(); ++f) {
    if (cat.is_identity(f)) continue;
    const auto& m = cat.morphism(f);
    const unsigned total = 1u << vc.value_count(m.cod);
    std::vector<int> table(total);
    for (unsigned mask = 0; mask < total; ++mask)
      table[mask] = static_cast<int>(direct_image(vc.fn[f], mask));
    builder.set_transition(f, std::move(table));
  }

  auto propositions = std::make_shared<PropositionPresheaf>();
  propositions->underlying = builder.build();
  propositions->leq.resize(cat.object_count());
  propositions->bottom.assign(cat.object_count(), 0);
  propositions->top.resize(cat.object_count());
  for (ObjId a = 0; a < cat.object_count(); ++a) {
    const unsigned total = 1u << vc.value_count(a);
    propositions->top[a] = static_cast<int>(total - 1);
    propositions->leq[a].assign(total, std::vector<char>(total, 0));
    for (unsigned d = 0; d < total; ++d) {
      for (unsigned e = 0; e < total; ++e)
        propositions->leq[a][d][e] = ((d & ~e) == 0) ? 1 : 0;
    }
  }

  ComparisonFunctor comparison{vc.cat, {}};
  comparison.map.resize(cat.morphism_count());
  for (MorphId f = 0; f < cat.morphism_count(); ++f) {
    const auto& m = cat.morphism(f);
    const unsigned total = 1u << vc.value_count(m.dom);
    comparison.map[f].resize(total);
    for (unsigned mask = 0; mask < total; ++mask)
      comparison.map[f][mask] = static_cast<int>(preimage(vc.fn[f], mask));
  }
  return CoarseGraining{std::move(propositions), std::move(comparison)};
}

int proposition_index(const ValueCategory& vc, ObjId a,
                      const std::vector<int>& delta) {
  unsigned mask = 0;
  for (int v : delta) {
    if (v < 0 || v >= vc.value_count(a))
      throw_malformed("proposition names a value outside the set at '" +
                      vc.cat->object_label(a) + "'");
    mask |= 1u << v;
  }
  return static_cast<int>(mask);
}

ValidationReport validate_partial_valuation(const ValueCategory& vc,
                                            const PartialValuation& v) {
  const FiniteCategory& cat = *vc.cat;
  if (static_cast<int>(v.value.size()) != cat.object_count())
    throw_malformed("partial valuation does not cover every object");
  ValidationReport report;
  for (ObjId a = 0; a < cat.object_count(); ++a) {
    if (v.defined(a) && v.value[a] >= vc.value_count(a))
      throw_malformed("partial valuation at '" + cat.object_label(a) +
                      "' names an unknown value");
  }
  for (MorphId f = 0; f < cat.morphism_count(); ++f) {
    const auto& m = cat.morphism(f);
    if (!v.defined(m.cod)) continue;
    if (!v.defined(m.dom)) {
      report.add("domain-closure", cat.morphism_label(f),
                 "'" + cat.object_label(m.dom) + "' in the domain", "absent");
      continue;
    }
    int expected = vc.fn[f][v.value[m.cod]];
    if (v.value[m.dom] != expected)
      report.add("functional-composition", cat.morphism_label(f),
                 vc.values[m.dom][expected],
                 vc.values[m.dom][v.value[m.dom]]);
  }
  return report;
}

GeneralisedValuation valuation_from_mask_predicate(
    const ValueCategory& vc, const CoarseGraining& cg,
    const std::function<bool(ObjId, unsigned)>& holds) {
  const FiniteCategory& cat = *vc.cat;
  GeneralisedValuation nu{cg.propositions, {}};
  nu.assign.resize(cat.object_count());
  for (ObjId a = 0; a < cat.object_count(); ++a) {
    const unsigned total = 1u << vc.value_count(a);
    nu.assign[a].reserve(total);
    for (unsigned mask = 0; mask < total; ++mask) {
      Sieve s{a, {}};
      for (MorphId f : cat.morphisms_into(a)) {
        if (holds(cat.morphism(f).dom, direct_image(vc.fn[f], mask)))
          s.members.insert(f);
      }
      nu.assign[a].push_back(std::move(s));
    }
  }
  return nu;
}

GeneralisedValuation valuation_from_partial(const ValueCategory& vc,
                                            const CoarseGraining& cg,
                                            const PartialValuation& v) {
  ValidationReport valid = validate_partial_valuation(vc, v);
  if (!valid.ok()) {
    const Violation& first = valid.violations.front();
    throw_malformed("invalid partial valuation: " + first.condition + " at " +
                    first.where);
  }
  return valuation_from_mask_predicate(
      vc, cg, [&](ObjId b, unsigned image_mask) {
        return v.defined(b) && ((image_mask >> v.value[b]) & 1u) != 0;
      });
}

ValidationReport verify_generalised_valuation(const ValueCategory& vc,
                                              const GeneralisedValuation& nu) {
  ValidationReport report = check_sieve_valued(nu);
  report.merge(check_func(nu));
  for (ObjId a = 0; a < vc.cat->object_count(); ++a)
    report.merge(check_local_valuation(*nu.over, a, nu.assign[a]));
  return report;
}

} // namespace toposval
