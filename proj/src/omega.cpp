#include "toposval/omega.hpp"

#include <algorithm>

#include "toposval/error.hpp"

namespace toposval {

namespace {

// Sieves at `a` are exactly the down-closed subsets of the morphisms into
// `a` under the "factors through" preorder. Enumerated by filtering all
// subsets; morphism counts are tiny at desk scale.
std::vector<Sieve> enumerate_sieves(const FiniteCategory& cat, ObjId a) {
  const auto& into = cat.morphisms_into(a);
  const int k = static_cast<int>(into.size());
  if (k > 22)
    throw Error(ErrorKind::ResourceLimit,
                "sieve enumeration over " + std::to_string(k) +
                    " morphisms into '" + cat.object_label(a) +
                    "' exceeds the desk-scale bound");

  std::vector<int> pos(cat.morphism_count(), -1);
  for (int i = 0; i < k; ++i) pos[into[i]] = i;

  // closure_mask[i]: all f∘g for f = into[i], as a bitmask over `into`.
  std::vector<unsigned long long> closure_mask(k, 0);
  for (int i = 0; i < k; ++i) {
    MorphId f = into[i];
    for (MorphId g : cat.morphisms_into(cat.morphism(f).dom)) {
      closure_mask[i] |= 1ull << pos[cat.compose(g, f)];
    }
  }

  std::vector<Sieve> result;
  for (unsigned long long mask = 0; mask < (1ull << k); ++mask) {
    bool closed = true;
    for (int i = 0; i < k && closed; ++i) {
      if ((mask >> i) & 1ull) closed = (closure_mask[i] & ~mask) == 0;
    }
    if (!closed) continue;
    Sieve s{a, {}};
    for (int i = 0; i < k; ++i) {
      if ((mask >> i) & 1ull) s.members.insert(into[i]);
    }
    result.push_back(std::move(s));
  }

  std::sort(result.begin(), result.end(),
            [&](const Sieve& x, const Sieve& y) {
              if (x.members.size() != y.members.size())
                return x.members.size() < y.members.size();
              return sieve_labels(cat, x) < sieve_labels(cat, y);
            });
  return result;
}

} // namespace

Omega::Omega(std::shared_ptr<const FiniteCategory> cat) : cat_(std::move(cat)) {
  const int n = cat_->object_count();
  sieves_.resize(n);
  principal_.resize(n);
  for (ObjId a = 0; a < n; ++a) {
    sieves_[a] = enumerate_sieves(*cat_, a);
    const Sieve top = principal_sieve(*cat_, a);
    principal_[a] = -1;
    for (int i = 0; i < static_cast<int>(sieves_[a].size()); ++i) {
      if (sieves_[a][i] == top) principal_[a] = i;
    }
  }

  PresheafBuilder builder(cat_);
  for (ObjId a = 0; a < n; ++a) {
    std::vector<std::string> labels;
    labels.reserve(sieves_[a].size());
    for (const auto& s : sieves_[a]) labels.push_back(sieve_to_string(*cat_, s));
    builder.set_elements(a, std::move(labels));
  }
  for (MorphId f = 0; f < cat_->morphism_count(); ++f) {
    if (cat_->is_identity(f)) continue;
    ObjId a = cat_->morphism(f).cod;
    std::vector<int> table(sieves_[a].size());
    for (int i = 0; i < static_cast<int>(sieves_[a].size()); ++i) {
      table[i] = index_of(cat_->morphism(f).dom,
                          pullback_sieve(*cat_, sieves_[a][i], f));
    }
    builder.set_transition(f, std::move(table));
  }
  presheaf_ = builder.build();
}

int Omega::index_of(ObjId a, const Sieve& s) const {
  const auto& list = sieves_[a];
  for (int i = 0; i < static_cast<int>(list.size()); ++i) {
    if (list[i].members == s.members) return i;
  }
  throw_not_found("set " + sieve_to_string(*cat_, s) + " is not a sieve at '" +
                  cat_->object_label(a) + "'");
}

namespace {

void require_same_object(const Sieve& s1, const Sieve& s2) {
  if (s1.at != s2.at)
    throw_malformed("sieves live at different objects (" +
                    std::to_string(s1.at) + " vs " + std::to_string(s2.at) +
                    ")");
}

} // namespace

Sieve heyting_meet(const FiniteCategory&, const Sieve& s1, const Sieve& s2) {
  require_same_object(s1, s2);
  Sieve out{s1.at, {}};
  std::set_intersection(s1.members.begin(), s1.members.end(),
                        s2.members.begin(), s2.members.end(),
                        std::inserter(out.members, out.members.begin()));
  return out;
}

Sieve heyting_join(const FiniteCategory&, const Sieve& s1, const Sieve& s2) {
  require_same_object(s1, s2);
  Sieve out{s1.at, s1.members};
  out.members.insert(s2.members.begin(), s2.members.end());
  return out;
}

Sieve heyting_implies(const FiniteCategory& cat, const Sieve& s1,
                      const Sieve& s2) {
  require_same_object(s1, s2);
  Sieve out{s1.at, {}};
  for (MorphId f : cat.morphisms_into(s1.at)) {
    bool ok = true;
    for (MorphId g : cat.morphisms_into(cat.morphism(f).dom)) {
      MorphId fg = cat.compose(g, f);
      if (s1.contains(fg) && !s2.contains(fg)) {
        ok = false;
        break;
      }
    }
    if (ok) out.members.insert(f);
  }
  return out;
}

Sieve heyting_neg(const FiniteCategory& cat, const Sieve& s) {
  return heyting_implies(cat, s, empty_sieve(s.at));
}

bool sieve_subset(const Sieve& s1, const Sieve& s2) {
  return std::includes(s2.members.begin(), s2.members.end(),
                       s1.members.begin(), s1.members.end());
}

} // namespace toposval
