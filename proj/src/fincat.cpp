#include "toposval/fincat.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

#include "toposval/error.hpp"

namespace toposval {

ObjId FiniteCategory::object_by_label(const std::string& label) const {
  auto it = object_index_.find(label);
  if (it == object_index_.end()) throw_not_found("unknown object '" + label + "'");
  return it->second;
}

MorphId FiniteCategory::morphism_by_label(const std::string& label) const {
  auto it = morphism_index_.find(label);
  if (it == morphism_index_.end())
    throw_not_found("unknown morphism '" + label + "'");
  return it->second;
}

bool FiniteCategory::is_identity(MorphId m) const {
  const auto& mo = morphisms_[m];
  return mo.dom == mo.cod && identities_[mo.dom] == m;
}

MorphId FiniteCategory::compose(MorphId g, MorphId f) const {
  if (!composable(g, f)) {
    throw Error(ErrorKind::CompositionMismatch,
                "cannot compose '" + morphisms_[f].label + "' after '" +
                    morphisms_[g].label + "': cod(" + morphisms_[g].label +
                    ") = " + objects_[morphisms_[g].cod] + " but dom(" +
                    morphisms_[f].label + ") = " + objects_[morphisms_[f].dom]);
  }
  return composite_or_invalid(g, f);
}

FiniteCategory FiniteCategory::with_composite_override(
    MorphId g, MorphId f, MorphId replacement) const {
  FiniteCategory copy = *this;
  copy.table_[static_cast<std::size_t>(g) * morphisms_.size() + f] = replacement;
  return copy;
}

bool FiniteCategory::operator==(const FiniteCategory& other) const {
  auto sig = [](const FiniteCategory& c) {
    return std::tie(c.objects_, c.identities_, c.table_);
  };
  if (sig(*this) != sig(other)) return false;
  if (morphisms_.size() != other.morphisms_.size()) return false;
  for (std::size_t i = 0; i < morphisms_.size(); ++i) {
    const auto& a = morphisms_[i];
    const auto& b = other.morphisms_[i];
    if (a.label != b.label || a.dom != b.dom || a.cod != b.cod) return false;
  }
  return true;
}

ObjId CategoryBuilder::add_object(const std::string& label) {
  objects_.push_back(label);
  return static_cast<ObjId>(objects_.size()) - 1;
}

MorphId CategoryBuilder::add_morphism(const std::string& label, ObjId dom,
                                      ObjId cod) {
  if (dom < 0 || dom >= static_cast<ObjId>(objects_.size()) || cod < 0 ||
      cod >= static_cast<ObjId>(objects_.size()))
    throw_malformed("morphism '" + label + "' references an unknown object");
  morphisms_.push_back({label, dom, cod});
  return static_cast<MorphId>(morphisms_.size()) - 1;
}

void CategoryBuilder::set_composite(MorphId g, MorphId f, MorphId gf) {
  auto in_range = [&](MorphId m) {
    return m >= 0 && m < static_cast<MorphId>(morphisms_.size());
  };
  if (!in_range(g) || !in_range(f) || !in_range(gf))
    throw_malformed("composition entry references an unknown morphism");
  if (morphisms_[g].cod != morphisms_[f].dom)
    throw_malformed("composition entry (" + morphisms_[g].label + ", " +
                    morphisms_[f].label + ") is not a composable pair");
  composites_.emplace_back(g, f, gf);
}

void CategoryBuilder::set_composite_identity(MorphId g, MorphId f) {
  auto in_range = [&](MorphId m) {
    return m >= 0 && m < static_cast<MorphId>(morphisms_.size());
  };
  if (!in_range(g) || !in_range(f))
    throw_malformed("composition entry references an unknown morphism");
  if (morphisms_[g].cod != morphisms_[f].dom ||
      morphisms_[g].dom != morphisms_[f].cod)
    throw_malformed("identity composite (" + morphisms_[g].label + ", " +
                    morphisms_[f].label + ") is not a loop");
  identity_composites_.emplace_back(g, f);
}

FiniteCategory CategoryBuilder::build() const {
  FiniteCategory cat;
  cat.objects_ = objects_;
  cat.morphisms_ = morphisms_;

  // Synthesize one identity per object, appended after user morphisms.
  cat.identities_.resize(objects_.size());
  for (ObjId a = 0; a < static_cast<ObjId>(objects_.size()); ++a) {
    Morphism id{"id_" + objects_[a], a, a};
    cat.morphisms_.push_back(id);
    cat.identities_[a] = static_cast<MorphId>(cat.morphisms_.size()) - 1;
  }

  for (ObjId a = 0; a < static_cast<ObjId>(objects_.size()); ++a) {
    if (!cat.object_index_.emplace(objects_[a], a).second)
      throw_malformed("duplicate object label '" + objects_[a] + "'");
  }
  for (MorphId m = 0; m < static_cast<MorphId>(cat.morphisms_.size()); ++m) {
    if (!cat.morphism_index_.emplace(cat.morphisms_[m].label, m).second)
      throw_malformed("duplicate morphism label '" + cat.morphisms_[m].label +
                      "'");
  }

  const std::size_t M = cat.morphisms_.size();
  cat.table_.assign(M * M, -1);
  auto entry = [&](MorphId g, MorphId f) -> MorphId& {
    return cat.table_[static_cast<std::size_t>(g) * M + f];
  };

  // Identity composites.
  for (MorphId m = 0; m < static_cast<MorphId>(M); ++m) {
    entry(cat.identities_[cat.morphisms_[m].dom], m) = m; // m ∘ id_dom = m
    entry(m, cat.identities_[cat.morphisms_[m].cod]) = m; // id_cod ∘ m = m
  }

  for (const auto& [g, f, gf] : composites_) {
    entry(g, f) = gf;
  }
  for (const auto& [g, f] : identity_composites_) {
    entry(g, f) = cat.identities_[cat.morphisms_[g].dom];
  }

  // The table must be total on composable pairs.
  for (MorphId g = 0; g < static_cast<MorphId>(M); ++g) {
    for (MorphId f = 0; f < static_cast<MorphId>(M); ++f) {
      if (cat.morphisms_[g].cod != cat.morphisms_[f].dom) continue;
      if (entry(g, f) < 0)
        throw_malformed("missing composite for (" + cat.morphisms_[g].label +
                        ", " + cat.morphisms_[f].label + ")");
    }
  }

  cat.into_.resize(objects_.size());
  cat.from_.resize(objects_.size());
  for (MorphId m = 0; m < static_cast<MorphId>(M); ++m) {
    cat.into_[cat.morphisms_[m].cod].push_back(m);
    cat.from_[cat.morphisms_[m].dom].push_back(m);
  }
  return cat;
}

std::vector<std::string> sieve_labels(const FiniteCategory& cat,
                                      const Sieve& s) {
  std::vector<std::string> labels;
  labels.reserve(s.members.size());
  for (MorphId m : s.members) labels.push_back(cat.morphism_label(m));
  std::sort(labels.begin(), labels.end());
  return labels;
}

std::string sieve_to_string(const FiniteCategory& cat, const Sieve& s) {
  std::ostringstream out;
  out << "{";
  bool first = true;
  for (const auto& l : sieve_labels(cat, s)) {
    if (!first) out << ",";
    out << l;
    first = false;
  }
  out << "}";
  return out.str();
}

ValidationReport validate_category(const FiniteCategory& cat) {
  ValidationReport report;
  const int M = cat.morphism_count();

  // Closure: every entry is a listed morphism of the right type.
  for (MorphId g = 0; g < M; ++g) {
    for (MorphId f = 0; f < M; ++f) {
      if (!cat.composable(g, f)) continue;
      MorphId gf = cat.composite_or_invalid(g, f);
      if (gf < 0 || gf >= M) {
        report.add("closure",
                   "(" + cat.morphism_label(g) + ", " + cat.morphism_label(f) +
                       ")",
                   "a listed morphism", "undefined entry");
        continue;
      }
      const auto& comp = cat.morphism(gf);
      if (comp.dom != cat.morphism(g).dom || comp.cod != cat.morphism(f).cod) {
        report.add("closure",
                   "(" + cat.morphism_label(g) + ", " + cat.morphism_label(f) +
                       ")",
                   cat.object_label(cat.morphism(g).dom) + " -> " +
                       cat.object_label(cat.morphism(f).cod),
                   cat.object_label(comp.dom) + " -> " +
                       cat.object_label(comp.cod) + " (" + comp.label + ")");
      }
    }
  }

  // Identity laws.
  for (MorphId f = 0; f < M; ++f) {
    MorphId id_dom = cat.identity(cat.morphism(f).dom);
    MorphId id_cod = cat.identity(cat.morphism(f).cod);
    MorphId right = cat.composite_or_invalid(id_dom, f); // f ∘ id
    if (right != f)
      report.add("identity", cat.morphism_label(f) + " ∘ id",
                 cat.morphism_label(f),
                 right >= 0 ? cat.morphism_label(right) : "undefined");
    MorphId left = cat.composite_or_invalid(f, id_cod); // id ∘ f
    if (left != f)
      report.add("identity", "id ∘ " + cat.morphism_label(f),
                 cat.morphism_label(f),
                 left >= 0 ? cat.morphism_label(left) : "undefined");
  }

  // Associativity over all composable triples e: D->C, g: C->B, f: B->A.
  for (MorphId e = 0; e < M; ++e) {
    for (MorphId g = 0; g < M; ++g) {
      if (!cat.composable(e, g)) continue;
      MorphId ge = cat.composite_or_invalid(e, g);
      if (ge < 0 || ge >= M) continue; // reported under closure
      for (MorphId f = 0; f < M; ++f) {
        if (!cat.composable(g, f)) continue;
        MorphId fg = cat.composite_or_invalid(g, f);
        if (fg < 0 || fg >= M) continue;
        if (!cat.composable(e, fg) || !cat.composable(ge, f)) continue;
        MorphId lhs = cat.composite_or_invalid(e, fg);  // (f∘g)∘e
        MorphId rhs = cat.composite_or_invalid(ge, f);  // f∘(g∘e)
        if (lhs != rhs) {
          report.add("associativity",
                     "(" + cat.morphism_label(e) + ", " + cat.morphism_label(g) +
                         ", " + cat.morphism_label(f) + ")",
                     rhs >= 0 ? cat.morphism_label(rhs) : "undefined",
                     lhs >= 0 ? cat.morphism_label(lhs) : "undefined");
        }
      }
    }
  }
  return report;
}

namespace {

void require_codomain(const FiniteCategory& cat, ObjId at,
                      const std::set<MorphId>& members) {
  if (at < 0 || at >= cat.object_count())
    throw_not_found("unknown object id " + std::to_string(at));
  for (MorphId m : members) {
    if (m < 0 || m >= cat.morphism_count())
      throw_malformed("sieve member id " + std::to_string(m) +
                      " is not a morphism");
    if (cat.morphism(m).cod != at)
      throw_malformed("sieve member '" + cat.morphism_label(m) +
                      "' has codomain " +
                      cat.object_label(cat.morphism(m).cod) + ", expected " +
                      cat.object_label(at));
  }
}

} // namespace

bool is_sieve(const FiniteCategory& cat, ObjId at,
              const std::set<MorphId>& members) {
  require_codomain(cat, at, members);
  for (MorphId f : members) {
    for (MorphId g : cat.morphisms_into(cat.morphism(f).dom)) {
      if (!members.count(cat.compose(g, f))) return false;
    }
  }
  return true;
}

Sieve sieve_closure(const FiniteCategory& cat, ObjId at,
                    const std::set<MorphId>& seed) {
  require_codomain(cat, at, seed);
  Sieve result{at, seed};
  std::vector<MorphId> frontier(seed.begin(), seed.end());
  while (!frontier.empty()) {
    MorphId f = frontier.back();
    frontier.pop_back();
    for (MorphId g : cat.morphisms_into(cat.morphism(f).dom)) {
      MorphId fg = cat.compose(g, f);
      if (result.members.insert(fg).second) frontier.push_back(fg);
    }
  }
  return result;
}

Sieve principal_sieve(const FiniteCategory& cat, ObjId at) {
  if (at < 0 || at >= cat.object_count())
    throw_not_found("unknown object id " + std::to_string(at));
  const auto& into = cat.morphisms_into(at);
  return Sieve{at, std::set<MorphId>(into.begin(), into.end())};
}

Sieve empty_sieve(ObjId at) { return Sieve{at, {}}; }

Sieve pullback_sieve(const FiniteCategory& cat, const Sieve& s, MorphId f) {
  if (cat.morphism(f).cod != s.at)
    throw_malformed("pull-back along '" + cat.morphism_label(f) +
                    "' requires codomain " + cat.object_label(s.at));
  Sieve result{cat.morphism(f).dom, {}};
  for (MorphId h : cat.morphisms_into(result.at)) {
    if (s.contains(cat.compose(h, f))) result.members.insert(h);
  }
  return result;
}

} // namespace toposval
