#include "toposval/presheaf.hpp"

#include <algorithm>
#include <functional>

#include "toposval/error.hpp"
#include "toposval/omega.hpp"

namespace toposval {

int Presheaf::element_by_label(ObjId a, const std::string& label) const {
  const auto& labels = elements_[a];
  for (int i = 0; i < static_cast<int>(labels.size()); ++i) {
    if (labels[i] == label) return i;
  }
  throw_not_found("unknown element '" + label + "' at object '" +
                  base_->object_label(a) + "'");
}

PresheafBuilder::PresheafBuilder(std::shared_ptr<const FiniteCategory> base)
    : base_(std::move(base)) {
  elements_.resize(base_->object_count());
  transitions_.resize(base_->morphism_count());
  transition_set_.resize(base_->morphism_count(), false);
}

void PresheafBuilder::set_elements(ObjId a, std::vector<std::string> labels) {
  elements_[a] = std::move(labels);
}

void PresheafBuilder::set_transition(MorphId f, std::vector<int> table) {
  transitions_[f] = std::move(table);
  transition_set_[f] = true;
}

std::shared_ptr<const Presheaf> PresheafBuilder::build() const {
  auto x = std::make_shared<Presheaf>();
  x->base_ = base_;
  x->elements_ = elements_;
  x->transitions_ = transitions_;

  for (MorphId f = 0; f < base_->morphism_count(); ++f) {
    const auto& m = base_->morphism(f);
    if (!transition_set_[f]) {
      if (!base_->is_identity(f))
        throw_malformed("transition table for morphism '" + m.label +
                        "' is missing");
      std::vector<int> id_table(elements_[m.cod].size());
      for (int i = 0; i < static_cast<int>(id_table.size()); ++i)
        id_table[i] = i;
      x->transitions_[f] = std::move(id_table);
      continue;
    }
    if (x->transitions_[f].size() != elements_[m.cod].size())
      throw_malformed("transition table for '" + m.label + "' has " +
                      std::to_string(x->transitions_[f].size()) +
                      " entries, expected " +
                      std::to_string(elements_[m.cod].size()));
    for (int v : x->transitions_[f]) {
      if (v < 0 || v >= static_cast<int>(elements_[m.dom].size()))
        throw_malformed("transition table for '" + m.label +
                        "' maps outside the element set at '" +
                        base_->object_label(m.dom) + "'");
    }
  }
  return x;
}

std::shared_ptr<const Presheaf> terminal_presheaf(
    std::shared_ptr<const FiniteCategory> base) {
  PresheafBuilder builder(base);
  for (ObjId a = 0; a < base->object_count(); ++a)
    builder.set_elements(a, {"*"});
  for (MorphId f = 0; f < base->morphism_count(); ++f) {
    if (!base->is_identity(f)) builder.set_transition(f, {0});
  }
  return builder.build();
}

ValidationReport validate_presheaf(const Presheaf& x) {
  ValidationReport report;
  const FiniteCategory& cat = x.base();

  for (ObjId a = 0; a < cat.object_count(); ++a) {
    MorphId id = cat.identity(a);
    for (int e = 0; e < x.size_at(a); ++e) {
      if (x.apply(id, e) != e)
        report.add("identity",
                   cat.object_label(a) + "." + x.element_label(a, e),
                   x.element_label(a, e), x.element_label(a, x.apply(id, e)));
    }
  }

  // Contravariant functoriality: X(f∘g) = X(g)∘X(f) for g: C->B, f: B->A.
  for (MorphId g = 0; g < cat.morphism_count(); ++g) {
    for (MorphId f = 0; f < cat.morphism_count(); ++f) {
      if (!cat.composable(g, f)) continue;
      MorphId fg = cat.compose(g, f);
      ObjId a = cat.morphism(f).cod;
      for (int e = 0; e < x.size_at(a); ++e) {
        int direct = x.apply(fg, e);
        int stepped = x.apply(g, x.apply(f, e));
        if (direct != stepped)
          report.add("functoriality",
                     "(" + cat.morphism_label(g) + ", " +
                         cat.morphism_label(f) + ") at " +
                         x.element_label(a, e),
                     x.element_label(cat.morphism(g).dom, stepped),
                     x.element_label(cat.morphism(g).dom, direct));
      }
    }
  }
  return report;
}

ValidationReport check_natural(const NaturalTransformation& n) {
  if (!n.source || !n.target) throw_malformed("natural transformation lacks source or target");
  const FiniteCategory& cat = n.source->base();
  if (!(n.source->base_ptr() == n.target->base_ptr() ||
        n.source->base() == n.target->base()))
    throw_malformed("source and target presheaves have different bases");

  if (static_cast<int>(n.components.size()) != cat.object_count())
    throw_malformed("component list does not cover every object");
  for (ObjId a = 0; a < cat.object_count(); ++a) {
    if (static_cast<int>(n.components[a].size()) != n.source->size_at(a))
      throw_malformed("component at '" + cat.object_label(a) +
                      "' is not total");
    for (int v : n.components[a]) {
      if (v < 0 || v >= n.target->size_at(a))
        throw_malformed("component at '" + cat.object_label(a) +
                        "' maps outside the target set");
    }
  }

  ValidationReport report;
  for (MorphId f = 0; f < cat.morphism_count(); ++f) {
    const auto& m = cat.morphism(f);
    for (int e = 0; e < n.source->size_at(m.cod); ++e) {
      int down_then_map = n.components[m.dom][n.source->apply(f, e)];
      int map_then_down = n.target->apply(f, n.components[m.cod][e]);
      if (down_then_map != map_then_down) {
        report.add("naturality",
                   cat.morphism_label(f) + " at " +
                       n.source->element_label(m.cod, e),
                   n.target->element_label(m.dom, down_then_map),
                   n.target->element_label(m.dom, map_then_down));
      }
    }
  }
  return report;
}

Subobject whole_subobject(std::shared_ptr<const Presheaf> x) {
  Subobject k{x, {}};
  k.member.resize(x->base().object_count());
  for (ObjId a = 0; a < x->base().object_count(); ++a)
    k.member[a].assign(x->size_at(a), 1);
  return k;
}

Subobject empty_subobject(std::shared_ptr<const Presheaf> x) {
  Subobject k{x, {}};
  k.member.resize(x->base().object_count());
  for (ObjId a = 0; a < x->base().object_count(); ++a)
    k.member[a].assign(x->size_at(a), 0);
  return k;
}

ValidationReport validate_subobject(const Subobject& k) {
  ValidationReport report;
  const Presheaf& x = *k.of;
  const FiniteCategory& cat = x.base();
  if (static_cast<int>(k.member.size()) != cat.object_count())
    throw_malformed("subobject does not cover every object");
  for (ObjId a = 0; a < cat.object_count(); ++a) {
    if (static_cast<int>(k.member[a].size()) != x.size_at(a))
      throw_malformed("subobject membership at '" + cat.object_label(a) +
                      "' is not total");
  }
  for (MorphId f = 0; f < cat.morphism_count(); ++f) {
    const auto& m = cat.morphism(f);
    for (int e = 0; e < x.size_at(m.cod); ++e) {
      if (k.contains(m.cod, e) && !k.contains(m.dom, x.apply(f, e))) {
        report.add("restriction-closure",
                   cat.morphism_label(f) + " at " +
                       x.element_label(m.cod, e),
                   "image inside K(" + cat.object_label(m.dom) + ")",
                   x.element_label(m.dom, x.apply(f, e)) + " outside");
      }
    }
  }
  return report;
}

NaturalTransformation characteristic_morphism(const Subobject& k,
                                              const Omega& omega) {
  ValidationReport valid = validate_subobject(k);
  if (!valid.ok())
    throw_malformed("characteristic morphism of an invalid subobject (" +
                    valid.violations.front().condition + " at " +
                    valid.violations.front().where + ")");

  const Presheaf& x = *k.of;
  const FiniteCategory& cat = x.base();
  NaturalTransformation chi{k.of, omega.presheaf(), {}};
  chi.components.resize(cat.object_count());
  for (ObjId a = 0; a < cat.object_count(); ++a) {
    chi.components[a].resize(x.size_at(a));
    for (int e = 0; e < x.size_at(a); ++e) {
      Sieve s{a, {}};
      for (MorphId f : cat.morphisms_into(a)) {
        if (k.contains(cat.morphism(f).dom, x.apply(f, e)))
          s.members.insert(f);
      }
      chi.components[a][e] = omega.index_of(a, s);
    }
  }
  return chi;
}

Subobject subobject_from_char(const NaturalTransformation& chi,
                              const Omega& omega) {
  if (chi.target != omega.presheaf())
    throw_malformed("characteristic morphism does not target this Omega");
  ValidationReport natural = check_natural(chi);
  if (!natural.ok())
    throw_malformed("subobject of a non-natural transformation (square at " +
                    natural.violations.front().where + " fails)");

  const Presheaf& x = *chi.source;
  Subobject k{chi.source, {}};
  k.member.resize(x.base().object_count());
  for (ObjId a = 0; a < x.base().object_count(); ++a) {
    k.member[a].assign(x.size_at(a), 0);
    for (int e = 0; e < x.size_at(a); ++e) {
      if (chi.components[a][e] == omega.principal_index(a))
        k.member[a][e] = 1;
    }
  }
  return k;
}

bool Section::global() const {
  return std::all_of(choice.begin(), choice.end(),
                     [](int v) { return v >= 0; });
}

int Section::domain_size() const {
  return static_cast<int>(
      std::count_if(choice.begin(), choice.end(), [](int v) { return v >= 0; }));
}

ValidationReport validate_section(const Section& s) {
  ValidationReport report;
  const Presheaf& x = *s.of;
  const FiniteCategory& cat = x.base();
  if (static_cast<int>(s.choice.size()) != cat.object_count())
    throw_malformed("section choice vector does not cover every object");

  for (MorphId f = 0; f < cat.morphism_count(); ++f) {
    const auto& m = cat.morphism(f);
    if (!s.in_domain(m.cod)) continue;
    if (!s.in_domain(m.dom)) {
      report.add("down-closure", cat.morphism_label(f),
                 cat.object_label(m.dom) + " in domain", "absent");
      continue;
    }
    if (x.apply(f, s.choice[m.cod]) != s.choice[m.dom]) {
      report.add("matching", cat.morphism_label(f),
                 x.element_label(m.dom, x.apply(f, s.choice[m.cod])),
                 x.element_label(m.dom, s.choice[m.dom]));
    }
  }
  return report;
}

namespace {

// Shared propagation: assign `value` at `a`, force values along every
// morphism into an assigned object, record assignments on `trail`.
// Returns false on conflict or when a forced object is barred.
bool propagate_assign(const Presheaf& x, std::vector<int>& choice, ObjId a,
                      int value, std::vector<ObjId>& trail,
                      const std::vector<char>* barred = nullptr) {
  const FiniteCategory& cat = x.base();
  std::vector<std::pair<ObjId, int>> queue{{a, value}};
  while (!queue.empty()) {
    auto [b, v] = queue.back();
    queue.pop_back();
    if (choice[b] >= 0) {
      if (choice[b] != v) return false;
      continue;
    }
    if (barred && (*barred)[b]) return false;
    choice[b] = v;
    trail.push_back(b);
    for (MorphId f : cat.morphisms_into(b)) {
      queue.emplace_back(cat.morphism(f).dom, x.apply(f, v));
    }
  }
  return true;
}

void undo_trail(std::vector<int>& choice, std::vector<ObjId>& trail,
                std::size_t mark) {
  while (trail.size() > mark) {
    choice[trail.back()] = -1;
    trail.pop_back();
  }
}

std::vector<ObjId> branch_order(const FiniteCategory& cat) {
  std::vector<ObjId> order(cat.object_count());
  for (ObjId a = 0; a < cat.object_count(); ++a) order[a] = a;
  // Branch first where a choice propagates along the most arrows: the
  // objects with the most morphisms running down from them.
  std::stable_sort(order.begin(), order.end(), [&](ObjId p, ObjId q) {
    return cat.morphisms_into(p).size() > cat.morphisms_into(q).size();
  });
  return order;
}

void sort_sections(std::vector<Section>& out) {
  std::sort(out.begin(), out.end(), [](const Section& a, const Section& b) {
    return a.choice < b.choice;
  });
}

} // namespace

std::vector<Section> global_sections(std::shared_ptr<const Presheaf> x) {
  const FiniteCategory& cat = x->base();
  const std::vector<ObjId> order = branch_order(cat);
  std::vector<int> choice(cat.object_count(), -1);
  std::vector<ObjId> trail;
  std::vector<Section> out;

  std::function<void(std::size_t)> recurse = [&](std::size_t k) {
    while (k < order.size() && choice[order[k]] >= 0) ++k;
    if (k == order.size()) {
      out.push_back(Section{x, choice});
      return;
    }
    ObjId a = order[k];
    for (int v = 0; v < x->size_at(a); ++v) {
      std::size_t mark = trail.size();
      if (propagate_assign(*x, choice, a, v, trail)) recurse(k + 1);
      undo_trail(choice, trail, mark);
    }
  };
  recurse(0);
  sort_sections(out);
  return out;
}

namespace {

// Strongly connected components of the "requires" graph (B requires A when
// some morphism A -> B exists, i.e. any domain containing B contains A).
// Emitted dependencies-first, deterministically.
struct SccOrder {
  std::vector<std::vector<ObjId>> components;
};

SccOrder scc_dependency_order(const FiniteCategory& cat) {
  const int n = cat.object_count();
  std::vector<std::vector<ObjId>> requires_of(n);
  for (ObjId a = 0; a < n; ++a) {
    std::set<ObjId> deps;
    for (MorphId f : cat.morphisms_into(a)) {
      if (cat.morphism(f).dom != a) deps.insert(cat.morphism(f).dom);
    }
    requires_of[a].assign(deps.begin(), deps.end());
  }

  SccOrder result;
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<ObjId> stack;
  int counter = 0;

  std::function<void(ObjId)> strongconnect = [&](ObjId v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (ObjId w : requires_of[v]) {
      if (index[w] < 0) {
        strongconnect(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<ObjId> component;
      ObjId w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        component.push_back(w);
      } while (w != v);
      std::sort(component.begin(), component.end());
      result.components.push_back(std::move(component));
    }
  };
  for (ObjId v = 0; v < n; ++v) {
    if (index[v] < 0) strongconnect(v);
  }
  return result;
}

// Can `a` be appended to the current domain? All non-self dependencies must
// already carry values and some element must satisfy every incident
// matching constraint. Only already-decided state is consulted, which is
// exact when dependencies are processed first.
bool single_object_addable(const Presheaf& x, const std::vector<int>& choice,
                           ObjId a) {
  const FiniteCategory& cat = x.base();
  for (MorphId f : cat.morphisms_into(a)) {
    ObjId b = cat.morphism(f).dom;
    if (b != a && choice[b] < 0) return false;
  }
  for (int v = 0; v < x.size_at(a); ++v) {
    bool ok = true;
    for (MorphId f : cat.morphisms_into(a)) {
      ObjId b = cat.morphism(f).dom;
      int forced = x.apply(f, v);
      if ((b == a && forced != v) || (b != a && forced != choice[b])) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

} // namespace

std::vector<Section> maximal_partial_elements(
    std::shared_ptr<const Presheaf> x) {
  const FiniteCategory& cat = x->base();
  const SccOrder order = scc_dependency_order(cat);
  std::vector<int> choice(cat.object_count(), -1);
  std::vector<char> excluded(cat.object_count(), 0);
  std::vector<ObjId> trail;
  std::vector<Section> out;

  std::function<void(std::size_t)> recurse = [&](std::size_t k) {
    if (k == order.components.size()) {
      out.push_back(Section{x, choice});
      return;
    }
    const auto& component = order.components[k];
    const ObjId rep = component.front();

    bool any_excluded_dep = false;
    for (ObjId a : component) {
      for (MorphId f : cat.morphisms_into(a)) {
        if (excluded[cat.morphism(f).dom]) any_excluded_dep = true;
      }
    }

    if (choice[rep] >= 0) {
      // Forced into the domain by an earlier component; values of the whole
      // component were already propagated.
      recurse(k + 1);
      return;
    }

    // Include branch: pick a value at the representative and propagate
    // through the component (and consistency-check against dependencies).
    if (!any_excluded_dep) {
      for (int v = 0; v < x->size_at(rep); ++v) {
        std::size_t mark = trail.size();
        if (propagate_assign(*x, choice, rep, v, trail, &excluded))
          recurse(k + 1);
        undo_trail(choice, trail, mark);
      }
    }

    // Exclude branch. Members of a non-trivial component are never
    // single-object addable (their in-component dependencies are excluded
    // too), so only a trivial component needs the addability prune.
    if (component.size() == 1 && single_object_addable(*x, choice, rep)) {
      return;
    }
    for (ObjId a : component) excluded[a] = 1;
    recurse(k + 1);
    for (ObjId a : component) excluded[a] = 0;
  };

  recurse(0);
  sort_sections(out);
  return out;
}

} // namespace toposval
