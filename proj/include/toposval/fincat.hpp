#ifndef TOPOSVAL_FINCAT_HPP
#define TOPOSVAL_FINCAT_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include "toposval/report.hpp"

namespace toposval {

using ObjId = int;
using MorphId = int;

struct Morphism {
  std::string label;
  ObjId dom = -1;
  ObjId cod = -1;
};

/// A finite category presented by objects, morphisms and an explicit
/// total composition table. Immutable after construction; all queries
/// are const and thread-safe.
///
/// Composition convention: for g: C -> B and f: B -> A the table stores
/// the composite f∘g: C -> A under the key (g, f).
class FiniteCategory {
public:
  int object_count() const { return static_cast<int>(objects_.size()); }
  int morphism_count() const { return static_cast<int>(morphisms_.size()); }

  const std::string& object_label(ObjId a) const { return objects_[a]; }
  const Morphism& morphism(MorphId m) const { return morphisms_[m]; }
  const std::string& morphism_label(MorphId m) const {
    return morphisms_[m].label;
  }

  ObjId object_by_label(const std::string& label) const;   // throws NotFound
  MorphId morphism_by_label(const std::string& label) const;

  MorphId identity(ObjId a) const { return identities_[a]; }
  bool is_identity(MorphId m) const;

  const std::vector<MorphId>& morphisms_into(ObjId a) const { return into_[a]; }
  const std::vector<MorphId>& morphisms_from(ObjId a) const { return from_[a]; }

  bool composable(MorphId g, MorphId f) const {
    return morphisms_[g].cod == morphisms_[f].dom;
  }

  /// Composite f∘g for g: C -> B, f: B -> A. Throws CompositionMismatch
  /// when cod(g) != dom(f).
  MorphId compose(MorphId g, MorphId f) const;

  /// Raw table access without the composability check; -1 when undefined.
  MorphId composite_or_invalid(MorphId g, MorphId f) const {
    return table_[static_cast<std::size_t>(g) * morphisms_.size() + f];
  }

  /// Copy with one composition entry replaced. Used to exercise the
  /// validator on deliberately broken tables.
  FiniteCategory with_composite_override(MorphId g, MorphId f,
                                         MorphId replacement) const;

  bool operator==(const FiniteCategory& other) const;

private:
  friend class CategoryBuilder;

  std::vector<std::string> objects_;
  std::vector<Morphism> morphisms_;
  std::vector<MorphId> identities_;
  std::vector<MorphId> table_; // (g, f) -> f∘g, -1 where not composable
  std::vector<std::vector<MorphId>> into_, from_;
  std::map<std::string, ObjId> object_index_;
  std::map<std::string, MorphId> morphism_index_;
};

/// Incremental construction. Identities and all composites involving them
/// are synthesized by build(); only non-identity composable pairs need
/// explicit set_composite calls.
class CategoryBuilder {
public:
  ObjId add_object(const std::string& label);
  MorphId add_morphism(const std::string& label, ObjId dom, ObjId cod);
  void set_composite(MorphId g, MorphId f, MorphId gf);

  /// Marks f∘g as the identity on dom(g), for loop composites whose
  /// identity morphism only exists after build() synthesizes it.
  void set_composite_identity(MorphId g, MorphId f);

  /// Throws MalformedInput on duplicate labels, dangling ids, or a
  /// composable pair without a table entry.
  FiniteCategory build() const;

private:
  std::vector<std::string> objects_;
  std::vector<Morphism> morphisms_;
  std::vector<std::tuple<MorphId, MorphId, MorphId>> composites_;
  std::vector<std::pair<MorphId, MorphId>> identity_composites_;
};

/// A sieve: a set of morphisms sharing the codomain `at`, closed under
/// precomposition with arbitrary morphisms.
struct Sieve {
  ObjId at = -1;
  std::set<MorphId> members;

  bool contains(MorphId m) const { return members.count(m) != 0; }
  bool operator==(const Sieve& other) const {
    return at == other.at && members == other.members;
  }
  bool operator!=(const Sieve& other) const { return !(*this == other); }
};

/// Sorted morphism labels, the canonical serialization of a sieve.
std::vector<std::string> sieve_labels(const FiniteCategory& cat,
                                      const Sieve& s);
std::string sieve_to_string(const FiniteCategory& cat, const Sieve& s);

/// Lists every violated identity law, associativity instance, and
/// composition-closure fault. Empty report <=> the data is a category.
ValidationReport validate_category(const FiniteCategory& cat);

/// True iff `members` (all with codomain `at`) is precomposition-closed.
/// Throws MalformedInput when a member's codomain is not `at`.
bool is_sieve(const FiniteCategory& cat, ObjId at,
              const std::set<MorphId>& members);

/// Smallest sieve at `at` containing `seed`.
Sieve sieve_closure(const FiniteCategory& cat, ObjId at,
                    const std::set<MorphId>& seed);

/// All morphisms with codomain `at` (includes the identity).
Sieve principal_sieve(const FiniteCategory& cat, ObjId at);

Sieve empty_sieve(ObjId at);

/// Pull-back of the sieve s (at A = cod f) along f: B -> A:
/// { h: C -> B | f∘h in s }.
Sieve pullback_sieve(const FiniteCategory& cat, const Sieve& s, MorphId f);

} // namespace toposval

#endif
