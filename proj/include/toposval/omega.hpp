#ifndef TOPOSVAL_OMEGA_HPP
#define TOPOSVAL_OMEGA_HPP

#include <memory>
#include <vector>

#include "toposval/fincat.hpp"
#include "toposval/presheaf.hpp"

namespace toposval {

/// The subobject classifier of the presheaf topos over a finite category,
/// materialized: every Omega(A) is the enumerated list of all sieves at A,
/// and the transitions pull sieves back. Enumeration happens once, at
/// construction; the object is immutable afterwards.
class Omega {
public:
  explicit Omega(std::shared_ptr<const FiniteCategory> cat);

  const FiniteCategory& base() const { return *cat_; }

  /// Omega as a presheaf; element labels are serialized sieves. Passes
  /// validate_presheaf by construction (pull-backs compose).
  const std::shared_ptr<const Presheaf>& presheaf() const { return presheaf_; }

  /// All sieves at `a`, canonically ordered (by size, then by label list).
  const std::vector<Sieve>& sieves_at(ObjId a) const { return sieves_[a]; }

  /// Index of a sieve in the enumeration; throws NotFound when the set is
  /// not a sieve at `a`.
  int index_of(ObjId a, const Sieve& s) const;

  int empty_index(ObjId a) const { return 0; }
  int principal_index(ObjId a) const { return principal_[a]; }

private:
  std::shared_ptr<const FiniteCategory> cat_;
  std::vector<std::vector<Sieve>> sieves_;
  std::vector<int> principal_;
  std::shared_ptr<const Presheaf> presheaf_;
};

/// Heyting operations on sieves at a shared object. Meet and join are
/// intersection and union; implication is the relative pseudo-complement
/// { f: B -> A | forall g: C -> B, f∘g in s1 implies f∘g in s2 };
/// negation is implication into the empty sieve.
Sieve heyting_meet(const FiniteCategory& cat, const Sieve& s1, const Sieve& s2);
Sieve heyting_join(const FiniteCategory& cat, const Sieve& s1, const Sieve& s2);
Sieve heyting_implies(const FiniteCategory& cat, const Sieve& s1,
                      const Sieve& s2);
Sieve heyting_neg(const FiniteCategory& cat, const Sieve& s);

bool sieve_subset(const Sieve& s1, const Sieve& s2);

} // namespace toposval

#endif
