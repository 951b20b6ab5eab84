#ifndef TOPOSVAL_VALUECAT_HPP
#define TOPOSVAL_VALUECAT_HPP

#include <memory>
#include <string>
#include <vector>

#include "toposval/fincat.hpp"
#include "toposval/genval.hpp"
#include "toposval/presheaf.hpp"

namespace toposval {

/// A finite category whose objects carry finite value sets (spectra or
/// classical images) and whose morphisms carry functions between them:
/// for f: B -> A, fn[f] maps value indices of A to value indices of B —
/// the same direction as a presheaf transition. Both physics backends
/// produce this structure; everything downstream of it is combinatorial.
struct ValueCategory {
  std::shared_ptr<const FiniteCategory> cat;
  std::vector<std::vector<std::string>> values; // per object, display labels
  std::vector<std::vector<int>> fn;             // per morphism

  int value_count(ObjId a) const { return static_cast<int>(values[a].size()); }
};

/// Carried functions must be total, respect identities and mesh with the
/// composition table.
ValidationReport validate_value_category(const ValueCategory& vc);

/// The presheaf assigning each object its value set, with the carried
/// functions as transitions (the spectral / value presheaf).
std::shared_ptr<const Presheaf> value_presheaf_of(const ValueCategory& vc);

/// Propositions "value of A lies in Δ" for Δ a subset of the value set,
/// ordered by inclusion, with direct-image transitions, plus the
/// comparison functor mapping a subset to its preimage.
struct CoarseGraining {
  std::shared_ptr<const PropositionPresheaf> propositions;
  ComparisonFunctor comparison;

  /// Subsets are indexed by bitmask over value indices.
  static int subset_index(unsigned mask) { return static_cast<int>(mask); }
};

CoarseGraining coarse_graining_of(const ValueCategory& vc);

/// Element index of the proposition Δ (given as value indices) at `a`.
int proposition_index(const ValueCategory& vc, ObjId a,
                      const std::vector<int>& delta);

/// A FUNC-obeying value assignment on a coarse-graining-closed set of
/// objects; value[a] == -1 marks objects outside the domain.
struct PartialValuation {
  std::vector<int> value;

  bool defined(ObjId a) const { return value[a] >= 0; }
};

/// Domain closure under coarse-graining and the functional-composition
/// rule value(B) = f(value(A)).
ValidationReport validate_partial_valuation(const ValueCategory& vc,
                                            const PartialValuation& v);

/// nu(A in Δ) = { f: B -> A | B in dom V and V(B) in f(Δ) }. Throws
/// MalformedInput citing the violated closure/FUNC instance when v is
/// invalid.
GeneralisedValuation valuation_from_partial(const ValueCategory& vc,
                                            const CoarseGraining& cg,
                                            const PartialValuation& v);

/// Builds a valuation over cg from a per-(object, subset-mask) predicate.
GeneralisedValuation valuation_from_mask_predicate(
    const ValueCategory& vc, const CoarseGraining& cg,
    const std::function<bool(ObjId, unsigned)>& holds);

/// Functional composition, null proposition, monotonicity and exclusivity
/// against the coarse-graining propositions; empty report <=> nu is a
/// generalised valuation.
ValidationReport verify_generalised_valuation(const ValueCategory& vc,
                                              const GeneralisedValuation& nu);

} // namespace toposval

#endif
