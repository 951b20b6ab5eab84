#ifndef TOPOSVAL_GENVAL_HPP
#define TOPOSVAL_GENVAL_HPP

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "toposval/fincat.hpp"
#include "toposval/omega.hpp"
#include "toposval/presheaf.hpp"
#include "toposval/report.hpp"

namespace toposval {

/// A presheaf of propositions: each G(A) carries an explicit partial
/// order with a least element 0 and greatest element 1.
struct PropositionPresheaf {
  std::shared_ptr<const Presheaf> underlying;
  /// Per object: leq[a][d][e] holds iff d <= e in G(A).
  std::vector<std::vector<std::vector<char>>> leq;
  std::vector<int> bottom;
  std::vector<int> top;

  const FiniteCategory& base() const { return underlying->base(); }
  int size_at(ObjId a) const { return underlying->size_at(a); }
  bool le(ObjId a, int d, int e) const { return leq[a][d][e] != 0; }
};

/// Order axioms, verified bottom/top, and the underlying presheaf laws.
ValidationReport validate_proposition_presheaf(const PropositionPresheaf& g);

/// Greatest lower bound of d and e in G(A) where one exists.
std::optional<int> order_meet(const PropositionPresheaf& g, ObjId a, int d,
                              int e);

/// Covariant companion to a proposition presheaf: for f: B -> A a map
/// C(f): G(B) -> G(A) pushing propositions forward for strength
/// comparison. map[f] indexes G(dom f) -> G(cod f).
struct ComparisonFunctor {
  std::shared_ptr<const FiniteCategory> base;
  std::vector<std::vector<int>> map;
};

/// Covariant functoriality: C(id) = id and C(f∘g) = C(f)∘C(g).
ValidationReport validate_comparison_functor(const PropositionPresheaf& g,
                                             const ComparisonFunctor& c);

/// Verdicts of the coarse-graining conditions. `required` collects the
/// coarse-graining inequality d <= C(f)[G(f)(d)] and monotonicity of each
/// G(f); generalized retraction G(f)[C(f)(d)] = d is optional and kept
/// separate, together with per-morphism injectivity of C(f).
struct CoarseGrainingReport {
  ValidationReport required;
  ValidationReport retraction;
  struct MorphismFacts {
    std::string morphism;
    bool retraction_holds = false;
    bool comparison_injective = false;
  };
  std::vector<MorphismFacts> facts; // non-identity morphisms, table order

  bool required_ok() const { return required.ok(); }
};

CoarseGrainingReport check_coarse_graining(const PropositionPresheaf& g,
                                           const ComparisonFunctor& c);

/// Local valuation conditions at one stage: null proposition, monotonicity
/// and exclusivity of a map phi: G(A) -> Omega(A) (given as one sieve per
/// element of G(A)). Pairs without an order-theoretic meet are skipped and
/// counted in the report notes.
ValidationReport check_local_valuation(const PropositionPresheaf& g, ObjId a,
                                       const std::vector<Sieve>& phi);

/// A sieve-valued valuation: one sieve at A per proposition d in G(A).
struct GeneralisedValuation {
  std::shared_ptr<const PropositionPresheaf> over;
  std::vector<std::vector<Sieve>> assign;

  const Sieve& at(ObjId a, int d) const { return assign[a][d]; }
  bool operator==(const GeneralisedValuation& other) const {
    return assign == other.assign;
  }
};

/// Every assigned value must actually be a sieve.
ValidationReport check_sieve_valued(const GeneralisedValuation& nu);

/// Generalized functional composition: nu(B, G(f)(d)) = f*(nu(A, d)) for
/// every f: B -> A and d in G(A).
ValidationReport check_func(const GeneralisedValuation& nu);

struct NatTransFailure {
  std::string morphism;
  std::string element;
  std::string expected;
  std::string actual;
};

struct NatTransResult {
  std::optional<NaturalTransformation> transformation;
  std::optional<NatTransFailure> witness;

  bool natural() const { return transformation.has_value(); }
};

/// Packages nu's components as a candidate transformation G -> Omega and
/// checks naturality through the generic square test; succeeds exactly
/// when check_func finds nothing (the FUNC <=> naturality equivalence).
NatTransResult nat_trans_of_valuation(const GeneralisedValuation& nu,
                                      const Omega& omega);

struct TruthSetValuation {
  GeneralisedValuation valuation;
  /// Non-sieve outputs are flagged here, never silently closed.
  ValidationReport sieve_report;
};

/// nu(A, d) := { f: B -> A | totally_true(B, G(f)(d)) }. Sieve-valued iff
/// the predicate is closed under weakening.
TruthSetValuation valuation_from_truth_set(
    std::shared_ptr<const PropositionPresheaf> g,
    const std::function<bool(ObjId, int)>& totally_true);

/// The partial-truth conditions: (a) total truth propagates to all
/// weakenings, (b) containment of totally-true weakening sets implies
/// sieve inclusion, (c) nu is reconstructed from its own totally-true set.
ValidationReport check_partial_truth_axioms(const GeneralisedValuation& nu);

} // namespace toposval

#endif
