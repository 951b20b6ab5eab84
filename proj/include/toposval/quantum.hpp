#ifndef TOPOSVAL_QUANTUM_HPP
#define TOPOSVAL_QUANTUM_HPP

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "toposval/genval.hpp"
#include "toposval/matrix.hpp"
#include "toposval/presheaf.hpp"
#include "toposval/rational.hpp"
#include "toposval/valuecat.hpp"

namespace toposval {

/// Exact mode: rational eigenvalues, Gaussian-rational projectors, all
/// comparisons are equalities.
struct ExactScalar {
  using Real = Rat;
  using Cx = GRat;
};

/// Numeric mode: floating data, comparisons within an epsilon.
struct NumericScalar {
  using Real = double;
  using Cx = std::complex<double>;
};

struct Tolerance {
  double eps = 1e-9;
};

/// A physical quantity in spectral form: strictly increasing eigenvalues
/// and one orthogonal projector per eigenvalue, summing to the identity.
template <class S>
struct SpectralOperatorT {
  std::string name;
  int dim = 0;
  std::vector<typename S::Real> eigenvalues;
  std::vector<SqMat<typename S::Cx>> projectors;

  SqMat<typename S::Cx> matrix() const; // sum of eigenvalue * projector

  /// Spectral projector of the proposition "value lies in delta" (delta
  /// as eigenvalue indices).
  SqMat<typename S::Cx> event_projector(const std::vector<int>& delta) const;
};

using SpectralOperator = SpectralOperatorT<ExactScalar>;
using SpectralOperatorN = SpectralOperatorT<NumericScalar>;

/// Projector family laws: idempotent, self-adjoint, mutually orthogonal,
/// complete; eigenvalues strictly increasing, ranks summing to dim.
ValidationReport validate_spectral(const SpectralOperator& op);
ValidationReport validate_spectral(const SpectralOperatorN& op, Tolerance tol);

/// Numeric-mode construction from a raw self-adjoint matrix: eigenvalues
/// are clustered with gaps above tol.eps. Throws MalformedInput for
/// non-self-adjoint input and IllConditioned for sub-tolerance gaps.
SpectralOperatorN spectral_decompose(const CMat& matrix, const std::string& name,
                                     Tolerance tol);

/// Exact mode accepts spectral form only; this validates and returns it.
SpectralOperator spectral_decompose(SpectralOperator op);

/// The unique function f with b = f(a), as a map from a's eigenvalue
/// indices to b's, when it exists: every compression P_i b P_i must be a
/// single eigenvalue of b on P_i's range and the rebuilt sum must equal b.
std::optional<std::vector<int>> detect_morphism(const SpectralOperator& b,
                                                const SpectralOperator& a);
std::optional<std::vector<int>> detect_morphism(const SpectralOperatorN& b,
                                                const SpectralOperatorN& a,
                                                Tolerance tol);

/// Operators as objects, one morphism b -> a per functional dependence
/// b = f(a), composition by composing the carried spectrum functions.
template <class S>
struct OperatorCategoryT {
  std::vector<SpectralOperatorT<S>> operators;
  ValueCategory vc;
};

using OperatorCategory = OperatorCategoryT<ExactScalar>;
using OperatorCategoryN = OperatorCategoryT<NumericScalar>;

OperatorCategory build_operator_category(std::vector<SpectralOperator> ops);
OperatorCategoryN build_operator_category(std::vector<SpectralOperatorN> ops,
                                          Tolerance tol);

/// Drops operators whose spectrum is a single point (multiples of the
/// unit), the trivial coarse-grainings.
template <class S>
std::vector<SpectralOperatorT<S>> strip_unit_multiples(
    std::vector<SpectralOperatorT<S>> ops);

/// The spectral presheaf: spectra as sets, carried functions as
/// transitions.
template <class S>
std::shared_ptr<const Presheaf> spectral_presheaf(
    const OperatorCategoryT<S>& cat) {
  return value_presheaf_of(cat.vc);
}

/// Propositions "A in Δ" with direct-image coarse-graining and preimage
/// comparison maps; passes the coarse-graining conditions including
/// retraction.
template <class S>
CoarseGraining coarse_graining_presheaf(const OperatorCategoryT<S>& cat) {
  return coarse_graining_of(cat.vc);
}

/// nu from a partial valuation (domain closed under coarse-graining,
/// FUNC-obeying): the morphisms whose coarse-grained proposition the
/// partial valuation makes true.
template <class S>
GeneralisedValuation nu_from_partial_valuation(const OperatorCategoryT<S>& cat,
                                               const CoarseGraining& cg,
                                               const PartialValuation& v) {
  return valuation_from_partial(cat.vc, cg, v);
}

/// nu from a vector state: morphisms f: B -> A with the event projector
/// of "B in f(Δ)" fixing psi. Exact mode accepts any nonzero rational
/// vector (the condition is scale-invariant); numeric mode requires unit
/// norm within tolerance.
GeneralisedValuation nu_psi(const OperatorCategory& cat,
                            const CoarseGraining& cg,
                            const std::vector<GRat>& psi);
GeneralisedValuation nu_psi(const OperatorCategoryN& cat,
                            const CoarseGraining& cg,
                            const std::vector<std::complex<double>>& psi,
                            Tolerance tol);

/// nu from a density operator: morphisms with tr(rho E[B in f(Δ)]) = 1.
GeneralisedValuation nu_rho(const OperatorCategory& cat,
                            const CoarseGraining& cg, const GMat& rho);
GeneralisedValuation nu_rho(const OperatorCategoryN& cat,
                            const CoarseGraining& cg, const CMat& rho,
                            Tolerance tol);

struct KsSearchResult {
  std::optional<Section> section;
  struct Certificate {
    int objects = 0;
    long long assignment_bound = 0; // product of spectrum sizes
    int sections_found = 0;
  } certificate;

  bool exhausted() const { return !section.has_value(); }
};

/// Global-section search over the spectral presheaf: one section when a
/// FUNC-obeying total valuation exists, otherwise an exhaustion
/// certificate (the Kochen-Specker outcome).
template <class S>
KsSearchResult ks_section_search(const OperatorCategoryT<S>& cat);

/// Orthogonal rational basis systems (each vector in exactly one or more
/// tetrads) turned into operators: one nondegenerate operator per basis
/// with eigenvalues 1..dim, a rank-one projector operator per distinct
/// ray, and optionally the unit. Orthogonality and completeness of every
/// basis are verified; violations throw MalformedInput.
struct KsSet {
  int dim = 0;
  std::vector<std::vector<std::vector<Rat>>> bases; // basis -> vector -> comps
};

std::vector<SpectralOperator> operators_from_ks_set(const KsSet& ks,
                                                    bool include_unit);

} // namespace toposval

#endif
