#include "toposval/quantum.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <map>
#include <numeric>

#include "toposval/error.hpp"

namespace toposval {

namespace {

std::string real_label(const Rat& r) { return rat_to_string(r); }

std::string real_label(double v) {
  std::string s = std::to_string(v);
  // trim trailing zeros for stable, readable labels
  while (s.find('.') != std::string::npos && (s.back() == '0')) s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

template <class S>
struct Cmp;

template <>
struct Cmp<ExactScalar> {
  bool real_eq(const Rat& a, const Rat& b) const { return a == b; }
  bool mat_eq(const GMat& a, const GMat& b) const { return a == b; }
};

template <>
struct Cmp<NumericScalar> {
  double eps = 1e-9;
  bool real_eq(double a, double b) const { return std::abs(a - b) <= eps; }
  bool mat_eq(const CMat& a, const CMat& b) const {
    return max_abs_diff(a, b) <= eps;
  }
};

} // namespace

double max_abs_diff(const CMat& x, const CMat& y) {
  double worst = 0;
  for (int i = 0; i < x.dim(); ++i)
    for (int j = 0; j < x.dim(); ++j)
      worst = std::max(worst, std::abs(x.at(i, j) - y.at(i, j)));
  return worst;
}

CMat to_numeric(const GMat& m) {
  CMat out(m.dim());
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j)
      out.at(i, j) = {rat_to_double(m.at(i, j).re), rat_to_double(m.at(i, j).im)};
  return out;
}

template <class S>
SqMat<typename S::Cx> SpectralOperatorT<S>::matrix() const {
  SqMat<typename S::Cx> out(dim);
  for (std::size_t i = 0; i < projectors.size(); ++i)
    out = out + typename S::Cx{eigenvalues[i]} * projectors[i];
  return out;
}

template <class S>
SqMat<typename S::Cx> SpectralOperatorT<S>::event_projector(
    const std::vector<int>& delta) const {
  SqMat<typename S::Cx> out(dim);
  for (int i : delta) out = out + projectors[i];
  return out;
}

template struct SpectralOperatorT<ExactScalar>;
template struct SpectralOperatorT<NumericScalar>;

namespace {

template <class S>
ValidationReport validate_spectral_impl(const SpectralOperatorT<S>& op,
                                        const Cmp<S>& cmp) {
  using Mat = SqMat<typename S::Cx>;
  ValidationReport report;
  if (op.dim <= 0 || op.eigenvalues.empty() ||
      op.eigenvalues.size() != op.projectors.size())
    throw_malformed("operator '" + op.name +
                    "': eigenvalue and projector counts disagree");
  for (const auto& p : op.projectors) {
    if (p.dim() != op.dim)
      throw_malformed("operator '" + op.name + "': projector dimension " +
                      std::to_string(p.dim()) + " != " +
                      std::to_string(op.dim));
  }

  for (std::size_t i = 0; i + 1 < op.eigenvalues.size(); ++i) {
    if (!(op.eigenvalues[i] < op.eigenvalues[i + 1]) ||
        cmp.real_eq(op.eigenvalues[i], op.eigenvalues[i + 1]))
      report.add("spectrum-order", op.name + " eigenvalue " + std::to_string(i),
                 "strictly increasing, separated eigenvalues",
                 real_label(op.eigenvalues[i]) + " vs " +
                     real_label(op.eigenvalues[i + 1]));
  }

  const Mat id = Mat::identity(op.dim);
  Mat sum(op.dim);
  for (std::size_t i = 0; i < op.projectors.size(); ++i) {
    const Mat& p = op.projectors[i];
    if (!cmp.mat_eq(p, p.adjoint()))
      report.add("self-adjoint", op.name + " projector " + std::to_string(i),
                 "P = P*", "differs");
    if (!cmp.mat_eq(p * p, p))
      report.add("idempotent", op.name + " projector " + std::to_string(i),
                 "P^2 = P", "differs");
    for (std::size_t j = i + 1; j < op.projectors.size(); ++j) {
      if (!cmp.mat_eq(p * op.projectors[j], Mat(op.dim)))
        report.add("orthogonal",
                   op.name + " projectors " + std::to_string(i) + "," +
                       std::to_string(j),
                   "P_i P_j = 0", "differs");
    }
    sum = sum + p;
  }
  if (!cmp.mat_eq(sum, id))
    report.add("completeness", op.name, "projectors sum to the identity",
               "differs");
  return report;
}

} // namespace

ValidationReport validate_spectral(const SpectralOperator& op) {
  ValidationReport report = validate_spectral_impl(op, Cmp<ExactScalar>{});
  // Exact ranks are traces; they must be positive integers summing to dim.
  Rat total{0};
  for (std::size_t i = 0; i < op.projectors.size(); ++i) {
    GRat tr = op.projectors[i].trace();
    if (tr.im != Rat(0) || tr.re.denominator() != 1 || tr.re < Rat(1))
      report.add("rank", op.name + " projector " + std::to_string(i),
                 "positive integer trace", grat_to_string(tr));
    total += tr.re;
  }
  if (total != Rat(op.dim))
    report.add("rank-sum", op.name, std::to_string(op.dim),
               rat_to_string(total));
  return report;
}

ValidationReport validate_spectral(const SpectralOperatorN& op, Tolerance tol) {
  ValidationReport report = validate_spectral_impl(op, Cmp<NumericScalar>{tol.eps});
  double total = 0;
  for (std::size_t i = 0; i < op.projectors.size(); ++i) {
    std::complex<double> tr = op.projectors[i].trace();
    double nearest = std::round(tr.real());
    if (std::abs(tr.imag()) > tol.eps || std::abs(tr.real() - nearest) > tol.eps ||
        nearest < 1)
      report.add("rank", op.name + " projector " + std::to_string(i),
                 "positive integer trace", std::to_string(tr.real()));
    total += tr.real();
  }
  if (std::abs(total - op.dim) > tol.eps * op.dim)
    report.add("rank-sum", op.name, std::to_string(op.dim),
               std::to_string(total));
  return report;
}

SpectralOperatorN spectral_decompose(const CMat& matrix, const std::string& name,
                                     Tolerance tol) {
  const int n = matrix.dim();
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = matrix.at(i, j);
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol.eps)
    throw_malformed("operator '" + name + "' is not self-adjoint within " +
                    std::to_string(tol.eps));

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorKind::Internal,
                "eigendecomposition failed for '" + name + "'");
  Eigen::VectorXd vals = solver.eigenvalues(); // ascending
  Eigen::MatrixXcd vecs = solver.eigenvectors();

  // Greedy clustering: repeated eigenvalues collapse; a separation that is
  // neither tight nor above eps is ambiguous and refused.
  const double tight = tol.eps / 16.0;
  std::vector<std::pair<int, int>> clusters; // [begin, end)
  int begin = 0;
  for (int i = 1; i <= n; ++i) {
    if (i == n || vals[i] - vals[i - 1] > tight) {
      clusters.emplace_back(begin, i);
      begin = i;
    }
  }
  for (std::size_t c = 0; c + 1 < clusters.size(); ++c) {
    double gap = vals[clusters[c + 1].first] - vals[clusters[c].second - 1];
    if (gap <= tol.eps)
      throw Error(ErrorKind::IllConditioned,
                  "operator '" + name + "': eigenvalue gap " +
                      std::to_string(gap) + " between clusters " +
                      std::to_string(c) + " and " + std::to_string(c + 1) +
                      " is below epsilon");
  }

  SpectralOperatorN op;
  op.name = name;
  op.dim = n;
  for (auto [lo, hi] : clusters) {
    double mean = 0;
    for (int i = lo; i < hi; ++i) mean += vals[i];
    mean /= (hi - lo);
    op.eigenvalues.push_back(mean);
    CMat p(n);
    for (int i = lo; i < hi; ++i) {
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s)
          p.at(r, s) += vecs(r, i) * std::conj(vecs(s, i));
    }
    op.projectors.push_back(std::move(p));
  }

  CMat rebuilt(n);
  for (std::size_t i = 0; i < op.projectors.size(); ++i)
    rebuilt = rebuilt + std::complex<double>{op.eigenvalues[i]} * op.projectors[i];
  if (max_abs_diff(rebuilt, matrix) > tol.eps)
    throw Error(ErrorKind::IllConditioned,
                "operator '" + name +
                    "': spectral reconstruction misses the input beyond epsilon");
  return op;
}

SpectralOperator spectral_decompose(SpectralOperator op) {
  ValidationReport report = validate_spectral(op);
  if (!report.ok())
    throw_malformed("operator '" + op.name + "' is not in spectral form (" +
                    report.violations.front().condition + ")");
  return op;
}

namespace {

template <class S>
std::optional<std::vector<int>> detect_morphism_impl(
    const SpectralOperatorT<S>& b, const SpectralOperatorT<S>& a,
    const Cmp<S>& cmp) {
  using Mat = SqMat<typename S::Cx>;
  if (a.dim != b.dim)
    throw_malformed("operators '" + b.name + "' and '" + a.name +
                    "' act on different dimensions");

  const Mat bm = b.matrix();
  std::vector<int> f(a.eigenvalues.size(), -1);
  for (std::size_t i = 0; i < a.projectors.size(); ++i) {
    const Mat& p = a.projectors[i];
    const Mat compressed = p * bm * p;
    for (std::size_t j = 0; j < b.eigenvalues.size(); ++j) {
      if (cmp.mat_eq(compressed, typename S::Cx{b.eigenvalues[j]} * p)) {
        f[i] = static_cast<int>(j);
        break;
      }
    }
    if (f[i] < 0) return std::nullopt;
  }
  Mat rebuilt(a.dim);
  for (std::size_t i = 0; i < a.projectors.size(); ++i)
    rebuilt = rebuilt + typename S::Cx{b.eigenvalues[f[i]]} * a.projectors[i];
  if (!cmp.mat_eq(rebuilt, bm)) return std::nullopt;
  return f;
}

} // namespace

std::optional<std::vector<int>> detect_morphism(const SpectralOperator& b,
                                                const SpectralOperator& a) {
  return detect_morphism_impl(b, a, Cmp<ExactScalar>{});
}

std::optional<std::vector<int>> detect_morphism(const SpectralOperatorN& b,
                                                const SpectralOperatorN& a,
                                                Tolerance tol) {
  return detect_morphism_impl(b, a, Cmp<NumericScalar>{tol.eps});
}

namespace {

template <class S>
OperatorCategoryT<S> build_operator_category_impl(
    std::vector<SpectralOperatorT<S>> ops, const Cmp<S>& cmp) {
  if (ops.empty()) throw_malformed("operator category needs at least one operator");
  for (std::size_t i = 0; i < ops.size(); ++i) {
    if (ops[i].dim != ops[0].dim)
      throw_malformed("operator '" + ops[i].name +
                      "' has a different dimension");
    for (std::size_t j = i + 1; j < ops.size(); ++j) {
      if (ops[i].name == ops[j].name)
        throw_malformed("duplicate operator name '" + ops[i].name + "'");
    }
  }

  CategoryBuilder builder;
  for (const auto& op : ops) builder.add_object(op.name);

  const int n = static_cast<int>(ops.size());
  std::vector<std::vector<int>> carried; // per added morphism
  std::map<std::pair<ObjId, ObjId>, MorphId> by_pair;
  std::vector<std::pair<ObjId, ObjId>> pairs;
  for (ObjId bi = 0; bi < n; ++bi) {
    for (ObjId ai = 0; ai < n; ++ai) {
      if (bi == ai) continue;
      auto f = detect_morphism_impl(ops[bi], ops[ai], cmp);
      if (!f) continue;
      MorphId m = builder.add_morphism(ops[bi].name + "->" + ops[ai].name, bi, ai);
      carried.push_back(std::move(*f));
      by_pair[{bi, ai}] = m;
      pairs.emplace_back(bi, ai);
    }
  }

  // Thin closure: the composite of carried functions certifies the
  // composite morphism, which pair detection must already have found.
  const int user_morphs = static_cast<int>(pairs.size());
  for (MorphId g = 0; g < user_morphs; ++g) {
    for (MorphId f = 0; f < user_morphs; ++f) {
      if (pairs[g].second != pairs[f].first) continue;
      if (pairs[g].first == pairs[f].second) {
        // Loop composite: thinness forces it onto the identity.
        builder.set_composite_identity(g, f);
        continue;
      }
      auto it = by_pair.find({pairs[g].first, pairs[f].second});
      if (it == by_pair.end())
        throw Error(ErrorKind::Internal,
                    "missing composite between '" +
                        ops[pairs[g].first].name + "' and '" +
                        ops[pairs[f].second].name + "'");
      builder.set_composite(g, f, it->second);
    }
  }

  OperatorCategoryT<S> result;
  result.vc.cat = std::make_shared<FiniteCategory>(builder.build());
  result.vc.values.resize(n);
  for (ObjId a = 0; a < n; ++a) {
    for (const auto& ev : ops[a].eigenvalues)
      result.vc.values[a].push_back(real_label(ev));
  }
  result.vc.fn.resize(result.vc.cat->morphism_count());
  for (MorphId m = 0; m < user_morphs; ++m) {
    result.vc.fn[m].resize(ops[pairs[m].second].eigenvalues.size());
    for (std::size_t v = 0; v < result.vc.fn[m].size(); ++v)
      result.vc.fn[m][v] = carried[m][v];
  }
  for (MorphId m = user_morphs; m < result.vc.cat->morphism_count(); ++m) {
    ObjId a = result.vc.cat->morphism(m).cod;
    result.vc.fn[m].resize(ops[a].eigenvalues.size());
    std::iota(result.vc.fn[m].begin(), result.vc.fn[m].end(), 0);
  }
  result.operators = std::move(ops);
  return result;
}

} // namespace

OperatorCategory build_operator_category(std::vector<SpectralOperator> ops) {
  return build_operator_category_impl(std::move(ops), Cmp<ExactScalar>{});
}

OperatorCategoryN build_operator_category(std::vector<SpectralOperatorN> ops,
                                          Tolerance tol) {
  return build_operator_category_impl(std::move(ops),
                                      Cmp<NumericScalar>{tol.eps});
}

template <class S>
std::vector<SpectralOperatorT<S>> strip_unit_multiples(
    std::vector<SpectralOperatorT<S>> ops) {
  std::vector<SpectralOperatorT<S>> kept;
  for (auto& op : ops) {
    if (op.eigenvalues.size() > 1) kept.push_back(std::move(op));
  }
  return kept;
}

template std::vector<SpectralOperator> strip_unit_multiples(
    std::vector<SpectralOperator>);
template std::vector<SpectralOperatorN> strip_unit_multiples(
    std::vector<SpectralOperatorN>);

namespace {

template <class S, class Holds>
GeneralisedValuation nu_state_impl(const OperatorCategoryT<S>& cat,
                                   const CoarseGraining& cg, Holds&& holds) {
  // Memoized per (operator, event mask): the predicate is consulted once
  // per pair even though many propositions share images.
  const int n = static_cast<int>(cat.operators.size());
  std::vector<std::vector<char>> table(n);
  for (int b = 0; b < n; ++b) {
    const unsigned total = 1u << cat.operators[b].eigenvalues.size();
    table[b].resize(total);
    for (unsigned mask = 0; mask < total; ++mask)
      table[b][mask] = holds(cat.operators[b], mask) ? 1 : 0;
  }
  return valuation_from_mask_predicate(
      cat.vc, cg,
      [&table](ObjId b, unsigned mask) { return table[b][mask] != 0; });
}

template <class S>
SqMat<typename S::Cx> masked_event_projector(const SpectralOperatorT<S>& op,
                                             unsigned mask) {
  std::vector<int> delta;
  for (std::size_t i = 0; i < op.eigenvalues.size(); ++i) {
    if ((mask >> i) & 1u) delta.push_back(static_cast<int>(i));
  }
  return op.event_projector(delta);
}

} // namespace

GeneralisedValuation nu_psi(const OperatorCategory& cat,
                            const CoarseGraining& cg,
                            const std::vector<GRat>& psi) {
  if (static_cast<int>(psi.size()) != cat.operators.front().dim)
    throw_malformed("state vector dimension mismatch");
  bool nonzero = false;
  for (const auto& c : psi) nonzero = nonzero || c != GRat{};
  if (!nonzero) throw_malformed("state vector must be nonzero");

  return nu_state_impl(cat, cg, [&](const SpectralOperator& op, unsigned mask) {
    return masked_event_projector(op, mask).apply(psi) == psi;
  });
}

GeneralisedValuation nu_psi(const OperatorCategoryN& cat,
                            const CoarseGraining& cg,
                            const std::vector<std::complex<double>>& psi,
                            Tolerance tol) {
  if (static_cast<int>(psi.size()) != cat.operators.front().dim)
    throw_malformed("state vector dimension mismatch");
  double norm2 = 0;
  for (const auto& c : psi) norm2 += std::norm(c);
  if (std::abs(norm2 - 1.0) > tol.eps)
    throw_malformed("state vector is not normalized within epsilon");

  return nu_state_impl(cat, cg, [&](const SpectralOperatorN& op, unsigned mask) {
    auto image = masked_event_projector(op, mask).apply(psi);
    double worst = 0;
    for (std::size_t i = 0; i < psi.size(); ++i)
      worst = std::max(worst, std::abs(image[i] - psi[i]));
    return worst <= tol.eps;
  });
}

namespace {

Rat det_exact(GMat m) {
  // Gaussian elimination over the Gaussian rationals; the determinant of a
  // Hermitian matrix is real.
  const int n = m.dim();
  GRat det{Rat(1)};
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r) {
      if (m.at(r, col) != GRat{}) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) return Rat(0);
    if (pivot != col) {
      for (int c = 0; c < n; ++c) std::swap(m.at(pivot, c), m.at(col, c));
      det = GRat{Rat(-1)} * det;
    }
    const GRat p = m.at(col, col);
    det = det * p;
    // normalize row: divide by p
    Rat mod = p.re * p.re + p.im * p.im;
    GRat inv{p.re / mod, -p.im / mod};
    for (int c = col; c < n; ++c) m.at(col, c) = inv * m.at(col, c);
    for (int r = col + 1; r < n; ++r) {
      const GRat factor = m.at(r, col);
      if (factor == GRat{}) continue;
      for (int c = col; c < n; ++c)
        m.at(r, c) = m.at(r, c) - factor * m.at(col, c);
    }
  }
  return det.re;
}

ValidationReport validate_density_exact(const GMat& rho) {
  ValidationReport report;
  if (!(rho == rho.adjoint()))
    report.add("self-adjoint", "density", "rho = rho*", "differs");
  if (rho.trace() != GRat{Rat(1)})
    report.add("trace", "density", "1", grat_to_string(rho.trace()));
  // Positive semidefiniteness: every principal minor is nonnegative.
  const int n = rho.dim();
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> idx;
    for (int i = 0; i < n; ++i)
      if ((mask >> i) & 1u) idx.push_back(i);
    GMat sub(static_cast<int>(idx.size()));
    for (std::size_t r = 0; r < idx.size(); ++r)
      for (std::size_t c = 0; c < idx.size(); ++c)
        sub.at(static_cast<int>(r), static_cast<int>(c)) =
            rho.at(idx[r], idx[c]);
    if (det_exact(sub) < Rat(0)) {
      report.add("positive-semidefinite", "density", "principal minors >= 0",
                 "negative minor");
      break;
    }
  }
  return report;
}

} // namespace

GeneralisedValuation nu_rho(const OperatorCategory& cat,
                            const CoarseGraining& cg, const GMat& rho) {
  if (rho.dim() != cat.operators.front().dim)
    throw_malformed("density dimension mismatch");
  ValidationReport valid = validate_density_exact(rho);
  if (!valid.ok())
    throw_malformed("invalid density operator: " +
                    valid.violations.front().condition);

  return nu_state_impl(cat, cg, [&](const SpectralOperator& op, unsigned mask) {
    return (rho * masked_event_projector(op, mask)).trace() == GRat{Rat(1)};
  });
}

GeneralisedValuation nu_rho(const OperatorCategoryN& cat,
                            const CoarseGraining& cg, const CMat& rho,
                            Tolerance tol) {
  if (rho.dim() != cat.operators.front().dim)
    throw_malformed("density dimension mismatch");
  if (max_abs_diff(rho, rho.adjoint()) > tol.eps)
    throw_malformed("density is not self-adjoint within epsilon");
  if (std::abs(rho.trace() - std::complex<double>{1.0}) > tol.eps)
    throw_malformed("density trace differs from 1 beyond epsilon");
  {
    const int n = rho.dim();
    Eigen::MatrixXcd m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = rho.at(i, j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
    if (solver.eigenvalues().minCoeff() < -tol.eps)
      throw_malformed("density has a negative eigenvalue beyond epsilon");
  }

  return nu_state_impl(cat, cg, [&](const SpectralOperatorN& op, unsigned mask) {
    std::complex<double> tr = (rho * masked_event_projector(op, mask)).trace();
    return std::abs(tr - std::complex<double>{1.0}) <= tol.eps;
  });
}

template <class S>
KsSearchResult ks_section_search(const OperatorCategoryT<S>& cat) {
  auto sections = global_sections(spectral_presheaf(cat));
  KsSearchResult result;
  result.certificate.objects = static_cast<int>(cat.operators.size());
  long long bound = 1;
  for (const auto& op : cat.operators) {
    bound *= static_cast<long long>(op.eigenvalues.size());
    if (bound > (1ll << 62) / 4) break;
  }
  result.certificate.assignment_bound = bound;
  result.certificate.sections_found = static_cast<int>(sections.size());
  if (!sections.empty()) result.section = sections.front();
  return result;
}

template KsSearchResult ks_section_search(const OperatorCategory&);
template KsSearchResult ks_section_search(const OperatorCategoryN&);

namespace {

// Canonical primitive integer direction of a rational vector, for ray
// deduplication.
std::vector<long long> canonical_ray(const std::vector<Rat>& v) {
  long long lcm = 1;
  for (const auto& c : v) lcm = std::lcm(lcm, c.denominator());
  std::vector<long long> ints;
  ints.reserve(v.size());
  long long g = 0;
  for (const auto& c : v) {
    long long x = c.numerator() * (lcm / c.denominator());
    ints.push_back(x);
    g = std::gcd(g, std::llabs(x));
  }
  if (g == 0) throw_malformed("zero vector in a basis");
  long long sign = 0;
  for (auto& x : ints) {
    x /= g;
    if (sign == 0 && x != 0) sign = x > 0 ? 1 : -1;
  }
  if (sign < 0)
    for (auto& x : ints) x = -x;
  return ints;
}

GMat ray_projector(const std::vector<Rat>& v) {
  const int n = static_cast<int>(v.size());
  Rat norm2{0};
  for (const auto& c : v) norm2 += c * c;
  GMat p(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) p.at(i, j) = GRat{v[i] * v[j] / norm2};
  return p;
}

} // namespace

std::vector<SpectralOperator> operators_from_ks_set(const KsSet& ks,
                                                    bool include_unit) {
  if (ks.dim < 2) throw_malformed("basis system needs dimension >= 2");

  std::map<std::vector<long long>, int> ray_index;
  std::vector<GMat> ray_projectors;
  std::vector<SpectralOperator> ops;

  for (std::size_t b = 0; b < ks.bases.size(); ++b) {
    const auto& basis = ks.bases[b];
    if (static_cast<int>(basis.size()) != ks.dim)
      throw_malformed("basis " + std::to_string(b + 1) + " has " +
                      std::to_string(basis.size()) + " vectors, expected " +
                      std::to_string(ks.dim));
    for (const auto& vec : basis) {
      if (static_cast<int>(vec.size()) != ks.dim)
        throw_malformed("vector of wrong dimension in basis " +
                        std::to_string(b + 1));
    }
    for (std::size_t i = 0; i < basis.size(); ++i) {
      for (std::size_t j = i + 1; j < basis.size(); ++j) {
        Rat dot{0};
        for (int c = 0; c < ks.dim; ++c) dot += basis[i][c] * basis[j][c];
        if (dot != Rat(0))
          throw_malformed("vectors " + std::to_string(i + 1) + " and " +
                          std::to_string(j + 1) + " of basis " +
                          std::to_string(b + 1) + " are not orthogonal");
      }
    }

    SpectralOperator op;
    op.name = "B" + std::to_string(b + 1);
    op.dim = ks.dim;
    for (int i = 0; i < ks.dim; ++i) {
      op.eigenvalues.push_back(Rat(i + 1));
      GMat p = ray_projector(basis[i]);
      op.projectors.push_back(p);
      auto key = canonical_ray(basis[i]);
      if (!ray_index.count(key)) {
        ray_index[key] = static_cast<int>(ray_projectors.size());
        ray_projectors.push_back(std::move(p));
      }
    }
    ops.push_back(std::move(op));
  }

  std::vector<SpectralOperator> result;
  const GMat id = GMat::identity(ks.dim);
  // Ray projector operators in first-appearance order.
  std::vector<std::pair<int, const GMat*>> ordered;
  for (const auto& [key, idx] : ray_index)
    ordered.emplace_back(idx, &ray_projectors[idx]);
  std::sort(ordered.begin(), ordered.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  result = std::move(ops);
  for (const auto& [idx, proj] : ordered) {
    SpectralOperator op;
    op.name = "P" + std::to_string(idx + 1);
    op.dim = ks.dim;
    op.eigenvalues = {Rat(0), Rat(1)};
    op.projectors = {id - *proj, *proj};
    result.push_back(std::move(op));
  }
  if (include_unit) {
    SpectralOperator unit;
    unit.name = "unit";
    unit.dim = ks.dim;
    unit.eigenvalues = {Rat(1)};
    unit.projectors = {id};
    result.push_back(std::move(unit));
  }

  for (const auto& op : result) {
    ValidationReport report = validate_spectral(op);
    if (!report.ok())
      throw_malformed("basis system operator '" + op.name +
                      "' fails validation (" +
                      report.violations.front().condition +
                      "); bases must be complete");
  }
  return result;
}

} // namespace toposval
