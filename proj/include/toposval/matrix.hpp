#ifndef TOPOSVAL_MATRIX_HPP
#define TOPOSVAL_MATRIX_HPP

#include <complex>
#include <vector>

#include "toposval/error.hpp"
#include "toposval/rational.hpp"

namespace toposval {

/// Dense square matrix over a complex-like scalar (GRat or
/// std::complex<double>). Sized for desk-scale spectral data.
template <class C>
class SqMat {
public:
  SqMat() = default;
  explicit SqMat(int n) : n_(n), a_(static_cast<std::size_t>(n) * n, C{}) {}

  static SqMat identity(int n) {
    SqMat m(n);
    for (int i = 0; i < n; ++i) m.at(i, i) = C{1};
    return m;
  }

  int dim() const { return n_; }
  C& at(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  const C& at(int i, int j) const {
    return a_[static_cast<std::size_t>(i) * n_ + j];
  }

  friend SqMat operator+(const SqMat& x, const SqMat& y) {
    SqMat out(x.n_);
    for (std::size_t i = 0; i < x.a_.size(); ++i) out.a_[i] = x.a_[i] + y.a_[i];
    return out;
  }
  friend SqMat operator-(const SqMat& x, const SqMat& y) {
    SqMat out(x.n_);
    for (std::size_t i = 0; i < x.a_.size(); ++i) out.a_[i] = x.a_[i] - y.a_[i];
    return out;
  }
  friend SqMat operator*(const SqMat& x, const SqMat& y) {
    SqMat out(x.n_);
    for (int i = 0; i < x.n_; ++i) {
      for (int k = 0; k < x.n_; ++k) {
        const C& xik = x.at(i, k);
        if (xik == C{}) continue;
        for (int j = 0; j < x.n_; ++j) out.at(i, j) = out.at(i, j) + xik * y.at(k, j);
      }
    }
    return out;
  }
  friend SqMat operator*(const C& s, const SqMat& y) {
    SqMat out(y.n_);
    for (std::size_t i = 0; i < y.a_.size(); ++i) out.a_[i] = s * y.a_[i];
    return out;
  }

  SqMat adjoint() const {
    using std::conj; // GRat's conj found by ADL
    SqMat out(n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) out.at(i, j) = conj(at(j, i));
    return out;
  }

  C trace() const {
    C t{};
    for (int i = 0; i < n_; ++i) t = t + at(i, i);
    return t;
  }

  bool operator==(const SqMat& other) const {
    return n_ == other.n_ && a_ == other.a_;
  }

  std::vector<C> apply(const std::vector<C>& v) const {
    std::vector<C> out(n_, C{});
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) out[i] = out[i] + at(i, j) * v[j];
    return out;
  }

private:
  int n_ = 0;
  std::vector<C> a_;
};

using GMat = SqMat<GRat>;
using CMat = SqMat<std::complex<double>>;

inline double abs2(const std::complex<double>& z) { return std::norm(z); }

/// Max entrywise modulus distance, the comparison used in numeric mode.
double max_abs_diff(const CMat& x, const CMat& y);

CMat to_numeric(const GMat& m);

} // namespace toposval

#endif
