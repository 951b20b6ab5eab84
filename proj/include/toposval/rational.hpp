#ifndef TOPOSVAL_RATIONAL_HPP
#define TOPOSVAL_RATIONAL_HPP

#include <boost/rational.hpp>
#include <string>

#include "toposval/error.hpp"

namespace toposval {

/// Exact scalar used throughout the exact arithmetic mode. Desk-scale
/// inputs keep numerators/denominators far below the 64-bit range.
using Rat = boost::rational<long long>;

Rat rat_from_string(const std::string& text);
std::string rat_to_string(const Rat& r);
double rat_to_double(const Rat& r);

/// Gaussian rational: the complex scalar of exact mode.
struct GRat {
  Rat re{0};
  Rat im{0};

  GRat() = default;
  GRat(Rat r) : re(std::move(r)) {}
  GRat(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}

  friend GRat operator+(const GRat& a, const GRat& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend GRat operator-(const GRat& a, const GRat& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend GRat operator-(const GRat& a) { return {-a.re, -a.im}; }
  friend GRat operator*(const GRat& a, const GRat& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend bool operator==(const GRat& a, const GRat& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const GRat& a, const GRat& b) { return !(a == b); }
};

inline GRat conj(const GRat& z) { return {z.re, -z.im}; }

std::string grat_to_string(const GRat& z);

} // namespace toposval

#endif
