#include "toposval/rational.hpp"

#include <cstdlib>

namespace toposval {

Rat rat_from_string(const std::string& text) {
  auto parse_int = [&](const std::string& s) -> long long {
    if (s.empty()) throw_parse("empty rational component in '" + text + "'");
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(s, &pos);
    } catch (const std::exception&) {
      throw_parse("cannot parse rational '" + text + "'");
    }
    if (pos != s.size()) throw_parse("cannot parse rational '" + text + "'");
    return v;
  };

  auto slash = text.find('/');
  if (slash == std::string::npos) return Rat(parse_int(text));
  long long num = parse_int(text.substr(0, slash));
  long long den = parse_int(text.substr(slash + 1));
  if (den == 0) throw_parse("zero denominator in '" + text + "'");
  return Rat(num, den);
}

std::string rat_to_string(const Rat& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

double rat_to_double(const Rat& r) {
  return static_cast<double>(r.numerator()) /
         static_cast<double>(r.denominator());
}

std::string grat_to_string(const GRat& z) {
  if (z.im == Rat(0)) return rat_to_string(z.re);
  return rat_to_string(z.re) + (z.im > Rat(0) ? "+" : "") +
         rat_to_string(z.im) + "i";
}

} // namespace toposval
