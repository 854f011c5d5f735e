#include <cctype>
#include "isostokes/scalar.hpp"

#include <cmath>
#include <regex>

#include "isostokes/errors.hpp"

namespace iso {

GaussQ& GaussQ::operator/=(const GaussQ& o) {
  Rational den = o.re * o.re + o.im * o.im;
  if (den == 0) throw numeric_error("DivisionByZero", "exact division by zero");
  Rational r = (re * o.re + im * o.im) / den;
  im = (im * o.re - re * o.im) / den;
  re = std::move(r);
  return *this;
}

bool GaussQ::is_integer() const {
  return im == 0 && denominator(re) == 1;
}

cd GaussQ::to_cd() const {
  return cd(static_cast<double>(re), static_cast<double>(im));
}

namespace {
std::string rat_str(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

Rational parse_rat(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rational(boost::multiprecision::cpp_int(s));
  boost::multiprecision::cpp_int p(s.substr(0, slash)), q(s.substr(slash + 1));
  if (q == 0) throw input_error("ConfigInvalid", "zero denominator in '" + s + "'");
  return Rational(p, q);
}
}  // namespace

std::string to_string(const GaussQ& q) {
  if (q.im == 0) return rat_str(q.re);
  std::string s = q.re == 0 ? std::string() : rat_str(q.re);
  if (q.im > 0 && !s.empty()) s += "+";
  return s + rat_str(q.im) + "*i";
}

GaussQ parse_gauss(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  auto bad = [&] { return input_error("ConfigInvalid", "cannot parse Gaussian rational '" + text + "'"); };
  if (s.empty()) throw bad();
  static const std::regex term(R"(^([+-]?)(\d+(?:/\d+)?)?(\*?i)?)");
  GaussQ out;
  std::size_t pos = 0;
  int terms = 0;
  while (pos < s.size()) {
    std::smatch m;
    std::string rest = s.substr(pos);
    if (!std::regex_search(rest, m, term) || m.length(0) == 0) throw bad();
    bool imag = m[3].matched;
    if (!m[2].matched && !imag) throw bad();
    if (terms > 0 && m[1].length() == 0) throw bad();
    Rational v = m[2].matched ? parse_rat(m[2].str()) : Rational(1);
    if (m[1].str() == "-") v = -v;
    (imag ? out.im : out.re) += v;
    pos += static_cast<std::size_t>(m.length(0));
    if (++terms > 2) throw bad();
  }
  return out;
}

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw input_error("ConfigInvalid", "non-finite number");
  int e = 0;
  double m = std::frexp(x, &e);
  // 53-bit mantissa as an integer
  auto mant = static_cast<long long>(std::ldexp(m, 53));
  e -= 53;
  Rational r(mant);
  boost::multiprecision::cpp_int p = 1;
  if (e > 0) {
    p <<= e;
    r *= p;
  } else if (e < 0) {
    p <<= -e;
    r /= p;
  }
  return r;
}

GaussQ gauss_from_cd(cd z) { return GaussQ(rational_from_double(z.real()), rational_from_double(z.imag())); }

double arg_p(cd z) {
  double a = std::atan2(z.imag(), z.real());
  if (a <= -kPi) a = kPi;
  return a;
}

}  // namespace iso
