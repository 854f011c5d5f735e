#pragma once
#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <string>

namespace iso {

using cd = std::complex<double>;
using Rational = boost::multiprecision::cpp_rational;

// Exact complex number with rational real and imaginary parts.
class GaussQ {
 public:
  Rational re, im;

  GaussQ() = default;
  GaussQ(long long r) : re(r), im(0) {}  // NOLINT: integers promote implicitly
  GaussQ(Rational r, Rational i = 0) : re(std::move(r)), im(std::move(i)) {}

  static GaussQ frac(long long p, long long q) { return GaussQ(Rational(p, q)); }
  static GaussQ i() { return GaussQ(0, 1); }

  GaussQ& operator+=(const GaussQ& o) { re += o.re; im += o.im; return *this; }
  GaussQ& operator-=(const GaussQ& o) { re -= o.re; im -= o.im; return *this; }
  GaussQ& operator*=(const GaussQ& o) {
    Rational r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
  }
  GaussQ& operator/=(const GaussQ& o);

  friend GaussQ operator+(GaussQ a, const GaussQ& b) { return a += b; }
  friend GaussQ operator-(GaussQ a, const GaussQ& b) { return a -= b; }
  friend GaussQ operator*(GaussQ a, const GaussQ& b) { return a *= b; }
  friend GaussQ operator/(GaussQ a, const GaussQ& b) { return a /= b; }
  GaussQ operator-() const { return GaussQ(-re, -im); }
  friend bool operator==(const GaussQ& a, const GaussQ& b) { return a.re == b.re && a.im == b.im; }
  friend bool operator!=(const GaussQ& a, const GaussQ& b) { return !(a == b); }

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_integer() const;
  GaussQ conj() const { return GaussQ(re, -im); }
  cd to_cd() const;
};

// "p/q+r/s*i" with the imaginary part omitted when zero.
std::string to_string(const GaussQ& q);
GaussQ parse_gauss(const std::string& s);

// Exact conversion of a binary double into a rational.
Rational rational_from_double(double x);
GaussQ gauss_from_cd(cd z);

// Uniform access for the generic recursions.
template <class T>
struct FieldTraits;

template <>
struct FieldTraits<cd> {
  static cd zero() { return 0.0; }
  static cd one() { return 1.0; }
  static cd from_int(long long k) { return cd(double(k), 0.0); }
  static bool is_zero(const cd& x) { return x == cd(0.0, 0.0); }
  static double magnitude(const cd& x) { return std::abs(x); }
  static cd to_cd(const cd& x) { return x; }
  static constexpr bool exact = false;
};

template <>
struct FieldTraits<GaussQ> {
  static GaussQ zero() { return GaussQ(0); }
  static GaussQ one() { return GaussQ(1); }
  static GaussQ from_int(long long k) { return GaussQ(k); }
  static bool is_zero(const GaussQ& x) { return x.is_zero(); }
  static double magnitude(const GaussQ& x) { return std::abs(x.to_cd()); }
  static cd to_cd(const GaussQ& x) { return x.to_cd(); }
  static constexpr bool exact = true;
};

// Principal argument in (-pi, pi].
double arg_p(cd z);

constexpr double kPi = 3.141592653589793238462643383279502884;

}  // namespace iso
