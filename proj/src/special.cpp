#include "isostokes/special.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>
#include <cmath>

#include "isostokes/errors.hpp"

namespace iso {

namespace {

using mp_real = boost::multiprecision::cpp_bin_float_50;
using mp_cplx = boost::multiprecision::cpp_complex_50;

mp_cplx to_mp(cd z) { return mp_cplx(mp_real(z.real()), mp_real(z.imag())); }
cd from_mp(const mp_cplx& z) { return {static_cast<double>(z.real()), static_cast<double>(z.imag())}; }

// E1 by its power series, in 50-digit arithmetic.
cd e1_series(cd z) {
  mp_cplx x = to_mp(z), term = mp_cplx(1), sum = mp_cplx(0);
  const mp_real eps = mp_real(1e-40);
  for (int k = 1; k < 2000; ++k) {
    term *= -x / mp_real(k);
    mp_cplx add = term / mp_real(k);
    sum += add;
    if (abs(add) < eps * (abs(sum) + mp_real(1e-300)) && k > 5) break;
  }
  const mp_real g("0.57721566490153286060651209008240243104215933593992");
  return from_mp(-g - log(x) - sum);
}

// Continued fraction (modified Lentz), valid off the negative real axis.
cd e1_cf(cd z) {
  const double tiny = 1e-300;
  cd b = z + 1.0, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i < 200000; ++i) {
    double an = -double(i) * double(i);
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    cd del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-z);
}

}  // namespace

cd expint_e1(cd z) {
  if (z == cd(0)) throw input_error("Singular", "E1 has a logarithmic singularity at 0");
  if (std::abs(z) <= 30) return e1_series(z);
  return e1_cf(z);
}

cd expint_e1_checked(cd z) {
  if (z.imag() == 0 && z.real() < 0)
    throw input_error("BranchUnspecified", "E1 on the cut needs a winding; use expint_e1_cover");
  return expint_e1(z);
}

cd expint_ei(cd z) {
  if (z == cd(0)) throw input_error("Singular", "Ei has a logarithmic singularity at 0");
  if (std::abs(z) <= 30) {
    // gamma + log z + sum z^k / (k k!), principal log
    mp_cplx x = to_mp(z), term = mp_cplx(1), sum = mp_cplx(0);
    const mp_real eps = mp_real(1e-40);
    for (int k = 1; k < 2000; ++k) {
      term *= x / mp_real(k);
      mp_cplx add = term / mp_real(k);
      sum += add;
      if (abs(add) < eps * (abs(sum) + mp_real(1e-300)) && k > 5) break;
    }
    const mp_real g("0.57721566490153286060651209008240243104215933593992");
    return from_mp(g + log(x) + sum);
  }
  if (z.imag() == 0 && z.real() > 0) {
    // large positive argument: asymptotic series, optimally truncated
    double x = z.real(), term = 1, sum = 1;
    for (int k = 1; k < 200; ++k) {
      double nt = term * k / x;
      if (nt >= term) break;
      term = nt;
      sum += term;
    }
    return std::exp(x) / x * sum;
  }
  double s = z.imag() > 0 ? 1.0 : -1.0;
  if (z.imag() == 0) s = 1.0;  // negative real axis: principal log gives +i pi
  return -expint_e1(-z) + cd(0, s * kPi);
}

cd expint_e1_cover(double r, double theta) {
  double k = std::round(theta / (2 * kPi));
  double tp = theta - 2 * kPi * k;
  if (tp <= -kPi) {
    tp += 2 * kPi;
    k -= 1;
  }
  cd base;
  if (tp == kPi || std::abs(tp - kPi) < 1e-15) {
    // upper side of the cut
    base = -expint_ei(cd(r, 0)) - cd(0, kPi);
  } else {
    base = expint_e1(std::polar(r, tp));
  }
  return base - cd(0, 2 * kPi * k);
}

cd expint_ei_cover(double r, double theta) {
  double k = std::round(theta / (2 * kPi));
  double tp = theta - 2 * kPi * k;
  if (tp <= -kPi) {
    tp += 2 * kPi;
    k -= 1;
  }
  cd base = std::abs(tp - kPi) < 1e-15 ? expint_ei(cd(-r, 0)) : expint_ei(std::polar(r, tp));
  return base + cd(0, 2 * kPi * k);
}

namespace {

// J_{sign*nu}(x) with x^{sign*nu} taken on the cover.
mp_cplx bessel_j_series(double nu_signed, double r, double theta) {
  const mp_real rr(r), th(theta), nu(nu_signed);
  // (x/2)^nu = exp(nu (log(r/2) + i theta))
  mp_cplx lhalf(log(rr / 2), th);
  mp_cplx pref = exp(mp_cplx(nu) * lhalf);
  mp_cplx x2 = exp(mp_cplx(2) * lhalf);  // (x/2)^2
  mp_real g = boost::math::tgamma(nu + 1);
  mp_cplx term = mp_cplx(1) / g, sum = term;
  const mp_real eps("1e-45");
  for (int k = 1; k < 5000; ++k) {
    term *= -x2 / (mp_real(k) * (nu + mp_real(k)));
    sum += term;
    if (abs(term) < eps * abs(sum) && k > 5) break;
  }
  return pref * sum;
}

}  // namespace

cd hankel_series(int kind, double nu, double r, double theta) {
  if (kind != 1 && kind != 2) throw input_error("ConfigInvalid", "Hankel kind must be 1 or 2");
  mp_cplx Jp = bessel_j_series(nu, r, theta), Jm = bessel_j_series(-nu, r, theta);
  const mp_real pi = boost::math::constants::pi<mp_real>();
  mp_real s = sin(mp_real(nu) * pi);
  mp_cplx e = exp(mp_cplx(mp_real(0), (kind == 1 ? -1 : 1) * mp_real(nu) * pi));
  mp_cplx num = Jm - e * Jp;
  mp_cplx den = mp_cplx(mp_real(0), (kind == 1 ? 1 : -1) * s);
  return from_mp(num / den);
}

namespace {

// Principal-sheet evaluation for theta in (-pi/2, pi/2].
cd hankel_integral_principal(int kind, double nu, double r, double theta) {
  const double sgn = kind == 1 ? 1.0 : -1.0;
  // singular point of (1 + sgn i u / (2x))^{nu - 1/2} at u = -sgn*2 i x... angle:
  double sing = kind == 1 ? theta + kPi / 2 : theta - kPi / 2;
  double lo = std::max(kind == 1 ? sing - kPi : sing, -kPi / 2);
  double hi = std::min(kind == 1 ? sing : sing + kPi, kPi / 2);
  double alpha = 0.5 * (lo + hi);
  cd x = std::polar(r, theta);
  cd ea = std::polar(1.0, alpha);
  const double p = nu - 0.5;
  auto integrand = [&](double rho) -> cd {
    if (rho == 0) return 0.0;
    cd u = rho * ea;
    cd w = 1.0 + sgn * cd(0, 1) * u / (2.0 * x);
    return std::exp(-u) * std::exp(p * (std::log(rho) + cd(0, alpha))) * std::pow(w, p) * ea;
  };
  boost::math::quadrature::exp_sinh<double> q;
  double re = q.integrate([&](double s) { return integrand(s).real(); }, 1e-15);
  double im = q.integrate([&](double s) { return integrand(s).imag(); }, 1e-15);
  cd I(re, im);
  // (2/(pi x))^{1/2} on the cover
  cd pre = std::sqrt(2.0 / (kPi * r)) * std::polar(1.0, -theta / 2);
  cd phase = std::exp(sgn * cd(0, 1) * (x - nu * kPi / 2 - kPi / 4));
  return pre * phase * I / std::tgamma(nu + 0.5);
}

// Reduce theta = theta0 + m pi with theta0 in (-pi/2, pi/2].
void reduce(double theta, double& t0, int& m) {
  m = static_cast<int>(std::ceil((theta - kPi / 2) / kPi));
  t0 = theta - m * kPi;
  if (t0 <= -kPi / 2) {
    t0 += kPi;
    m -= 1;
  }
}

template <class F>
cd continue_sheets(int kind, double nu, double theta, F principal) {
  double t0;
  int m;
  reduce(theta, t0, m);
  if (m == 0) return principal(kind, t0);
  cd h1 = principal(1, t0), h2 = principal(2, t0);
  const double s = std::sin(nu * kPi);
  const cd e = std::polar(1.0, nu * kPi);
  if (kind == 1) return (-std::sin((m - 1) * nu * kPi) * h1 - std::conj(e) * std::sin(m * nu * kPi) * h2) / s;
  return (e * std::sin(m * nu * kPi) * h1 + std::sin((m + 1) * nu * kPi) * h2) / s;
}

}  // namespace

cd hankel_integral(int kind, double nu, double r, double theta) {
  if (kind != 1 && kind != 2) throw input_error("ConfigInvalid", "Hankel kind must be 1 or 2");
  return continue_sheets(kind, nu, theta,
                         [&](int k, double t0) { return hankel_integral_principal(k, nu, r, t0); });
}

cd hankel_asymptotic(int kind, double nu, double r, double theta, int max_terms) {
  if (kind != 1 && kind != 2) throw input_error("ConfigInvalid", "Hankel kind must be 1 or 2");
  const double sgn = kind == 1 ? 1.0 : -1.0;
  cd x = std::polar(r, theta);
  const double m4 = 4 * nu * nu;
  cd sum = 1.0, term = 1.0;
  double prev = 1.0;
  for (int k = 1; k <= max_terms; ++k) {
    double f = (m4 - (2.0 * k - 1) * (2.0 * k - 1)) / (8.0 * k);
    cd nt = term * f * sgn * cd(0, 1) / x;
    if (std::abs(nt) >= prev) break;
    term = nt;
    prev = std::abs(nt);
    sum += term;
  }
  cd pre = std::sqrt(2.0 / (kPi * r)) * std::polar(1.0, -theta / 2);
  return pre * std::exp(sgn * cd(0, 1) * (x - nu * kPi / 2 - kPi / 4)) * sum;
}

cd hankel(int kind, double nu, double r, double theta) {
  if (r < 10) return hankel_series(kind, nu, r, theta);
  return hankel_integral(kind, nu, r, theta);
}

}  // namespace iso
