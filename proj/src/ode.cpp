#include "isostokes/ode.hpp"

#include <algorithm>
#include <cmath>

#include "isostokes/errors.hpp"

namespace iso {

namespace {

constexpr double c2 = 0.05260015195876773187856, c3 = 0.07890022793815159781784, c4 = 0.11835034190722739672676,
                 c5 = 0.28164965809277260327324, c6 = 0.33333333333333333333333, c7 = 0.25,
                 c8 = 0.30769230769230769230769, c9 = 0.65128205128205128205128, c10 = 0.6,
                 c11 = 0.85714285714285714285714;
constexpr double a21 = 0.05260015195876773187856, a31 = 0.01972505698453789945446, a32 = 0.05917517095361369836338,
                 a41 = 0.02958758547680684918169, a43 = 0.08876275643042054754507, a51 = 0.24136513415926668550237,
                 a53 = -0.88454947932828608534486, a54 = 0.92483400326179200311574,
                 a61 = 0.03703703703703703703704, a64 = 0.17082860872947387127960, a65 = 0.12546768756682242501669,
                 a71 = 0.037109375, a74 = 0.17025221101954403931498, a75 = 0.06021653898045596068502,
                 a76 = -0.017578125, a81 = 0.03709200011850479271088, a84 = 0.17038392571223999381021,
                 a85 = 0.10726203044637328465181, a86 = -0.01531943774862440175279,
                 a87 = 0.00827378916381402288758, a91 = 0.62411095871607571711443,
                 a94 = -3.36089262944694129406857, a95 = -0.86821934684172600681819,
                 a96 = 27.5920996994467083049416, a97 = 20.1540675504778934086187,
                 a98 = -43.4898841810699588477366, a101 = 0.47766253643826436589043,
                 a104 = -2.48811461997166764192642, a105 = -0.59029082683684299637145,
                 a106 = 21.2300514481811942347289, a107 = 15.2792336328824235832597,
                 a108 = -33.2882109689848629194453, a109 = -0.02033120170850862613582,
                 a111 = -0.93714243008598732571704, a114 = 5.18637242884406370830024,
                 a115 = 1.09143734899672957818500, a116 = -8.14978701074692612513997,
                 a117 = -18.5200656599969598641566, a118 = 22.7394870993505042818970,
                 a119 = 2.49360555267965238987089, a1110 = -3.04676447189821950038237,
                 a121 = 2.27331014751653820792360, a124 = -10.5344954667372501984067,
                 a125 = -2.00087205822486249909676, a126 = -17.9589318631187989172766,
                 a127 = 27.9488845294199600508500, a128 = -2.85899827713502369474066,
                 a129 = -8.87285693353062954433549, a1210 = 12.3605671757943030647266,
                 a1211 = 0.64339274601576353035597;
constexpr double b1 = 0.05429373411656876223805, b6 = 4.45031289275240888144114, b7 = 1.89151789931450038304282,
                 b8 = -5.80120396001058478146721, b9 = 0.31116436695781989440892,
                 b10 = -0.15216094966251607855618, b11 = 0.20136540080403034837478,
                 b12 = 0.04471061572777259051769;
constexpr double bhh1 = 0.24409448818897637795276, bhh2 = 0.73384668828161185734136,
                 bhh3 = 0.02205882352941176470588;
constexpr double er1 = 0.01312004499419488073250, er6 = -1.22515644637620444072057,
                 er7 = -0.49575894965725019152141, er8 = 1.66437718245498653696153,
                 er9 = -0.35032884874997368168865, er10 = 0.33417911871301747902973,
                 er11 = 0.08192320648511571246571, er12 = -0.02235530786388629525884;

double max_norm(const std::vector<cd>& v) {
  double m = 0;
  for (const auto& x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

std::vector<cd> dop853(const OdeRhs& f, double s0, double s1, std::vector<cd> y, const OdeOptions& opt,
                       OdeStats* stats) {
  const std::size_t N = y.size();
  if (s0 == s1 || N == 0) return y;
  const double dir = s1 > s0 ? 1.0 : -1.0;
  const double span = std::abs(s1 - s0);
  std::vector<cd> k1(N), k2(N), k3(N), k4(N), k5(N), k6(N), k7(N), k8(N), k9(N), k10(N), k11(N), k12(N), k13(N),
      yt(N), yn(N);
  OdeStats st;
  auto eval = [&](double s, const std::vector<cd>& x, std::vector<cd>& d) {
    f(s, x, d);
    ++st.evaluations;
  };
  double s = s0;
  eval(s, y, k1);
  double h = opt.h_init > 0 ? opt.h_init : std::min(span, 1e-3 * span + 0.01);
  {
    // crude initial guess from the derivative scale
    double yn0 = max_norm(y), dn = max_norm(k1);
    if (opt.h_init <= 0 && dn > 0 && yn0 > 0) h = std::min(span, 0.01 * yn0 / dn);
  }
  const double hmin = opt.h_min * span;
  double preverr = INFINITY;
  while (dir * (s1 - s) > 0) {
    if (st.accepted + st.rejected > opt.max_steps) throw numeric_error("StepFailure", "step budget exhausted");
    if (h > std::abs(s1 - s)) h = std::abs(s1 - s);
    const double dt = dir * h;
    auto stage = [&](std::vector<cd>& out, auto&& comb) {
      for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + dt * comb(i);
      (void)out;
    };
    stage(k2, [&](std::size_t i) { return a21 * k1[i]; });
    eval(s + c2 * dt, yt, k2);
    stage(k3, [&](std::size_t i) { return a31 * k1[i] + a32 * k2[i]; });
    eval(s + c3 * dt, yt, k3);
    stage(k4, [&](std::size_t i) { return a41 * k1[i] + a43 * k3[i]; });
    eval(s + c4 * dt, yt, k4);
    stage(k5, [&](std::size_t i) { return a51 * k1[i] + a53 * k3[i] + a54 * k4[i]; });
    eval(s + c5 * dt, yt, k5);
    stage(k6, [&](std::size_t i) { return a61 * k1[i] + a64 * k4[i] + a65 * k5[i]; });
    eval(s + c6 * dt, yt, k6);
    stage(k7, [&](std::size_t i) { return a71 * k1[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]; });
    eval(s + c7 * dt, yt, k7);
    stage(k8, [&](std::size_t i) { return a81 * k1[i] + a84 * k4[i] + a85 * k5[i] + a86 * k6[i] + a87 * k7[i]; });
    eval(s + c8 * dt, yt, k8);
    stage(k9, [&](std::size_t i) {
      return a91 * k1[i] + a94 * k4[i] + a95 * k5[i] + a96 * k6[i] + a97 * k7[i] + a98 * k8[i];
    });
    eval(s + c9 * dt, yt, k9);
    stage(k10, [&](std::size_t i) {
      return a101 * k1[i] + a104 * k4[i] + a105 * k5[i] + a106 * k6[i] + a107 * k7[i] + a108 * k8[i] + a109 * k9[i];
    });
    eval(s + c10 * dt, yt, k10);
    stage(k11, [&](std::size_t i) {
      return a111 * k1[i] + a114 * k4[i] + a115 * k5[i] + a116 * k6[i] + a117 * k7[i] + a118 * k8[i] +
             a119 * k9[i] + a1110 * k10[i];
    });
    eval(s + c11 * dt, yt, k11);
    stage(k12, [&](std::size_t i) {
      return a121 * k1[i] + a124 * k4[i] + a125 * k5[i] + a126 * k6[i] + a127 * k7[i] + a128 * k8[i] +
             a129 * k9[i] + a1210 * k10[i] + a1211 * k11[i];
    });
    eval(s + dt, yt, k12);
    for (std::size_t i = 0; i < N; ++i) {
      k13[i] = b1 * k1[i] + b6 * k6[i] + b7 * k7[i] + b8 * k8[i] + b9 * k9[i] + b10 * k10[i] + b11 * k11[i] +
               b12 * k12[i];
      yn[i] = y[i] + dt * k13[i];
    }
    const double scale_abs = opt.atol * std::max(max_norm(y), max_norm(yn));
    double err5 = 0, err3 = 0;
    for (std::size_t i = 0; i < N; ++i) {
      double sk = scale_abs + opt.rtol * std::max(std::abs(y[i]), std::abs(yn[i]));
      if (sk == 0) continue;
      err3 += std::norm((k13[i] - bhh1 * k1[i] - bhh2 * k9[i] - bhh3 * k12[i]) / sk);
      err5 += std::norm((er1 * k1[i] + er6 * k6[i] + er7 * k7[i] + er8 * k8[i] + er9 * k9[i] + er10 * k10[i] +
                         er11 * k11[i] + er12 * k12[i]) /
                        sk);
    }
    double den = std::sqrt(double(N) * (err5 + 0.01 * err3));
    double err = den == 0 ? 0 : err5 * h / den;
    if (!std::isfinite(err)) {
      h *= 0.1;
      ++st.rejected;
      if (h < hmin) throw numeric_error("StepFailure", "non-finite state during integration");
      continue;
    }
    double fac = std::pow(std::max(err, 1e-300), 0.125);
    if (err <= 1) {
      s = (std::abs(s1 - (s + dt)) < 1e-15 * span) ? s1 : s + dt;
      y.swap(yn);
      eval(s, y, k1);
      ++st.accepted;
      h = h * std::min(6.0, 0.9 / fac);
      preverr = INFINITY;
    } else {
      ++st.rejected;
      double shrink = std::max(0.333, 0.9 / fac);
      if (err > 0.5 * preverr) shrink = std::min(shrink, 0.5);
      preverr = err;
      h *= shrink;
      if (h < hmin) throw numeric_error("StepFailure", "step size below floor");
    }
  }
  if (stats) *stats = st;
  return y;
}

}  // namespace iso
