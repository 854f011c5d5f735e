#pragma once
// Exponential integrals and Hankel functions of fractional order, with
// points of the universal cover given as modulus and unconstrained argument.
#include "isostokes/scalar.hpp"

namespace iso {

// Principal branches, cut along the negative real axis.
cd expint_e1(cd z);
cd expint_ei(cd z);
// On the cover: E1 picks up -2 pi i per counterclockwise turn, Ei +2 pi i.
cd expint_e1_cover(double r, double theta);
cd expint_ei_cover(double r, double theta);

// Throws BranchUnspecified for z on the cut (use the cover variants there).
cd expint_e1_checked(cd z);

// H^{(kind)}_nu at r e^{i theta}, for real nu > -1/2 not an integer.
// Convergent series through J_{+-nu} (50-digit arithmetic).
cd hankel_series(int kind, double nu, double r, double theta);
// Laplace-integral representation; its expansion in 1/x is the standard
// large-argument asymptotics. Accurate for r >~ 1.
cd hankel_integral(int kind, double nu, double r, double theta);
// The large-argument expansion itself, optimally truncated (at most max_terms).
cd hankel_asymptotic(int kind, double nu, double r, double theta, int max_terms = 60);
// Series below |x| = 10, Laplace integral above.
cd hankel(int kind, double nu, double r, double theta);
inline cd hankel34(int kind, double r, double theta) { return hankel(kind, 0.75, r, theta); }

}  // namespace iso
