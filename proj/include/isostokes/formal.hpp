#pragma once
#include <optional>
#include <string>
#include <vector>

#include "isostokes/recursion.hpp"
#include "isostokes/system.hpp"

namespace iso {

enum class ArithmeticMode { Exact, Floating };

struct FormalSolution {
  std::vector<cd> t;
  int K = 0;
  std::vector<cd> u;       // eigenvalues at t
  std::vector<CMat> F;     // F[0] = I, F[k] = F_k
  CMat B1;
  ArithmeticMode mode = ArithmeticMode::Floating;
  std::optional<std::vector<QMat>> Fq;  // exact coefficients
  std::optional<QMat> B1q;
  bool unique = true;                 // false when resonant entries were fixed to zero
  std::vector<FreeEntry> free_entries;
  std::vector<ResonanceCheck> resonances;
  bool frozen = false;
};

// Off the coalescence locus. Throws AtCoalescence when two u_a(t) agree.
FormalSolution formal_coefficients(const SystemCoefficients& sys, const std::vector<cd>& t, int K,
                                   double tol = 1e-12);
FormalSolution formal_coefficients_exact(const SystemCoefficients& sys, const std::vector<GaussQ>& t, int K);

struct EntryCheck {
  int a = 0, b = 0;
  cd value{0, 0};
  std::string exact_value;
  bool ok = true;
};

struct ObstructionCheck {
  int level = 0;  // l
  int a = 0, b = 0;
  bool resonant = false;  // A1_aa - A1_bb + l - 1 = 0 at t_delta
  int order = 0;          // lowest power of h carrying a nonzero coefficient
  cd residual{0, 0};      // coefficient of h^order when order <= 0, else 0
  std::string exact_residual;
  bool ok = true;
};

struct VanishingReport {
  std::vector<cd> t_delta;
  std::vector<cd> direction;  // approach t = t_delta + h * direction
  int L = 0;
  bool exact = false;
  std::vector<EntryCheck> entries;
  std::vector<ObstructionCheck> obstructions;  // limits of the braced recursion quantity
  std::vector<ResonanceCheck> frozen_resonances;  // conditions at t_delta itself
  bool holomorphic = true;
  std::vector<std::string> failures;
};

// Needs polynomial generators. Exact arithmetic whenever the system and
// t_delta are exact; otherwise floating with tolerance tol.
VanishingReport vanishing_report(const SystemCoefficients& sys, const std::vector<cd>& t_delta, int L,
                                 double tol = 1e-9, std::vector<cd> direction = {});
VanishingReport vanishing_report_exact(const SystemCoefficients& sys, const std::vector<GaussQ>& t_delta, int L,
                                       std::vector<GaussQ> direction = {});

// Formal solution of the system frozen at t_delta.
// Throws VanishingConditionsFail when the conditions at t_delta are violated.
// The limit conditions of the family are the business of vanishing_report.
FormalSolution frozen_formal(const SystemCoefficients& sys, const std::vector<cd>& t_delta, int K,
                             double tol = 1e-9);
FormalSolution frozen_formal_exact(const SystemCoefficients& sys, const std::vector<GaussQ>& t_delta, int K);

// Max residual of the matrix recursion over levels 1..K (a consistency check).
double recursion_residual(const SystemCoefficients& sys, const FormalSolution& fs);
bool recursion_residual_exact_zero(const SystemCoefficients& sys, const std::vector<GaussQ>& t,
                                   const FormalSolution& fs);

}  // namespace iso
