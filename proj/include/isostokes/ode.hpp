#pragma once
// Dormand-Prince 8(5,3) with adaptive steps, for complex state vectors
// over a real parameter.
#include <functional>
#include <vector>

#include "isostokes/scalar.hpp"

namespace iso {

using OdeRhs = std::function<void(double s, const std::vector<cd>& y, std::vector<cd>& dy)>;

struct OdeOptions {
  double rtol = 1e-12;
  // absolute part of the error scale, relative to the max norm of the state
  double atol = 1e-13;
  double h_init = 0;       // 0: automatic
  double h_min = 1e-14;    // relative to the interval length
  long max_steps = 2000000;
};

struct OdeStats {
  long accepted = 0;
  long rejected = 0;
  long evaluations = 0;
};

// Integrates from s0 to s1 (either order). Throws StepFailure.
std::vector<cd> dop853(const OdeRhs& f, double s0, double s1, std::vector<cd> y, const OdeOptions& opt = {},
                       OdeStats* stats = nullptr);

}  // namespace iso
