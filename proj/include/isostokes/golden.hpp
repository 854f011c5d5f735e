#pragma once
// Exactly solvable and reference systems used as oracles.
#include "isostokes/painleve.hpp"
#include "isostokes/system.hpp"

namespace iso {

// u = (0, t), A1 = [[1, 0], [t, 2]]; exact.
SystemCoefficients ei_system();

// u = (0, 0, 1) frozen A3 system with A1 = V(0); the J-variant uses J V(0) J.
SystemCoefficients a3_frozen_system(bool j_variant = false);

// u = (0, t, 1), A1 = V(t) of the holomorphic A3 branch as a Taylor polynomial of the given degree.
SystemCoefficients a3_family_system(int degree = 40, BranchChoice b = {});

// Same family with V(t) evaluated from the algebraic solution (floating only, |t| <= 0.2).
SystemCoefficients a3_family_closed_form(BranchChoice b = {});

// u = (0, t, 1), A1 = 0.
SystemCoefficients example1_system();

// u = (0, t, i t, -t, -i t), A1 = 0.
SystemCoefficients roots_system();

// u = (0, t1, t2), A1 = 0; two deformation parameters.
SystemCoefficients two_parameter_system();

}  // namespace iso
