// numeric.hpp — Finite differences and small helpers shared across modules

#pragma once

#include <vector>

#include "xymark/types.hpp"

namespace xymark {

// Central differences inside, second-order one-sided stencils at the ends.
std::vector<double> derivative(const std::vector<double>& x, double dt);

// Continuous phase of a complex series, starting from the principal value.
std::vector<double> unwrapped_phase(const std::vector<cplx>& z);

}  // namespace xymark
