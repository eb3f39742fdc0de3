#pragma once

#include "sceig/problem.hpp"

namespace sceig {

/// The two-orbital, one-occupied-orbital demonstration instance
/// (minimal-basis H2 at 4 significant digits).
ProblemData toy_problem_data();
Problem toy_problem();

/// Printed reference values for the toy instance.
namespace toy_golden {
inline constexpr double v_entry = 0.5489;
inline constexpr double lambda1 = -0.5782;
inline constexpr double lambda2 = 0.6703;
inline constexpr double v2_entry = 1.2115;
inline constexpr double f_diag = -0.3655;
inline constexpr double f_offdiag = -0.5939;
}  // namespace toy_golden

}  // namespace sceig
