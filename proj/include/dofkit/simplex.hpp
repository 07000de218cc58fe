#pragma once

#include "dofkit/rational.hpp"

#include <vector>

namespace dofkit {

/// Exact solution of a packing-form LP.
struct LpSolution {
    Rational value;
    std::vector<Rational> primal; ///< one entry per variable
    std::vector<Rational> dual;   ///< one entry per constraint row, non-negative
};

/// Maximizes `objective · x` subject to `rows · x <= rhs`, `x >= 0`.
///
/// Requires `rhs >= 0` so the origin is feasible; dense tableau simplex with
/// Bland's rule, exact over the rationals. Throws InvalidParameter on shape
/// errors or negative rhs, std::runtime_error if the LP is unbounded.
LpSolution maximize_packing_lp(const std::vector<Rational>& objective,
                               const std::vector<std::vector<Rational>>& rows,
                               const std::vector<Rational>& rhs);

} // namespace dofkit
