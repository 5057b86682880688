#pragma once

#include "hclab/types.hpp"

namespace hclab {

/// Matrix exponential by scaling and squaring with diagonal Pade
/// approximants (degrees 3/5/7/9/13 selected from the 1-norm), accurate to
/// ~1e-15 relative in exact-arithmetic backward-error terms and well under
/// the 1e-13 budget the evolution step requires.
Mat matrix_exponential(const Mat& a);

}  // namespace hclab
