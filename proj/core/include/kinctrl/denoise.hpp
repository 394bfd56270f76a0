#pragma once

#include "kinctrl/domain.hpp"

namespace kinctrl {

// Tikhonov smoothing of a deposited field, applied independently to each
// position row along the velocity axis: solve (I - c_s D2) out_i = q_i with
// D2 the second difference over v (spacing dv) closed by mirrored ghost
// cells.  That closure makes each row's sum exactly invariant and bounds the
// result by the row's extrema.  c_s = 0 returns the input unchanged.
GridField denoise_field(const GridField& q, double c_s, double dv,
                        unsigned threads = 1);

}  // namespace kinctrl
