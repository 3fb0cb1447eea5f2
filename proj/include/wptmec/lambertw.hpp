#pragma once

#include <cstddef>

namespace wptmec {

struct W0Result {
    double value = 0.0;
    std::size_t iterations = 0;
    double residual = 0.0;  // |W e^W - x| / max(1, |x|)
};

// Principal branch W0 of the Lambert W function, W0(x) e^{W0(x)} = x,
// for x >= -1/e. Arguments up to 1e-12 below -1/e are clamped to the
// branch point; anything lower throws DomainError.
W0Result lambert_w0(double x);

}  // namespace wptmec
