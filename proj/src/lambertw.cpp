#include "wptmec/lambertw.hpp"

#include <cmath>

#include "wptmec/types.hpp"

namespace wptmec {

namespace {

constexpr double kBranchPoint = -0.36787944117144233;  // -1/e
constexpr std::size_t kMaxIter = 50;

double initial_guess(double x) {
    if (x < -0.32) {
        // Series about the branch point: W0(-1/e + p^2/2) ~ -1 + p - p^2/3.
        const double p = std::sqrt(2.0 * (std::exp(1.0) * x + 1.0));
        return -1.0 + p - p * p / 3.0;
    }
    if (x < 0.5) {
        // W0(x) ~ x (1 - x + 1.5 x^2) near 0; log form takes over later.
        return x * (1.0 - x + 1.5 * x * x);
    }
    if (x < 3.0) {
        return std::log1p(x);  // log log is ill-behaved around x = 1
    }
    // Asymptotic: W0(x) ~ log x - log log x.
    const double l1 = std::log(x);
    const double l2 = std::log(l1);
    return l1 - l2 + l2 / l1;
}

}  // namespace

W0Result lambert_w0(double x) {
    if (std::isnan(x) || x < kBranchPoint - 1e-12) {
        throw DomainError("lambert_w0: argument below -1/e");
    }
    if (x <= kBranchPoint) {
        return {-1.0, 0, 0.0};
    }
    if (x == 0.0) {
        return {0.0, 0, 0.0};
    }

    double w = initial_guess(x);
    if (w < -1.0) w = -1.0 + 1e-14;

    W0Result out;
    for (out.iterations = 0; out.iterations < kMaxIter; ++out.iterations) {
        const double ew = std::exp(w);
        const double f = w * ew - x;
        const double scale = std::fmax(1.0, std::fabs(x));
        out.residual = std::fabs(f) / scale;
        if (out.residual <= 1e-16) break;
        // Halley step.
        const double wp1 = w + 1.0;
        const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        const double dw = f / denom;
        w -= dw;
        if (w < -1.0) w = -1.0;  // stay on the principal branch
        if (std::fabs(dw) <= 1e-16 * std::fmax(1.0, std::fabs(w))) {
            out.residual = std::fabs(w * std::exp(w) - x) / scale;
            break;
        }
    }
    out.value = w;
    out.residual = std::fabs(w * std::exp(w) - x) / std::fmax(1.0, std::fabs(x));
    return out;
}

}  // namespace wptmec
