#pragma once

#include <cmath>

namespace skeletor::detail {

// Thread-safe log-gamma: glibc's lgamma writes the global signgam, which the
// parallel bench harness would race on.
inline double log_gamma(double x) {
#if defined(__GLIBC__)
    int sign = 0;
    return ::lgamma_r(x, &sign);
#else
    return std::lgamma(x);
#endif
}

}  // namespace skeletor::detail
