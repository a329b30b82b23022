#pragma once

#include <vector>

#include "ctd/grid.hpp"

namespace test {

// Direct 2-D evaluation of one Laplacian pyramid level with an outer-product
// kernel, no separability and no polyphase tricks.
//   blur[i][j]  = sum_ab w[a] w[b] x[ext(i + a - c)][ext(j + b - c)]
//   low[m][n]   = blur[2m][2n]
//   up[o][p]    = sum_ab 4 w[a] w[b] low[ext((o - a + c) / 2)][ext((p - b + c) / 2)]
//                 over the (a, b) with both o - a + c and p - b + c even
//   band        = x - up
struct LpOracle {
    ctd::ImageGrid low;
    ctd::ImageGrid band;
};

inline std::ptrdiff_t ext(std::ptrdiff_t i, std::ptrdiff_t n, bool periodic) {
    if (periodic) {
        return ((i % n) + n) % n;
    }
    while (i < 0 || i >= n) {
        i = i < 0 ? -1 - i : 2 * n - 1 - i;
    }
    return i;
}

inline LpOracle lp_level_oracle(const ctd::ImageGrid& x, const std::vector<double>& w, bool periodic) {
    const auto h = static_cast<std::ptrdiff_t>(x.height());
    const auto wd = static_cast<std::ptrdiff_t>(x.width());
    const auto taps = static_cast<std::ptrdiff_t>(w.size());
    const std::ptrdiff_t c = taps / 2;
    ctd::ImageGrid low(x.width() / 2, x.height() / 2);
    for (std::ptrdiff_t m = 0; m < h / 2; ++m) {
        for (std::ptrdiff_t n = 0; n < wd / 2; ++n) {
            double s = 0.0;
            for (std::ptrdiff_t a = 0; a < taps; ++a) {
                for (std::ptrdiff_t b = 0; b < taps; ++b) {
                    s += w[a] * w[b] *
                         x(ext(2 * m + a - c, h, periodic), ext(2 * n + b - c, wd, periodic));
                }
            }
            low(m, n) = s;
        }
    }
    ctd::ImageGrid band(x.width(), x.height());
    for (std::ptrdiff_t o = 0; o < h; ++o) {
        for (std::ptrdiff_t p = 0; p < wd; ++p) {
            double s = 0.0;
            for (std::ptrdiff_t a = 0; a < taps; ++a) {
                for (std::ptrdiff_t b = 0; b < taps; ++b) {
                    const std::ptrdiff_t i = o - a + c;
                    const std::ptrdiff_t j = p - b + c;
                    if (((i % 2) + 2) % 2 != 0 || ((j % 2) + 2) % 2 != 0) {
                        continue;
                    }
                    s += 4.0 * w[a] * w[b] * low(ext(i / 2, h / 2, periodic), ext(j / 2, wd / 2, periodic));
                }
            }
            band(o, p) = x(o, p) - s;
        }
    }
    return {low, band};
}

}  // namespace test
