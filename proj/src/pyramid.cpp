#include "ctd/pyramid.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ctd {

LpFilter::LpFilter(std::string name, std::vector<double> taps) : name_(std::move(name)), taps_(std::move(taps)) {
    if (taps_.empty() || taps_.size() % 2 == 0) {
        throw std::invalid_argument("LpFilter '" + name_ + "' needs an odd number of taps");
    }
    if (std::abs(dc_gain() - 1.0) > 1e-12) {
        throw std::invalid_argument("LpFilter '" + name_ + "' taps must sum to 1");
    }
}

LpFilter LpFilter::burt_adelson(double a) {
    const double side = 0.25 - a / 2.0;
    return LpFilter("burt" , {side, 0.25, a, 0.25, side});
}

LpFilter LpFilter::cdf97() {
    std::vector<double> taps = {0.026748757410810, -0.016864118442875, -0.078223266528990,
                                0.266864118442875, 0.602949018236360, 0.266864118442875,
                                -0.078223266528990, -0.016864118442875, 0.026748757410810};
    const double sum = std::accumulate(taps.begin(), taps.end(), 0.0);
    for (double& t : taps) {
        t /= sum;
    }
    return LpFilter("9-7", std::move(taps));
}

LpFilter LpFilter::by_name(const std::string& name) {
    if (name == "burt") {
        return burt_adelson();
    }
    if (name == "9-7") {
        return cdf97();
    }
    throw std::invalid_argument("unknown pyramid filter '" + name + "' (expected burt or 9-7)");
}

double LpFilter::dc_gain() const noexcept { return std::accumulate(taps_.begin(), taps_.end(), 0.0); }

namespace {

// Both filtering kernels are evaluated in deviation form,
//   y = x_ref + sum_k w_k (x_k - x_ref),
// which equals sum_k w_k x_k when the weights sum to one and returns a
// constant input bit-exactly.

// Blur-and-decimate along one axis of a strided 1-D line.
void reduce_line(const double* in, std::size_t n, std::size_t in_stride, double* out, std::size_t out_stride,
                 const std::vector<double>& taps, ExtensionMode mode) {
    const auto len = static_cast<std::ptrdiff_t>(n);
    const auto half = static_cast<std::ptrdiff_t>(taps.size() / 2);
    for (std::ptrdiff_t m = 0; m < len / 2; ++m) {
        const std::ptrdiff_t centre = 2 * m;
        const double ref = in[centre * static_cast<std::ptrdiff_t>(in_stride)];
        double acc = 0.0;
        for (std::ptrdiff_t t = -half; t <= half; ++t) {
            if (t == 0) {
                continue;
            }
            const auto idx = extend_index(centre + t, len, mode);
            acc += taps[static_cast<std::size_t>(t + half)] * (in[idx * static_cast<std::ptrdiff_t>(in_stride)] - ref);
        }
        out[m * static_cast<std::ptrdiff_t>(out_stride)] = ref + acc;
    }
}

// Zero-insert upsample by two and interpolate with 2 * taps. Output sample n
// draws on input samples j with n - 2j inside the filter support; each
// output phase has weights summing to one.
void expand_line(const double* in, std::size_t n, std::size_t in_stride, double* out, std::size_t out_stride,
                 const std::vector<double>& taps, ExtensionMode mode) {
    const auto len = static_cast<std::ptrdiff_t>(n);
    const auto half = static_cast<std::ptrdiff_t>(taps.size() / 2);
    for (std::ptrdiff_t o = 0; o < 2 * len; ++o) {
        // Reference sample: the input at o / 2 (exact for even o).
        const std::ptrdiff_t ref_j = o / 2;
        const double ref = in[ref_j * static_cast<std::ptrdiff_t>(in_stride)];
        double acc = 0.0;
        for (std::ptrdiff_t t = -half; t <= half; ++t) {
            const std::ptrdiff_t pos = o - t;
            if (pos % 2 != 0) {
                continue;
            }
            const std::ptrdiff_t j = pos / 2;
            if (j == ref_j) {
                continue;
            }
            const auto idx = extend_index(j, len, mode);
            acc += 2.0 * taps[static_cast<std::size_t>(t + half)] * (in[idx * static_cast<std::ptrdiff_t>(in_stride)] - ref);
        }
        out[o * static_cast<std::ptrdiff_t>(out_stride)] = ref + acc;
    }
}

void check_filter_phases(const LpFilter& filter) {
    // Interpolation needs each polyphase half of the filter to sum to 1/2.
    const auto& taps = filter.taps();
    double even = 0.0;
    for (std::size_t i = 0; i < taps.size(); i += 2) {
        even += taps[i];
    }
    if (std::abs(2.0 * even - 1.0) > 1e-9) {
        throw std::invalid_argument("LpFilter '" + filter.name() + "' has no zero at Nyquist; cannot interpolate");
    }
}

}  // namespace

ImageGrid lp_reduce(const ImageGrid& grid, const LpFilter& filter, ExtensionMode mode) {
    if (grid.width() % 2 != 0 || grid.height() % 2 != 0) {
        throw DimensionError("lp_reduce needs even dimensions, got " + std::to_string(grid.width()) + "x" +
                             std::to_string(grid.height()));
    }
    const std::size_t w = grid.width();
    const std::size_t h = grid.height();
    // Rows first: h x w/2, then columns: h/2 x w/2.
    std::vector<double> tmp(h * (w / 2));
    const double* src = grid.pixels().data();
    for (std::size_t r = 0; r < h; ++r) {
        reduce_line(src + r * w, w, 1, tmp.data() + r * (w / 2), 1, filter.taps(), mode);
    }
    ImageGrid out(w / 2, h / 2);
    double* dst = out.pixels().data();
    for (std::size_t c = 0; c < w / 2; ++c) {
        reduce_line(tmp.data() + c, h, w / 2, dst + c, w / 2, filter.taps(), mode);
    }
    return out;
}

ImageGrid lp_expand(const ImageGrid& grid, const LpFilter& filter, ExtensionMode mode) {
    check_filter_phases(filter);
    const std::size_t w = grid.width();
    const std::size_t h = grid.height();
    std::vector<double> tmp(h * 2 * w);
    const double* src = grid.pixels().data();
    for (std::size_t r = 0; r < h; ++r) {
        expand_line(src + r * w, w, 1, tmp.data() + r * 2 * w, 1, filter.taps(), mode);
    }
    ImageGrid out(2 * w, 2 * h);
    double* dst = out.pixels().data();
    for (std::size_t c = 0; c < 2 * w; ++c) {
        expand_line(tmp.data() + c, h, 2 * w, dst + c, 2 * w, filter.taps(), mode);
    }
    return out;
}

LpDecomposition lp_analysis(const ImageGrid& grid, unsigned levels, const LpFilter& filter, ExtensionMode mode) {
    if (levels < 1) {
        throw std::invalid_argument("lp_analysis needs at least one level");
    }
    const std::size_t block = std::size_t{1} << levels;
    if (grid.width() % block != 0 || grid.height() % block != 0) {
        throw DimensionError("lp_analysis: " + std::to_string(grid.width()) + "x" + std::to_string(grid.height()) +
                             " is not divisible by 2^" + std::to_string(levels));
    }
    check_filter_phases(filter);
    std::vector<ImageGrid> bandpass;
    bandpass.reserve(levels);
    ImageGrid current = grid;
    for (unsigned k = 0; k < levels; ++k) {
        ImageGrid low = lp_reduce(current, filter, mode);
        const ImageGrid predicted = lp_expand(low, filter, mode);
        auto px = current.pixels();
        const auto pred = predicted.pixels();
        for (std::size_t i = 0; i < px.size(); ++i) {
            px[i] -= pred[i];
        }
        bandpass.push_back(std::move(current));
        current = std::move(low);
    }
    return LpDecomposition{std::move(current), std::move(bandpass), PadRecord::identity(grid.width(), grid.height())};
}

ImageGrid lp_synthesis(const LpDecomposition& dec, const LpFilter& filter, ExtensionMode mode) {
    if (dec.bandpass.empty()) {
        throw std::invalid_argument("lp_synthesis: decomposition has no levels");
    }
    for (std::size_t k = dec.levels(); k-- > 0;) {
        const std::size_t expect_w = dec.lowpass.width() << (dec.levels() - k);
        const std::size_t expect_h = dec.lowpass.height() << (dec.levels() - k);
        if (dec.bandpass[k].width() != expect_w || dec.bandpass[k].height() != expect_h) {
            throw DimensionError("lp_synthesis: bandpass level " + std::to_string(k) + " has inconsistent size");
        }
    }
    ImageGrid current = dec.lowpass;
    for (std::size_t k = dec.levels(); k-- > 0;) {
        ImageGrid up = lp_expand(current, filter, mode);
        auto px = up.pixels();
        const auto band = dec.bandpass[k].pixels();
        for (std::size_t i = 0; i < px.size(); ++i) {
            px[i] += band[i];
        }
        current = std::move(up);
    }
    return current;
}

}  // namespace ctd
