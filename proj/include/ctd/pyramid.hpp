#pragma once

#include <string>
#include <vector>

#include "ctd/grid.hpp"

namespace ctd {

/// Odd-length symmetric 1-D lowpass used separably by the Laplacian pyramid,
/// both to blur before decimation and (with gain 2 per axis) to interpolate.
class LpFilter {
public:
    /// Throws if the tap count is even or the taps do not sum to 1 within 1e-12.
    LpFilter(std::string name, std::vector<double> taps);

    /// The 5-tap Burt-Adelson kernel [1/4 - a/2, 1/4, a, 1/4, 1/4 - a/2].
    static LpFilter burt_adelson(double a = 0.6);
    /// 9-tap CDF 9/7 analysis lowpass, normalized to unit DC gain.
    static LpFilter cdf97();
    static LpFilter by_name(const std::string& name);

    const std::string& name() const noexcept { return name_; }
    const std::vector<double>& taps() const noexcept { return taps_; }
    std::size_t center_index() const noexcept { return (taps_.size() - 1) / 2; }
    double dc_gain() const noexcept;

private:
    std::string name_;
    std::vector<double> taps_;
};

struct LpDecomposition {
    ImageGrid lowpass;
    /// bandpass[0] is the finest scale, same size as the analysed grid.
    std::vector<ImageGrid> bandpass;
    PadRecord pad;

    std::size_t levels() const noexcept { return bandpass.size(); }
};

/// Blur with the filter on rows then columns and keep even-indexed samples.
ImageGrid lp_reduce(const ImageGrid& grid, const LpFilter& filter, ExtensionMode mode);

/// Upsample by two per axis and interpolate with 2 * taps per axis, so that
/// the result has width `2 * grid.width()` and height `2 * grid.height()`.
ImageGrid lp_expand(const ImageGrid& grid, const LpFilter& filter, ExtensionMode mode);

/// Burt-Adelson Laplacian pyramid. Grid dimensions must be divisible by
/// 2^levels; levels >= 1.
LpDecomposition lp_analysis(const ImageGrid& grid, unsigned levels, const LpFilter& filter,
                            ExtensionMode mode = ExtensionMode::symmetric);

/// Exact inverse of lp_analysis: x_k = bandpass_k + expand(x_{k+1}).
ImageGrid lp_synthesis(const LpDecomposition& dec, const LpFilter& filter,
                       ExtensionMode mode = ExtensionMode::symmetric);

}  // namespace ctd
