#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ctd/grid.hpp"
#include "ctd/report.hpp"

namespace ctd {

/// Orthogonal two-channel filter pair; the highpass is the quadrature
/// mirror g[k] = (-1)^k h[L-1-k].
struct WaveletFilterPair {
    std::string family;
    std::vector<double> lowpass;
    std::vector<double> highpass;

    /// "haar", "db2" or "db4" (8 taps).
    static WaveletFilterPair by_name(const std::string& family);
    static WaveletFilterPair from_lowpass(std::string family, std::vector<double> lowpass);
};

/// Detail bands of one level, labelled by (horizontal filter, vertical filter):
/// lh is lowpass along rows and highpass along columns.
struct DetailBands {
    ImageGrid lh;
    ImageGrid hl;
    ImageGrid hh;
};

struct DwtCoeffs {
    ImageGrid approximation;
    /// details[0] is the finest level.
    std::vector<DetailBands> details;
    PadRecord pad;

    std::size_t levels() const noexcept { return details.size(); }
};

/// Separable Mallat decomposition, rows then columns per level. The grid is
/// first padded with `mode` to a multiple of 2^levels; the filtering itself
/// is periodic so the transform stays orthogonal.
DwtCoeffs dwt2(const ImageGrid& grid, unsigned levels, const WaveletFilterPair& filters,
               ExtensionMode mode = ExtensionMode::periodic);

ImageGrid idwt2(const DwtCoeffs& coeffs, const WaveletFilterPair& filters);

/// Soft rule sign(c) max(|c| - t, 0).
inline double soft_threshold(double c, double t) {
    if (c > t) {
        return c - t;
    }
    if (c < -t) {
        return c + t;
    }
    return 0.0;
}

/// sigma sqrt(2 ln m).
double universal_threshold(double sigma, std::size_t m);

struct WaveletDenoiseOptions {
    unsigned levels = 3;
    WaveletFilterPair filters = WaveletFilterPair::by_name("db4");
    ExtensionMode mode = ExtensionMode::symmetric;
    /// Noise standard deviation; estimated from the finest HH band when absent.
    std::optional<double> sigma_hint;
    /// Side of the square Wiener window; odd, >= 3.
    unsigned window = 5;
};

std::string describe(const std::string& method, const WaveletDenoiseOptions& options);

/// median(|finest HH|) / 0.6745.
double estimate_sigma_finest_hh(const DwtCoeffs& coeffs);

std::pair<ImageGrid, DenoiseReport> denoise_hard(const ImageGrid& grid, const WaveletDenoiseOptions& options = {});
std::pair<ImageGrid, DenoiseReport> denoise_soft(const ImageGrid& grid, const WaveletDenoiseOptions& options = {});

/// Per detail coefficient, gain max(v - sigma^2, 0) / v where v is the mean
/// of c^2 over the window (symmetric extension inside the subband); v = 0
/// gives gain 0.
std::pair<ImageGrid, DenoiseReport> denoise_wiener(const ImageGrid& grid, const WaveletDenoiseOptions& options = {});

}  // namespace ctd
