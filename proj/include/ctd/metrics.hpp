#pragma once

#include <limits>
#include <string>

#include "ctd/grid.hpp"

namespace ctd {

inline constexpr double kPeakValue = 255.0;

struct QualityScore {
    double mse = 0.0;
    /// +infinity when mse == 0.
    double psnr_db = std::numeric_limits<double>::infinity();

    bool infinite() const noexcept { return mse == 0.0; }
};

/// Mean of squared differences in full precision. Throws DimensionError on
/// shape mismatch.
double mse(const ImageGrid& a, const ImageGrid& b);

/// 10 log10(255^2 / mse).
double psnr_from_mse(double mse_value);

QualityScore psnr(const ImageGrid& a, const ImageGrid& b);

/// Scores `test` after clamping and rounding it as save_image would.
QualityScore psnr_quantized(const ImageGrid& reference, const ImageGrid& test);

/// Fixed-point text for finite values, "inf" otherwise.
std::string format_psnr(double psnr_db, int decimals = 4);

}  // namespace ctd
