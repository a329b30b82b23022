#pragma once

#include <span>
#include <utility>
#include <vector>

#include "ctd/contourlet.hpp"
#include "ctd/grid.hpp"
#include "ctd/report.hpp"

namespace ctd {

inline constexpr double kMadConstant = 0.6745;

/// Median of |v|; an even count averages the two central order statistics.
/// Throws std::invalid_argument on an empty set.
double median_abs(std::span<const double> values);

/// (median_abs(values) / 0.6745)^2.
double mad_variance(std::span<const double> values);

/// Population standard deviation of the samples.
double population_stddev(const ImageGrid& grid);

/// scale * 3/4 * n * sigma_n_sq / sigma_g. Returns 0 whenever sigma_n_sq is
/// 0; otherwise sigma_g must be positive.
double adaptive_threshold(double n, double sigma_n_sq, double sigma_g, double scale);

/// scale * sigma_n_sq / sigma_x with sigma_x = sqrt(max(mean_square - sigma_n_sq, 0)).
/// When sigma_x is 0 the result is max_abs, which suppresses the whole subband.
double bayes_threshold(double mean_square, double sigma_n_sq, double max_abs, double scale);

/// Hard rule: c when |c| > t, otherwise 0.
inline double hard_threshold(double c, double t) { return (c > t || c < -t) ? c : 0.0; }

/// Noise variance from the directional coefficients. With global_finest the
/// median runs over every subband of the finest level (level 0); with
/// per_subband each subband gets its own value and sigma_n_sq holds the
/// global_finest value.
NoiseEstimate estimate_noise_variance(const ContourletCoeffs& coeffs,
                                      NoiseSource source = NoiseSource::global_finest);

/// Thresholds for every directional subband. N is the pixel count of
/// `noisy_image` for paper_literal and the subband's coefficient count for
/// per_subband; bayes uses the mean square of the subband. Subbands use
/// their own noise value when the estimate carries per-subband values.
ThresholdSpec compute_threshold(const NoiseEstimate& est, const ImageGrid& noisy_image,
                                const ContourletCoeffs& coeffs, ThresholdMode mode, double scale = 1.0);

struct ThresholdResult {
    ContourletCoeffs coeffs;
    /// Traversal order: finest level first, tree index order.
    std::vector<SubbandOutcome> outcomes;
};

/// Applies hard_threshold to every directional subband; the lowpass is
/// left alone. Throws std::invalid_argument if a subband has no threshold.
ThresholdResult apply_hard_threshold(const ContourletCoeffs& coeffs, const ThresholdSpec& spec);

struct ContourletDenoiseOptions {
    ThresholdMode mode = ThresholdMode::per_subband;
    double scale = 1.0;
    NoiseSource noise_source = NoiseSource::global_finest;
};

/// Canonical text form of a contourlet configuration and options.
std::string describe(const ContourletConfig& config, const ContourletDenoiseOptions& options);

/// Forward transform, noise estimate, threshold, hard rule, inverse.
/// PSNR fields of the report are filled iff `clean_reference` is given.
std::pair<ImageGrid, DenoiseReport> denoise_contourlet(const ImageGrid& noisy, const ContourletConfig& config,
                                                       const ContourletDenoiseOptions& options = {},
                                                       const ImageGrid* clean_reference = nullptr);

}  // namespace ctd
