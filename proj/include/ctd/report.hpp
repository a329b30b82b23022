#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ctd {

/// A directional subband of a contourlet decomposition: pyramid level
/// (0 = finest) and tree index within that level.
struct SubbandKey {
    unsigned level = 0;
    unsigned index = 0;

    friend auto operator<=>(const SubbandKey&, const SubbandKey&) = default;
};

std::string to_string(const SubbandKey& key);

enum class NoiseSource {
    /// Median over the finest-level directional subbands.
    global_finest,
    /// Median within each directional subband separately.
    per_subband,
    /// Noise level given by the caller.
    supplied,
};

const char* to_string(NoiseSource source);
NoiseSource noise_source_from_string(std::string_view name);

struct NoiseEstimate {
    double sigma_n_sq = 0.0;
    NoiseSource source = NoiseSource::global_finest;
    /// Present iff source == per_subband.
    std::optional<std::map<SubbandKey, double>> per_subband_values;
};

enum class ThresholdMode { paper_literal, per_subband, bayes };

const char* to_string(ThresholdMode mode);
ThresholdMode threshold_mode_from_string(std::string_view name);

struct ThresholdSpec {
    ThresholdMode mode = ThresholdMode::per_subband;
    double scale = 1.0;
    double sigma_g = 0.0;
    std::map<SubbandKey, double> values;
};

struct SubbandOutcome {
    std::string label;
    std::size_t count = 0;
    std::size_t kept = 0;
    std::size_t zeroed = 0;
    std::optional<double> threshold;
};

struct DenoiseReport {
    std::string method;
    /// Canonical text form of every parameter that affects the output.
    std::string config;
    NoiseEstimate noise;
    std::optional<ThresholdSpec> threshold;
    std::vector<SubbandOutcome> subbands;
    std::optional<double> psnr_noisy;
    std::optional<double> psnr_denoised;
    /// PSNR of the clamped and rounded output.
    std::optional<double> psnr_denoised_quantized;
    double runtime_ms = 0.0;

    std::size_t total_kept() const noexcept;
    std::size_t total_zeroed() const noexcept;

    /// One "key=value" line per field, in a fixed order. runtime_ms is the
    /// only field that varies between identical runs.
    std::string to_key_value(bool include_runtime = true) const;
};

/// 64-bit FNV-1a, printed as 16 lowercase hex digits.
std::string config_digest(std::string_view text);

/// Shortest round-trip decimal form of a double; "inf"/"-inf"/"nan" otherwise.
std::string format_double(double value);

/// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_escape(std::string_view field);

}  // namespace ctd
