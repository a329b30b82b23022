#include "ctd/denoise.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ctd/metrics.hpp"

namespace ctd {

double median_abs(std::span<const double> values) {
    if (values.empty()) {
        throw std::invalid_argument("median of an empty coefficient set");
    }
    std::vector<double> a(values.size());
    std::transform(values.begin(), values.end(), a.begin(), [](double v) { return std::fabs(v); });
    const std::size_t mid = a.size() / 2;
    std::nth_element(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(mid), a.end());
    const double upper = a[mid];
    if (a.size() % 2 == 1) {
        return upper;
    }
    const double lower = *std::max_element(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

double mad_variance(std::span<const double> values) {
    const double sigma = median_abs(values) / kMadConstant;
    return sigma * sigma;
}

double population_stddev(const ImageGrid& grid) {
    const auto p = grid.pixels();
    double mean = 0.0;
    for (const double v : p) {
        mean += v;
    }
    mean /= static_cast<double>(p.size());
    double ss = 0.0;
    for (const double v : p) {
        ss += (v - mean) * (v - mean);
    }
    return std::sqrt(ss / static_cast<double>(p.size()));
}

double adaptive_threshold(double n, double sigma_n_sq, double sigma_g, double scale) {
    if (!(scale > 0.0)) {
        throw std::invalid_argument("threshold scale must be positive");
    }
    if (sigma_n_sq < 0.0) {
        throw std::invalid_argument("noise variance must be nonnegative");
    }
    if (sigma_n_sq == 0.0) {
        return 0.0;
    }
    if (!(sigma_g > 0.0)) {
        throw std::invalid_argument("the noisy image has zero standard deviation; the adaptive threshold is undefined");
    }
    return scale * 0.75 * n * (sigma_n_sq / sigma_g);
}

double bayes_threshold(double mean_square, double sigma_n_sq, double max_abs, double scale) {
    if (!(scale > 0.0)) {
        throw std::invalid_argument("threshold scale must be positive");
    }
    const double sigma_x = std::sqrt(std::max(mean_square - sigma_n_sq, 0.0));
    if (sigma_x == 0.0) {
        return max_abs;
    }
    return scale * sigma_n_sq / sigma_x;
}

NoiseEstimate estimate_noise_variance(const ContourletCoeffs& coeffs, NoiseSource source) {
    if (coeffs.directional.empty()) {
        throw std::invalid_argument("noise estimation needs at least one directional level");
    }
    std::vector<double> finest;
    for (const auto& band : coeffs.directional.front().subbands) {
        finest.insert(finest.end(), band.pixels().begin(), band.pixels().end());
    }
    NoiseEstimate est;
    est.sigma_n_sq = mad_variance(finest);
    est.source = source;
    if (source == NoiseSource::per_subband) {
        std::map<SubbandKey, double> values;
        for (std::size_t k = 0; k < coeffs.directional.size(); ++k) {
            const auto& bands = coeffs.directional[k].subbands;
            for (std::size_t i = 0; i < bands.size(); ++i) {
                values[{static_cast<unsigned>(k), static_cast<unsigned>(i)}] = mad_variance(bands[i].pixels());
            }
        }
        est.per_subband_values = std::move(values);
    } else if (source != NoiseSource::global_finest) {
        throw std::invalid_argument("contourlet noise estimation supports global_finest and per_subband");
    }
    return est;
}

ThresholdSpec compute_threshold(const NoiseEstimate& est, const ImageGrid& noisy_image,
                                const ContourletCoeffs& coeffs, ThresholdMode mode, double scale) {
    if (!(scale > 0.0)) {
        throw std::invalid_argument("threshold scale must be positive");
    }
    ThresholdSpec spec;
    spec.mode = mode;
    spec.scale = scale;
    spec.sigma_g = population_stddev(noisy_image);
    const double n_image = static_cast<double>(noisy_image.size());
    for (std::size_t k = 0; k < coeffs.directional.size(); ++k) {
        const auto& bands = coeffs.directional[k].subbands;
        for (std::size_t i = 0; i < bands.size(); ++i) {
            const SubbandKey key{static_cast<unsigned>(k), static_cast<unsigned>(i)};
            const double noise = est.per_subband_values ? est.per_subband_values->at(key) : est.sigma_n_sq;
            const auto values = bands[i].pixels();
            double t = 0.0;
            switch (mode) {
                case ThresholdMode::paper_literal:
                    t = adaptive_threshold(n_image, noise, spec.sigma_g, scale);
                    break;
                case ThresholdMode::per_subband:
                    t = adaptive_threshold(static_cast<double>(values.size()), noise, spec.sigma_g, scale);
                    break;
                case ThresholdMode::bayes: {
                    double ss = 0.0;
                    double max_abs = 0.0;
                    for (const double c : values) {
                        ss += c * c;
                        max_abs = std::max(max_abs, std::fabs(c));
                    }
                    t = bayes_threshold(ss / static_cast<double>(values.size()), noise, max_abs, scale);
                    break;
                }
            }
            spec.values[key] = t;
        }
    }
    return spec;
}

ThresholdResult apply_hard_threshold(const ContourletCoeffs& coeffs, const ThresholdSpec& spec) {
    ThresholdResult result{coeffs, {}};
    for (std::size_t k = 0; k < result.coeffs.directional.size(); ++k) {
        auto& bands = result.coeffs.directional[k].subbands;
        for (std::size_t i = 0; i < bands.size(); ++i) {
            const SubbandKey key{static_cast<unsigned>(k), static_cast<unsigned>(i)};
            const auto it = spec.values.find(key);
            if (it == spec.values.end()) {
                throw std::invalid_argument("no threshold for subband " + to_string(key));
            }
            const double t = it->second;
            SubbandOutcome outcome{to_string(key), bands[i].size(), 0, 0, t};
            for (double& c : bands[i].pixels()) {
                c = hard_threshold(c, t);
                if (c != 0.0) {
                    ++outcome.kept;
                } else {
                    ++outcome.zeroed;
                }
            }
            result.outcomes.push_back(std::move(outcome));
        }
    }
    return result;
}

std::string describe(const ContourletConfig& config, const ContourletDenoiseOptions& options) {
    std::ostringstream out;
    out << "contourlet levels=" << config.levels << " orders=";
    for (std::size_t k = 0; k < config.orders.size(); ++k) {
        out << (k == 0 ? "" : ":") << config.orders[k];
    }
    out << " lp=" << config.lp_filter.name() << " fan=" << config.fan_filters.name
        << " ext=" << to_string(config.extension) << " mode=" << to_string(options.mode)
        << " scale=" << format_double(options.scale) << " noise=" << to_string(options.noise_source);
    return out.str();
}

std::pair<ImageGrid, DenoiseReport> denoise_contourlet(const ImageGrid& noisy, const ContourletConfig& config,
                                                       const ContourletDenoiseOptions& options,
                                                       const ImageGrid* clean_reference) {
    const auto start = std::chrono::steady_clock::now();
    const ContourletCoeffs coeffs = contourlet_forward(noisy, config);
    NoiseEstimate est = estimate_noise_variance(coeffs, options.noise_source);
    ThresholdSpec spec = compute_threshold(est, noisy, coeffs, options.mode, options.scale);
    ThresholdResult thresholded = apply_hard_threshold(coeffs, spec);
    ImageGrid denoised = contourlet_inverse(thresholded.coeffs);
    const auto stop = std::chrono::steady_clock::now();

    DenoiseReport report;
    report.method = "contourlet";
    report.config = describe(config, options);
    report.noise = std::move(est);
    report.threshold = std::move(spec);
    report.subbands = std::move(thresholded.outcomes);
    if (clean_reference != nullptr) {
        report.psnr_noisy = psnr(*clean_reference, noisy).psnr_db;
        report.psnr_denoised = psnr(*clean_reference, denoised).psnr_db;
        report.psnr_denoised_quantized = psnr_quantized(*clean_reference, denoised).psnr_db;
    }
    report.runtime_ms = std::chrono::duration<double, std::milli>(stop - start).count();
    return {std::move(denoised), std::move(report)};
}

}  // namespace ctd
