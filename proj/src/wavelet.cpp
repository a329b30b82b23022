#include "ctd/wavelet.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "ctd/denoise.hpp"
#include "ctd/imageio.hpp"

namespace ctd {

WaveletFilterPair WaveletFilterPair::from_lowpass(std::string family, std::vector<double> lowpass) {
    if (lowpass.empty() || lowpass.size() % 2 != 0) {
        throw std::invalid_argument("wavelet lowpass must have a positive even length");
    }
    double norm = 0.0;
    for (const double v : lowpass) {
        norm += v * v;
    }
    if (std::fabs(std::sqrt(norm) - 1.0) > 1e-12) {
        throw std::invalid_argument("wavelet lowpass '" + family + "' is not unit norm");
    }
    const std::size_t len = lowpass.size();
    std::vector<double> highpass(len);
    for (std::size_t k = 0; k < len; ++k) {
        highpass[k] = (k % 2 == 0 ? 1.0 : -1.0) * lowpass[len - 1 - k];
    }
    return WaveletFilterPair{std::move(family), std::move(lowpass), std::move(highpass)};
}

WaveletFilterPair WaveletFilterPair::by_name(const std::string& family) {
    if (family == "haar") {
        const double r = std::numbers::sqrt2 / 2.0;
        return from_lowpass(family, {r, r});
    }
    if (family == "db2") {
        return from_lowpass(family, {0.48296291314453414, 0.83651630373780794, 0.22414386804201339,
                                     -0.12940952255126037});
    }
    if (family == "db4") {
        return from_lowpass(family, {0.23037781330889650, 0.71484657055291540, 0.63088076792985890,
                                     -0.02798376941685985, -0.18703481171909309, 0.03084138183556076,
                                     0.03288301166688520, -0.01059740178506903});
    }
    throw std::invalid_argument("unknown wavelet family '" + family + "' (expected haar, db2 or db4)");
}

namespace {

// a[m] = sum_k h[k] x[(2m + k) mod n], d likewise with g.
void analyse_line(const double* x, std::size_t n, std::size_t stride, const WaveletFilterPair& f, double* a,
                  double* d, std::size_t out_stride) {
    const std::size_t half = n / 2;
    const std::size_t len = f.lowpass.size();
    for (std::size_t m = 0; m < half; ++m) {
        double sa = 0.0;
        double sd = 0.0;
        for (std::size_t k = 0; k < len; ++k) {
            const double v = x[((2 * m + k) % n) * stride];
            sa += f.lowpass[k] * v;
            sd += f.highpass[k] * v;
        }
        a[m * out_stride] = sa;
        d[m * out_stride] = sd;
    }
}

void synthesise_line(const double* a, const double* d, std::size_t half, std::size_t in_stride,
                     const WaveletFilterPair& f, double* x, std::size_t stride) {
    const std::size_t n = 2 * half;
    const std::size_t len = f.lowpass.size();
    for (std::size_t i = 0; i < n; ++i) {
        x[i * stride] = 0.0;
    }
    for (std::size_t m = 0; m < half; ++m) {
        const double va = a[m * in_stride];
        const double vd = d[m * in_stride];
        for (std::size_t k = 0; k < len; ++k) {
            x[((2 * m + k) % n) * stride] += f.lowpass[k] * va + f.highpass[k] * vd;
        }
    }
}

struct Quad {
    ImageGrid ll;
    DetailBands details;
};

Quad analyse_level(const ImageGrid& x, const WaveletFilterPair& f) {
    const std::size_t w = x.width();
    const std::size_t h = x.height();
    const std::size_t hw = w / 2;
    const std::size_t hh = h / 2;
    // Row pass: left half lowpass, right half highpass.
    ImageGrid rows(w, h);
    for (std::size_t r = 0; r < h; ++r) {
        const double* src = &x.pixels()[r * w];
        double* dst = &rows.pixels()[r * w];
        analyse_line(src, w, 1, f, dst, dst + hw, 1);
    }
    ImageGrid cols(w, h);
    for (std::size_t c = 0; c < w; ++c) {
        analyse_line(&rows.pixels()[c], h, w, f, &cols.pixels()[c], &cols.pixels()[hh * w + c], w);
    }
    const auto block = [&](std::size_t r0, std::size_t c0) {
        ImageGrid out(hw, hh);
        for (std::size_t r = 0; r < hh; ++r) {
            for (std::size_t c = 0; c < hw; ++c) {
                out(r, c) = cols(r0 + r, c0 + c);
            }
        }
        return out;
    };
    return Quad{block(0, 0), DetailBands{block(hh, 0), block(0, hw), block(hh, hw)}};
}

ImageGrid synthesise_level(const ImageGrid& ll, const DetailBands& d, const WaveletFilterPair& f) {
    const std::size_t hw = ll.width();
    const std::size_t hh = ll.height();
    const std::size_t w = 2 * hw;
    const std::size_t h = 2 * hh;
    ImageGrid cols(w, h);
    for (std::size_t r = 0; r < hh; ++r) {
        for (std::size_t c = 0; c < hw; ++c) {
            cols(r, c) = ll(r, c);
            cols(hh + r, c) = d.lh(r, c);
            cols(r, hw + c) = d.hl(r, c);
            cols(hh + r, hw + c) = d.hh(r, c);
        }
    }
    ImageGrid rows(w, h);
    for (std::size_t c = 0; c < w; ++c) {
        synthesise_line(&cols.pixels()[c], &cols.pixels()[hh * w + c], hh, w, f, &rows.pixels()[c], w);
    }
    ImageGrid x(w, h);
    for (std::size_t r = 0; r < h; ++r) {
        const double* src = &rows.pixels()[r * w];
        synthesise_line(src, src + hw, hw, 1, f, &x.pixels()[r * w], 1);
    }
    return x;
}

const char* band_name(int band) {
    static constexpr const char* kNames[] = {"LH", "HL", "HH"};
    return kNames[band];
}

ImageGrid& band_ref(DetailBands& d, int band) { return band == 0 ? d.lh : band == 1 ? d.hl : d.hh; }

double mean_square_window(const ImageGrid& band, std::size_t r, std::size_t c, unsigned window) {
    const auto half = static_cast<std::ptrdiff_t>(window / 2);
    const auto h = static_cast<std::ptrdiff_t>(band.height());
    const auto w = static_cast<std::ptrdiff_t>(band.width());
    double sum = 0.0;
    for (std::ptrdiff_t dr = -half; dr <= half; ++dr) {
        const auto rr = static_cast<std::size_t>(
            extend_index(static_cast<std::ptrdiff_t>(r) + dr, h, ExtensionMode::symmetric));
        for (std::ptrdiff_t dc = -half; dc <= half; ++dc) {
            const double v = band(rr, static_cast<std::size_t>(extend_index(static_cast<std::ptrdiff_t>(c) + dc, w,
                                                                            ExtensionMode::symmetric)));
            sum += v * v;
        }
    }
    return sum / static_cast<double>(window * window);
}

using BandRule = std::function<SubbandOutcome(ImageGrid& band, double sigma)>;

std::pair<ImageGrid, DenoiseReport> run_wavelet_denoiser(const ImageGrid& grid, const WaveletDenoiseOptions& options,
                                                         const std::string& method, const BandRule& rule) {
    const auto start = std::chrono::steady_clock::now();
    DwtCoeffs coeffs = dwt2(grid, options.levels, options.filters, options.mode);
    DenoiseReport report;
    report.method = method;
    report.config = describe(method, options);
    double sigma = 0.0;
    if (options.sigma_hint) {
        if (*options.sigma_hint < 0.0) {
            throw std::invalid_argument("sigma hint must be nonnegative");
        }
        sigma = *options.sigma_hint;
        report.noise.source = NoiseSource::supplied;
    } else {
        sigma = estimate_sigma_finest_hh(coeffs);
        report.noise.source = NoiseSource::global_finest;
    }
    report.noise.sigma_n_sq = sigma * sigma;
    for (std::size_t level = 0; level < coeffs.levels(); ++level) {
        for (int band = 0; band < 3; ++band) {
            SubbandOutcome outcome = rule(band_ref(coeffs.details[level], band), sigma);
            outcome.label = "l" + std::to_string(level) + band_name(band);
            report.subbands.push_back(std::move(outcome));
        }
    }
    ImageGrid out = idwt2(coeffs, options.filters);
    report.runtime_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return {std::move(out), std::move(report)};
}

SubbandOutcome shrink_band(ImageGrid& band, double t, double (*shrink)(double, double)) {
    SubbandOutcome outcome{"", band.size(), 0, 0, t};
    for (double& c : band.pixels()) {
        c = shrink(c, t);
        if (c != 0.0) {
            ++outcome.kept;
        } else {
            ++outcome.zeroed;
        }
    }
    return outcome;
}

}  // namespace

DwtCoeffs dwt2(const ImageGrid& grid, unsigned levels, const WaveletFilterPair& filters, ExtensionMode mode) {
    if (levels < 1) {
        throw std::invalid_argument("dwt2 needs at least one level");
    }
    auto [padded, pad] = pad_for_levels(grid, levels, mode);
    DwtCoeffs coeffs{std::move(padded), {}, pad};
    for (unsigned k = 0; k < levels; ++k) {
        Quad q = analyse_level(coeffs.approximation, filters);
        coeffs.approximation = std::move(q.ll);
        coeffs.details.push_back(std::move(q.details));
    }
    return coeffs;
}

ImageGrid idwt2(const DwtCoeffs& coeffs, const WaveletFilterPair& filters) {
    ImageGrid x = coeffs.approximation;
    for (std::size_t k = coeffs.levels(); k-- > 0;) {
        const DetailBands& d = coeffs.details[k];
        if (!d.lh.same_shape(x) || !d.hl.same_shape(x) || !d.hh.same_shape(x)) {
            throw DimensionError("idwt2: detail bands of level " + std::to_string(k) +
                                 " do not match the approximation");
        }
        x = synthesise_level(x, d, filters);
    }
    if (x.width() != coeffs.pad.padded_width() || x.height() != coeffs.pad.padded_height()) {
        throw DimensionError("idwt2: reconstruction does not match the pad record");
    }
    return crop_to_record(x, coeffs.pad);
}

double universal_threshold(double sigma, std::size_t m) {
    if (m < 1) {
        throw std::invalid_argument("universal threshold needs a nonempty subband");
    }
    return sigma * std::sqrt(2.0 * std::log(static_cast<double>(m)));
}

double estimate_sigma_finest_hh(const DwtCoeffs& coeffs) {
    if (coeffs.details.empty()) {
        throw std::invalid_argument("noise estimation needs at least one detail level");
    }
    return median_abs(coeffs.details.front().hh.pixels()) / kMadConstant;
}

std::string describe(const std::string& method, const WaveletDenoiseOptions& options) {
    std::ostringstream out;
    out << method << " wavelet=" << options.filters.family << " levels=" << options.levels
        << " ext=" << to_string(options.mode);
    if (method == "wiener") {
        out << " window=" << options.window;
    }
    out << " sigma=" << (options.sigma_hint ? format_double(*options.sigma_hint) : std::string("mad"));
    return out.str();
}

std::pair<ImageGrid, DenoiseReport> denoise_hard(const ImageGrid& grid, const WaveletDenoiseOptions& options) {
    return run_wavelet_denoiser(grid, options, "hard", [](ImageGrid& band, double sigma) {
        return shrink_band(band, universal_threshold(sigma, band.size()), &hard_threshold);
    });
}

std::pair<ImageGrid, DenoiseReport> denoise_soft(const ImageGrid& grid, const WaveletDenoiseOptions& options) {
    return run_wavelet_denoiser(grid, options, "soft", [](ImageGrid& band, double sigma) {
        return shrink_band(band, universal_threshold(sigma, band.size()), &soft_threshold);
    });
}

std::pair<ImageGrid, DenoiseReport> denoise_wiener(const ImageGrid& grid, const WaveletDenoiseOptions& options) {
    if (options.window < 3 || options.window % 2 == 0) {
        throw std::invalid_argument("Wiener window must be odd and at least 3, got " +
                                    std::to_string(options.window));
    }
    const unsigned window = options.window;
    return run_wavelet_denoiser(grid, options, "wiener", [window](ImageGrid& band, double sigma) {
        const double noise = sigma * sigma;
        const ImageGrid source = band;
        SubbandOutcome outcome{"", band.size(), 0, 0, std::nullopt};
        for (std::size_t r = 0; r < band.height(); ++r) {
            for (std::size_t c = 0; c < band.width(); ++c) {
                const double v = mean_square_window(source, r, c, window);
                const double gain = v > 0.0 ? std::max(v - noise, 0.0) / v : 0.0;
                band(r, c) = gain * source(r, c);
                if (band(r, c) != 0.0) {
                    ++outcome.kept;
                } else {
                    ++outcome.zeroed;
                }
            }
        }
        return outcome;
    });
}

}  // namespace ctd
