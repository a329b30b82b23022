#include "ctd/report.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ctd {

std::string to_string(const SubbandKey& key) {
    return "l" + std::to_string(key.level) + "d" + std::to_string(key.index);
}

const char* to_string(NoiseSource source) {
    switch (source) {
        case NoiseSource::global_finest: return "global_finest";
        case NoiseSource::per_subband: return "per_subband";
        case NoiseSource::supplied: return "supplied";
    }
    return "unknown";
}

NoiseSource noise_source_from_string(std::string_view name) {
    if (name == "global_finest") {
        return NoiseSource::global_finest;
    }
    if (name == "per_subband") {
        return NoiseSource::per_subband;
    }
    throw std::invalid_argument("unknown noise source '" + std::string(name) +
                                "' (expected global_finest or per_subband)");
}

const char* to_string(ThresholdMode mode) {
    switch (mode) {
        case ThresholdMode::paper_literal: return "paper_literal";
        case ThresholdMode::per_subband: return "per_subband";
        case ThresholdMode::bayes: return "bayes";
    }
    return "unknown";
}

ThresholdMode threshold_mode_from_string(std::string_view name) {
    if (name == "paper_literal") {
        return ThresholdMode::paper_literal;
    }
    if (name == "per_subband") {
        return ThresholdMode::per_subband;
    }
    if (name == "bayes") {
        return ThresholdMode::bayes;
    }
    throw std::invalid_argument("unknown threshold mode '" + std::string(name) +
                                "' (expected paper_literal, per_subband or bayes)");
}

std::size_t DenoiseReport::total_kept() const noexcept {
    std::size_t total = 0;
    for (const auto& s : subbands) {
        total += s.kept;
    }
    return total;
}

std::size_t DenoiseReport::total_zeroed() const noexcept {
    std::size_t total = 0;
    for (const auto& s : subbands) {
        total += s.zeroed;
    }
    return total;
}

std::string format_double(double value) {
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    char buf[64];
    const auto result = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, result.ptr);
}

std::string DenoiseReport::to_key_value(bool include_runtime) const {
    std::ostringstream out;
    const auto line = [&out](const std::string& key, const std::string& value) {
        out << key << '=' << value << '\n';
    };
    line("method", method);
    line("config", config);
    line("config_digest", config_digest(config));
    line("noise_source", to_string(noise.source));
    line("sigma_n_sq", format_double(noise.sigma_n_sq));
    line("sigma_n", format_double(std::sqrt(noise.sigma_n_sq)));
    if (noise.per_subband_values) {
        for (const auto& [key, value] : *noise.per_subband_values) {
            line("noise." + to_string(key), format_double(value));
        }
    }
    if (threshold) {
        line("threshold_mode", to_string(threshold->mode));
        line("threshold_scale", format_double(threshold->scale));
        line("sigma_g", format_double(threshold->sigma_g));
    }
    line("coefficients_kept", std::to_string(total_kept()));
    line("coefficients_zeroed", std::to_string(total_zeroed()));
    for (const auto& s : subbands) {
        const std::string prefix = "subband." + s.label + ".";
        line(prefix + "count", std::to_string(s.count));
        line(prefix + "kept", std::to_string(s.kept));
        line(prefix + "zeroed", std::to_string(s.zeroed));
        if (s.threshold) {
            line(prefix + "threshold", format_double(*s.threshold));
        }
    }
    if (psnr_noisy) {
        line("psnr_noisy", format_double(*psnr_noisy));
    }
    if (psnr_denoised) {
        line("psnr_denoised", format_double(*psnr_denoised));
    }
    if (psnr_denoised_quantized) {
        line("psnr_denoised_quantized", format_double(*psnr_denoised_quantized));
    }
    if (include_runtime) {
        line("runtime_ms", format_double(runtime_ms));
    }
    return out.str();
}

std::string config_digest(std::string_view text) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (const char c : text) {
        hash ^= static_cast<unsigned char>(c);
        hash *= 0x100000001b3ULL;
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = kHex[hash & 0xF];
        hash >>= 4;
    }
    return out;
}

std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\n\r") == std::string_view::npos) {
        return std::string(field);
    }
    std::string out = "\"";
    for (const char c : field) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace ctd
