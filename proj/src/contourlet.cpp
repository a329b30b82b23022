#include "ctd/contourlet.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "ctd/imageio.hpp"

namespace ctd {

void ContourletConfig::validate() const {
    if (levels < 1) {
        throw std::invalid_argument("contourlet config needs at least one level");
    }
    if (orders.size() != levels) {
        throw std::invalid_argument("contourlet config has " + std::to_string(levels) + " levels but " +
                                    std::to_string(orders.size()) + " DFB orders");
    }
    for (const unsigned order : orders) {
        if (order > kMaxDfbOrder) {
            throw std::invalid_argument("DFB order " + std::to_string(order) + " exceeds the maximum of " +
                                        std::to_string(kMaxDfbOrder));
        }
    }
}

unsigned ContourletConfig::alignment_exponent() const {
    unsigned exponent = levels;
    for (std::size_t k = 0; k < orders.size(); ++k) {
        exponent = std::max(exponent, static_cast<unsigned>(k) + orders[k]);
    }
    return exponent;
}

std::size_t ContourletCoeffs::directional_count() const noexcept {
    std::size_t total = 0;
    for (const auto& level : directional) {
        total += level.sample_count();
    }
    return total;
}

ContourletCoeffs contourlet_forward(const ImageGrid& grid, const ContourletConfig& config) {
    config.validate();
    auto [padded, pad] = pad_for_levels(grid, config.alignment_exponent(), config.extension);
    LpDecomposition lp = lp_analysis(padded, config.levels, config.lp_filter, config.extension);
    std::vector<DirectionalSubbands> directional;
    directional.reserve(config.levels);
    for (unsigned k = 0; k < config.levels; ++k) {
        directional.push_back(dfb_analysis(lp.bandpass[k], config.orders[k], config.fan_filters));
    }
    return ContourletCoeffs{std::move(lp.lowpass), std::move(directional), config, pad};
}

ImageGrid contourlet_inverse(const ContourletCoeffs& coeffs) {
    const ContourletConfig& config = coeffs.config;
    config.validate();
    if (coeffs.directional.size() != config.levels) {
        throw DimensionError("contourlet coefficients hold " + std::to_string(coeffs.directional.size()) +
                             " levels, config says " + std::to_string(config.levels));
    }
    std::size_t w = coeffs.pad.padded_width();
    std::size_t h = coeffs.pad.padded_height();
    std::vector<ImageGrid> bandpass;
    bandpass.reserve(config.levels);
    for (unsigned k = 0; k < config.levels; ++k) {
        const DirectionalSubbands& level = coeffs.directional[k];
        if (level.order != config.orders[k] || level.source_width != w || level.source_height != h) {
            throw DimensionError("contourlet level " + std::to_string(k) + " does not match the config");
        }
        bandpass.push_back(dfb_synthesis(level, config.fan_filters));
        w /= 2;
        h /= 2;
    }
    if (coeffs.lowpass.width() != w || coeffs.lowpass.height() != h) {
        throw DimensionError("contourlet lowpass is " + std::to_string(coeffs.lowpass.width()) + "x" +
                             std::to_string(coeffs.lowpass.height()) + ", expected " + std::to_string(w) + "x" +
                             std::to_string(h));
    }
    const LpDecomposition lp{coeffs.lowpass, std::move(bandpass), coeffs.pad};
    return crop_to_record(lp_synthesis(lp, config.lp_filter, config.extension), coeffs.pad);
}

ContourletCoeffs map_coefficients(const ContourletCoeffs& coeffs, const std::function<double(double)>& f,
                                  bool include_lowpass) {
    ContourletCoeffs out = coeffs;
    for (auto& level : out.directional) {
        for (auto& band : level.subbands) {
            for (double& c : band.pixels()) {
                c = f(c);
            }
        }
    }
    if (include_lowpass) {
        for (double& c : out.lowpass.pixels()) {
            c = f(c);
        }
    }
    return out;
}

namespace {

constexpr std::array<char, 8> kMagic{'C', 'T', 'D', 'C', 'O', 'E', 'F', '1'};

template <typename T>
void put_le(std::ostream& out, T value) {
    std::array<char, sizeof(T)> bytes{};
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        bytes[i] = static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xFF);
    }
    out.write(bytes.data(), bytes.size());
}

template <typename T>
T get_le(std::istream& in) {
    std::array<unsigned char, sizeof(T)> bytes{};
    if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
        throw std::runtime_error("coefficient dump is truncated");
    }
    std::uint64_t value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        value |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
    }
    return static_cast<T>(value);
}

void put_string(std::ostream& out, const std::string& s) {
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string get_string(std::istream& in) {
    const auto len = get_le<std::uint32_t>(in);
    if (len > 256) {
        throw std::runtime_error("coefficient dump has an implausible name length");
    }
    std::string s(len, '\0');
    if (!in.read(s.data(), len)) {
        throw std::runtime_error("coefficient dump is truncated");
    }
    return s;
}

void put_grid_values(std::ostream& out, const ImageGrid& grid) {
    for (const double v : grid.pixels()) {
        put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
    }
}

void get_grid_values(std::istream& in, ImageGrid& grid) {
    for (double& v : grid.pixels()) {
        v = std::bit_cast<double>(get_le<std::uint64_t>(in));
    }
}

}  // namespace

void write_coefficients(std::ostream& out, const ContourletCoeffs& coeffs) {
    const ContourletConfig& config = coeffs.config;
    out.write(kMagic.data(), kMagic.size());
    put_le<std::uint32_t>(out, config.levels);
    for (const unsigned order : config.orders) {
        put_le<std::uint32_t>(out, order);
    }
    put_le<std::uint32_t>(out, config.extension == ExtensionMode::symmetric ? 0U : 1U);
    put_string(out, config.lp_filter.name());
    put_string(out, config.fan_filters.name);
    put_le<std::uint64_t>(out, coeffs.pad.original_width);
    put_le<std::uint64_t>(out, coeffs.pad.original_height);
    put_le<std::uint64_t>(out, coeffs.pad.padded_width());
    put_le<std::uint64_t>(out, coeffs.pad.padded_height());
    put_le<std::uint64_t>(out, coeffs.lowpass.width());
    put_le<std::uint64_t>(out, coeffs.lowpass.height());
    for (const auto& level : coeffs.directional) {
        for (const auto& band : level.subbands) {
            put_le<std::uint64_t>(out, band.width());
            put_le<std::uint64_t>(out, band.height());
        }
    }
    for (const auto& level : coeffs.directional) {
        for (const auto& band : level.subbands) {
            put_grid_values(out, band);
        }
    }
    put_grid_values(out, coeffs.lowpass);
    if (!out) {
        throw std::runtime_error("failed to write coefficient dump");
    }
}

ContourletCoeffs read_coefficients(std::istream& in) {
    std::array<char, 8> magic{};
    if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
        throw std::runtime_error("not a contourlet coefficient dump");
    }
    ContourletConfig config;
    config.levels = get_le<std::uint32_t>(in);
    if (config.levels < 1 || config.levels > 16) {
        throw std::runtime_error("coefficient dump has an implausible level count");
    }
    config.orders.assign(config.levels, 0);
    for (auto& order : config.orders) {
        order = get_le<std::uint32_t>(in);
    }
    config.extension = get_le<std::uint32_t>(in) == 0 ? ExtensionMode::symmetric : ExtensionMode::periodic;
    config.lp_filter = LpFilter::by_name(get_string(in));
    config.fan_filters = FanFilterPair::by_name(get_string(in));
    config.validate();

    PadRecord pad;
    pad.extension_mode = config.extension;
    pad.original_width = get_le<std::uint64_t>(in);
    pad.original_height = get_le<std::uint64_t>(in);
    const auto padded_w = get_le<std::uint64_t>(in);
    const auto padded_h = get_le<std::uint64_t>(in);
    if (padded_w < pad.original_width || padded_h < pad.original_height) {
        throw std::runtime_error("coefficient dump has inconsistent padding");
    }
    pad.pad_right = padded_w - pad.original_width;
    pad.pad_bottom = padded_h - pad.original_height;

    const auto read_dims = [&in]() {
        const auto w = get_le<std::uint64_t>(in);
        const auto h = get_le<std::uint64_t>(in);
        return ImageGrid(w, h);
    };
    ImageGrid lowpass = read_dims();
    std::vector<DirectionalSubbands> directional;
    std::size_t w = padded_w;
    std::size_t h = padded_h;
    for (unsigned k = 0; k < config.levels; ++k) {
        DirectionalSubbands level;
        level.order = config.orders[k];
        level.source_width = w;
        level.source_height = h;
        for (std::size_t i = 0; i < (std::size_t{1} << level.order); ++i) {
            level.subbands.push_back(read_dims());
        }
        directional.push_back(std::move(level));
        w /= 2;
        h /= 2;
    }
    for (auto& level : directional) {
        for (auto& band : level.subbands) {
            get_grid_values(in, band);
        }
    }
    get_grid_values(in, lowpass);
    return ContourletCoeffs{std::move(lowpass), std::move(directional), std::move(config), pad};
}

}  // namespace ctd
