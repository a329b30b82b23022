#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ctd/contourlet.hpp"
#include "ctd/imageio.hpp"
#include "helpers.hpp"

using ctd::ContourletConfig;
using ctd::ImageGrid;

namespace {

ContourletConfig config_with(unsigned levels, std::vector<unsigned> orders) {
    ContourletConfig c;
    c.levels = levels;
    c.orders = std::move(orders);
    return c;
}

// Reconstruction from the pyramid lowpass alone, computed with the pyramid
// module directly.
ImageGrid lowpass_only(const ImageGrid& x, const ContourletConfig& config) {
    const auto [padded, pad] = ctd::pad_for_levels(x, config.alignment_exponent(), config.extension);
    auto dec = ctd::lp_analysis(padded, config.levels, config.lp_filter, config.extension);
    for (auto& band : dec.bandpass) {
        band = ImageGrid(band.width(), band.height());
    }
    return ctd::crop_to_record(ctd::lp_synthesis(dec, config.lp_filter, config.extension), pad);
}

}  // namespace

TEST_CASE("default config") {
    const ContourletConfig c;
    CHECK(c.levels == 3);
    CHECK(c.orders == std::vector<unsigned>{3, 2, 2});
    CHECK(c.lp_filter.name() == "burt");
    CHECK(c.fan_filters.name == "pkva12");
    CHECK(c.extension == ctd::ExtensionMode::symmetric);
    CHECK(c.alignment_exponent() == 4);
    CHECK(config_with(2, {1, 4}).alignment_exponent() == 5);
    CHECK_THROWS(config_with(2, {1}).validate());
    CHECK_THROWS(config_with(1, {7}).validate());
    CHECK_THROWS(config_with(0, {}).validate());
}

TEST_CASE("order-0 levels reproduce the pyramid") {
    const ImageGrid x = test::random_grid(32, 32, 1);
    const ContourletConfig c = config_with(3, {0, 0, 0});
    const auto coeffs = ctd::contourlet_forward(x, c);
    const auto dec = ctd::lp_analysis(x, 3, c.lp_filter, c.extension);
    CHECK(coeffs.lowpass == dec.lowpass);
    for (std::size_t k = 0; k < 3; ++k) {
        REQUIRE(coeffs.directional[k].subbands.size() == 1);
        CHECK(coeffs.directional[k].subbands[0] == dec.bandpass[k]);
    }
}

TEST_CASE("constant image has zero directional coefficients") {
    const auto coeffs = ctd::contourlet_forward(ImageGrid(64, 64, 77.0));
    for (const auto& level : coeffs.directional) {
        for (const auto& band : level.subbands) {
            CHECK(std::fabs(band.min()) <= 1e-9);
            CHECK(std::fabs(band.max()) <= 1e-9);
        }
    }
    CHECK(coeffs.lowpass.min() == doctest::Approx(77.0));
    CHECK(coeffs.lowpass.max() == doctest::Approx(77.0));
}

TEST_CASE("forward then inverse is the identity") {
    const ImageGrid x = test::random_grid(128, 128, 2);
    CHECK(ctd::max_abs_diff(ctd::contourlet_inverse(ctd::contourlet_forward(x)), x) <= 1e-9);
    const ImageGrid odd = test::random_grid(57, 43, 3);
    for (const auto& c : {config_with(2, {4, 3}), config_with(4, {2, 2, 1, 0})}) {
        const auto coeffs = ctd::contourlet_forward(odd, c);
        CHECK(ctd::max_abs_diff(ctd::contourlet_inverse(coeffs), odd) <= 1e-9);
    }
    ContourletConfig periodic = config_with(2, {3, 3});
    periodic.extension = ctd::ExtensionMode::periodic;
    periodic.lp_filter = ctd::LpFilter::cdf97();
    periodic.fan_filters = ctd::FanFilterPair::haar();
    CHECK(ctd::max_abs_diff(ctd::contourlet_inverse(ctd::contourlet_forward(odd, periodic)), odd) <= 1e-9);
}

TEST_CASE("coefficient count and determinism") {
    const ImageGrid x = test::random_grid(100, 60, 4);
    const auto a = ctd::contourlet_forward(x);
    const auto b = ctd::contourlet_forward(x);
    CHECK(a.pad.padded_width() == 112);
    CHECK(a.pad.padded_height() == 64);
    const std::size_t padded = 112 * 64;
    CHECK(a.directional_count() == padded + padded / 4 + padded / 16);
    CHECK(a.total_count() == a.directional_count() + padded / 64);
    CHECK(3 * a.total_count() <= 4 * padded);
    CHECK(a.lowpass == b.lowpass);
    for (std::size_t k = 0; k < a.directional.size(); ++k) {
        for (std::size_t i = 0; i < a.directional[k].subbands.size(); ++i) {
            CHECK(a.directional[k].subbands[i] == b.directional[k].subbands[i]);
        }
    }
}

TEST_CASE("map_coefficients") {
    const ImageGrid x = test::random_grid(64, 64, 5);
    const ContourletConfig config;
    const auto coeffs = ctd::contourlet_forward(x, config);

    const auto same = ctd::map_coefficients(coeffs, [](double v) { return v; }, true);
    CHECK(same.lowpass == coeffs.lowpass);
    CHECK(same.directional[0].subbands[3] == coeffs.directional[0].subbands[3]);

    const auto zeroed = ctd::map_coefficients(coeffs, [](double) { return 0.0; }, false);
    CHECK(zeroed.lowpass == coeffs.lowpass);
    for (const auto& level : zeroed.directional) {
        for (const auto& band : level.subbands) {
            CHECK(test::energy(band) == 0.0);
        }
    }
    const ImageGrid smooth = lowpass_only(x, config);
    CHECK(ctd::max_abs_diff(ctd::contourlet_inverse(zeroed), smooth) <= 1e-9);

    const auto all_zero = ctd::map_coefficients(coeffs, [](double) { return 0.0; }, true);
    CHECK(ctd::max_abs_diff(ctd::contourlet_inverse(all_zero), ImageGrid(64, 64)) == 0.0);

    // Doubling the detail coefficients gives 2x minus the lowpass-only image.
    const auto doubled = ctd::map_coefficients(coeffs, [](double v) { return 2.0 * v; }, false);
    const ImageGrid y = ctd::contourlet_inverse(doubled);
    double worst = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        worst = std::max(worst, std::fabs(y.pixels()[i] - (2.0 * x.pixels()[i] - smooth.pixels()[i])));
    }
    CHECK(worst <= 1e-9);
}

TEST_CASE("coefficient dump round trip and layout") {
    const ImageGrid x = test::random_grid(40, 24, 6);
    const auto coeffs = ctd::contourlet_forward(x, config_with(2, {2, 1}));
    std::stringstream buf;
    ctd::write_coefficients(buf, coeffs);
    const std::string bytes = buf.str();
    CHECK(bytes.substr(0, 8) == "CTDCOEF1");
    // magic, levels, 2 orders, extension, names, 4 pad dims, lowpass dims,
    // 4 + 2 subband dims, then every coefficient
    const std::size_t header = 8 + 4 + 8 + 4 + (4 + 4) + (4 + 6) + 32 + 16 + 6 * 16;
    CHECK(bytes.size() == header + 8 * coeffs.total_count());

    const auto back = ctd::read_coefficients(buf);
    CHECK(back.lowpass == coeffs.lowpass);
    CHECK(back.pad == coeffs.pad);
    CHECK(back.config.orders == coeffs.config.orders);
    for (std::size_t k = 0; k < 2; ++k) {
        for (std::size_t i = 0; i < coeffs.directional[k].subbands.size(); ++i) {
            CHECK(back.directional[k].subbands[i] == coeffs.directional[k].subbands[i]);
        }
    }
    CHECK(ctd::max_abs_diff(ctd::contourlet_inverse(back), x) <= 1e-9);

    std::stringstream junk("not a dump");
    CHECK_THROWS(ctd::read_coefficients(junk));
}

TEST_CASE("inverse rejects inconsistent structure") {
    auto coeffs = ctd::contourlet_forward(test::random_grid(32, 32, 7));
    coeffs.directional.pop_back();
    CHECK_THROWS(ctd::contourlet_inverse(coeffs));
    coeffs = ctd::contourlet_forward(test::random_grid(32, 32, 7));
    coeffs.lowpass = ImageGrid(2, 2);
    CHECK_THROWS_AS(ctd::contourlet_inverse(coeffs), ctd::DimensionError);
}
