#include <doctest.h>

#include <cmath>

#include "ctd/imageio.hpp"
#include "ctd/metrics.hpp"
#include "ctd/phantom.hpp"
#include "ctd/wavelet.hpp"
#include "helpers.hpp"

using ctd::ImageGrid;
using ctd::WaveletFilterPair;

namespace {

double coefficient_energy(const ctd::DwtCoeffs& c) {
    double e = test::energy(c.approximation);
    for (const auto& d : c.details) {
        e += test::energy(d.lh) + test::energy(d.hl) + test::energy(d.hh);
    }
    return e;
}

}  // namespace

TEST_CASE("filter families are orthonormal quadrature mirrors") {
    for (const char* name : {"haar", "db2", "db4"}) {
        const WaveletFilterPair f = WaveletFilterPair::by_name(name);
        double norm = 0.0;
        double dot = 0.0;
        for (std::size_t k = 0; k < f.lowpass.size(); ++k) {
            norm += f.lowpass[k] * f.lowpass[k];
            dot += f.lowpass[k] * f.highpass[k];
            CHECK(f.highpass[k] == (k % 2 == 0 ? 1 : -1) * f.lowpass[f.lowpass.size() - 1 - k]);
        }
        CHECK(std::fabs(std::sqrt(norm) - 1.0) <= 1e-12);
        CHECK(std::fabs(dot) <= 1e-12);
    }
    CHECK(WaveletFilterPair::by_name("db4").lowpass.size() == 8);
    CHECK_THROWS(WaveletFilterPair::by_name("sym8"));
    CHECK_THROWS(WaveletFilterPair::from_lowpass("bad", {0.5, 0.5}));
}

TEST_CASE("haar on a pair and on constants") {
    const auto haar = WaveletFilterPair::by_name("haar");
    const auto c = ctd::dwt2(ImageGrid(2, 2, std::vector<double>{3.0, 1.0, 3.0, 1.0}), 1, haar);
    // Rows: approx (3+1)/sqrt2, detail (3-1)/sqrt2; columns then combine equal rows.
    CHECK(c.approximation(0, 0) == doctest::Approx(4.0));
    CHECK(c.details[0].hl(0, 0) == doctest::Approx(2.0));
    CHECK(c.details[0].lh(0, 0) == doctest::Approx(0.0));

    const auto flat = ctd::dwt2(ImageGrid(32, 32, 50.0), 3, WaveletFilterPair::by_name("db4"));
    for (const auto& d : flat.details) {
        CHECK(test::energy(d.lh) + test::energy(d.hl) + test::energy(d.hh) <= 1e-20);
    }
}

TEST_CASE("4x4 haar matches a scalar oracle") {
    const ImageGrid x = test::random_grid(4, 4, 1);
    const auto c = ctd::dwt2(x, 1, WaveletFilterPair::by_name("haar"));
    for (std::size_t m = 0; m < 2; ++m) {
        for (std::size_t n = 0; n < 2; ++n) {
            const double a = x(2 * m, 2 * n);
            const double b = x(2 * m, 2 * n + 1);
            const double cc = x(2 * m + 1, 2 * n);
            const double d = x(2 * m + 1, 2 * n + 1);
            CHECK(std::fabs(c.approximation(m, n) - (a + b + cc + d) / 2.0) <= 1e-12);
            CHECK(std::fabs(c.details[0].lh(m, n) - (a + b - cc - d) / 2.0) <= 1e-12);
            CHECK(std::fabs(c.details[0].hl(m, n) - (a - b + cc - d) / 2.0) <= 1e-12);
            CHECK(std::fabs(c.details[0].hh(m, n) - (a - b - cc + d) / 2.0) <= 1e-12);
        }
    }
    CHECK(ctd::max_abs_diff(ctd::idwt2(c, WaveletFilterPair::by_name("haar")), x) <= 1e-12);
}

TEST_CASE("perfect reconstruction and Parseval") {
    for (const char* name : {"haar", "db2", "db4"}) {
        const auto f = WaveletFilterPair::by_name(name);
        const ImageGrid x = test::random_grid(64, 64, 2);
        const auto c = ctd::dwt2(x, 3, f);
        CHECK(c.levels() == 3);
        CHECK(c.approximation.width() == 8);
        CHECK(c.details[2].hh.width() == 8);
        CHECK(ctd::max_abs_diff(ctd::idwt2(c, f), x) <= 1e-10);
        CHECK(std::fabs(coefficient_energy(c) - test::energy(x)) <= 1e-8 * test::energy(x));
    }
    // Padding path.
    const auto f = WaveletFilterPair::by_name("db4");
    const ImageGrid odd = test::random_grid(37, 29, 3);
    const auto c = ctd::dwt2(odd, 2, f, ctd::ExtensionMode::symmetric);
    CHECK(c.pad.padded_width() == 40);
    CHECK(ctd::max_abs_diff(ctd::idwt2(c, f), odd) <= 1e-10);
}

TEST_CASE("zero details and constant approximation give a constant image") {
    const auto f = WaveletFilterPair::by_name("db4");
    auto c = ctd::dwt2(ImageGrid(32, 32), 2, f);
    c.approximation = ImageGrid(8, 8, 12.0);
    const ImageGrid y = ctd::idwt2(c, f);
    // Each orthonormal 2-D level scales the mean by 2.
    CHECK(std::fabs(y.min() - 3.0) <= 1e-10);
    CHECK(std::fabs(y.max() - 3.0) <= 1e-10);
}

TEST_CASE("shrinkage rules") {
    CHECK(ctd::soft_threshold(3.0, 1.0) == 2.0);
    CHECK(ctd::soft_threshold(-0.5, 1.0) == 0.0);
    CHECK(ctd::soft_threshold(-4.0, 1.0) == -3.0);
    CHECK(ctd::soft_threshold(1.0, 1.0) == 0.0);
    for (const double v : {-2.5, 0.0, 0.3, 7.0}) {
        CHECK(ctd::soft_threshold(v, 0.0) == v);
    }
    CHECK(ctd::universal_threshold(2.0, 1) == 0.0);
    CHECK(ctd::universal_threshold(2.0, 1024) == doctest::Approx(2.0 * std::sqrt(2.0 * std::log(1024.0))));
}

TEST_CASE("denoisers leave detail-free input alone") {
    const ImageGrid flat(64, 64, 90.0);
    ctd::WaveletDenoiseOptions opt;
    for (const auto& fn : {ctd::denoise_hard, ctd::denoise_soft, ctd::denoise_wiener}) {
        const auto [y, report] = fn(flat, opt);
        CHECK(ctd::max_abs_diff(y, flat) <= 1e-9);
        CHECK(report.noise.sigma_n_sq <= 1e-20);
    }
    opt.sigma_hint = 0.0;
    const ImageGrid x = test::random_grid(64, 64, 4);
    const auto [w, report] = ctd::denoise_wiener(x, opt);
    CHECK(ctd::max_abs_diff(w, x) <= 1e-9);
    CHECK(report.noise.source == ctd::NoiseSource::supplied);
    const auto [h, hr] = ctd::denoise_hard(x, opt);
    CHECK(ctd::max_abs_diff(h, x) <= 1e-9);
}

TEST_CASE("wiener gain is zero where the window is all zero") {
    // One nonzero detail coefficient far from the others: every window that
    // misses it has v = 0 and its coefficients stay 0.
    const auto f = WaveletFilterPair::by_name("haar");
    auto c = ctd::dwt2(ImageGrid(32, 32), 1, f);
    c.details[0].hh(2, 2) = 10.0;
    const ImageGrid x = ctd::idwt2(c, f);
    ctd::WaveletDenoiseOptions opt;
    opt.filters = f;
    opt.levels = 1;
    opt.sigma_hint = 1.0;
    const auto [y, report] = ctd::denoise_wiener(x, opt);
    const auto out = ctd::dwt2(y, 1, f);
    // v = 100 / 25 = 4 at the spike: gain (4 - 1) / 4.
    CHECK(out.details[0].hh(2, 2) == doctest::Approx(7.5));
    CHECK(test::energy(out.details[0].lh) <= 1e-20);
    CHECK(report.subbands[2].kept == 1);
    opt.window = 4;
    CHECK_THROWS(ctd::denoise_wiener(x, opt));
    opt.window = 1;
    CHECK_THROWS(ctd::denoise_wiener(x, opt));
}

TEST_CASE("hard thresholding is idempotent") {
    const ImageGrid noisy = ctd::add_awgn(ctd::make_phantom(64, 64), 20.0, 3);
    ctd::WaveletDenoiseOptions opt;
    opt.sigma_hint = 20.0;
    const auto [once, r1] = ctd::denoise_hard(noisy, opt);
    const auto [twice, r2] = ctd::denoise_hard(once, opt);
    CHECK(ctd::max_abs_diff(once, twice) <= 1e-9);
    for (const auto& s : r1.subbands) {
        CHECK(s.kept + s.zeroed == s.count);
    }
}

TEST_CASE("MAD estimate on pure noise") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const ImageGrid noise = ctd::add_awgn(ImageGrid(256, 256, 0.0), 20.0, seed);
        const auto c = ctd::dwt2(noise, 1, WaveletFilterPair::by_name("db4"));
        const double sigma = ctd::estimate_sigma_finest_hh(c);
        CHECK(sigma >= 17.0);
        CHECK(sigma <= 23.0);
    }
}

TEST_CASE("baselines improve PSNR on the phantom") {
    const ImageGrid clean = ctd::make_phantom();
    const ImageGrid noisy = ctd::add_awgn(clean, 25.0, 11);
    const double before = ctd::psnr(clean, noisy).psnr_db;
    for (const auto& fn : {ctd::denoise_hard, ctd::denoise_soft, ctd::denoise_wiener}) {
        const auto [y, report] = fn(noisy, {});
        CHECK(ctd::psnr(clean, y).psnr_db > before);
    }
}
