#include "ctd/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "ctd/imageio.hpp"

namespace ctd {

double mse(const ImageGrid& a, const ImageGrid& b) {
    if (!a.same_shape(b)) {
        throw DimensionError("mse: " + std::to_string(a.width()) + "x" + std::to_string(a.height()) + " vs " +
                             std::to_string(b.width()) + "x" + std::to_string(b.height()));
    }
    const auto pa = a.pixels();
    const auto pb = b.pixels();
    double sum = 0.0;
    for (std::size_t i = 0; i < pa.size(); ++i) {
        const double d = pa[i] - pb[i];
        sum += d * d;
    }
    return sum / static_cast<double>(pa.size());
}

double psnr_from_mse(double mse_value) {
    if (mse_value < 0.0 || std::isnan(mse_value)) {
        throw std::invalid_argument("psnr needs a nonnegative mse");
    }
    if (mse_value == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return 10.0 * std::log10(kPeakValue * kPeakValue / mse_value);
}

QualityScore psnr(const ImageGrid& a, const ImageGrid& b) {
    const double m = mse(a, b);
    return QualityScore{m, psnr_from_mse(m)};
}

QualityScore psnr_quantized(const ImageGrid& reference, const ImageGrid& test) {
    return psnr(reference, quantize(test));
}

std::string format_psnr(double psnr_db, int decimals) {
    if (std::isinf(psnr_db)) {
        return "inf";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, psnr_db);
    return buf;
}

}  // namespace ctd
