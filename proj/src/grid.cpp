#include "ctd/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ctd {

const char* to_string(ExtensionMode mode) {
    return mode == ExtensionMode::symmetric ? "symmetric" : "periodic";
}

ExtensionMode extension_mode_from_string(const std::string_view name) {
    if (name == "symmetric") {
        return ExtensionMode::symmetric;
    }
    if (name == "periodic") {
        return ExtensionMode::periodic;
    }
    throw std::invalid_argument("unknown extension mode '" + std::string(name) + "'");
}

namespace {

void check_dims(std::size_t width, std::size_t height) {
    if (width == 0 || height == 0) {
        throw DimensionError("image grid dimensions must be at least 1x1");
    }
}

}  // namespace

ImageGrid::ImageGrid(std::size_t width, std::size_t height) : ImageGrid(width, height, 0.0) {}

ImageGrid::ImageGrid(std::size_t width, std::size_t height, double fill)
    : width_(width), height_(height) {
    check_dims(width, height);
    if (!std::isfinite(fill)) {
        throw std::invalid_argument("image grid fill value must be finite");
    }
    pixels_.assign(width * height, fill);
}

ImageGrid::ImageGrid(std::size_t width, std::size_t height, std::vector<double> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
    check_dims(width, height);
    if (pixels_.size() != width * height) {
        throw DimensionError("pixel count " + std::to_string(pixels_.size()) + " does not match " +
                             std::to_string(width) + "x" + std::to_string(height));
    }
    if (!std::all_of(pixels_.begin(), pixels_.end(), [](double v) { return std::isfinite(v); })) {
        throw std::invalid_argument("image grid contains a non-finite value");
    }
}

double ImageGrid::min() const { return *std::min_element(pixels_.begin(), pixels_.end()); }

double ImageGrid::max() const { return *std::max_element(pixels_.begin(), pixels_.end()); }

double max_abs_diff(const ImageGrid& a, const ImageGrid& b) {
    if (!a.same_shape(b)) {
        throw DimensionError("max_abs_diff: grids differ in shape");
    }
    double worst = 0.0;
    const auto pa = a.pixels();
    const auto pb = b.pixels();
    for (std::size_t i = 0; i < pa.size(); ++i) {
        worst = std::max(worst, std::abs(pa[i] - pb[i]));
    }
    return worst;
}

}  // namespace ctd
