#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace ctd {

/// Boundary extension used when a filter reads past the edge of a grid.
///
/// `symmetric` is half-sample symmetric (x1 x0 | x0 x1 ...), `periodic`
/// wraps around.
enum class ExtensionMode { symmetric, periodic };

const char* to_string(ExtensionMode mode);
ExtensionMode extension_mode_from_string(const std::string_view name);

/// Maps a possibly out-of-range index onto [0, n) under `mode`.
inline std::ptrdiff_t extend_index(std::ptrdiff_t i, std::ptrdiff_t n, ExtensionMode mode) {
    if (i >= 0 && i < n) {
        return i;
    }
    if (mode == ExtensionMode::periodic) {
        const std::ptrdiff_t r = i % n;
        return r < 0 ? r + n : r;
    }
    const std::ptrdiff_t period = 2 * n;
    std::ptrdiff_t r = i % period;
    if (r < 0) {
        r += period;
    }
    return r < n ? r : period - 1 - r;
}

/// Dimension mismatch between grids or against a required lattice.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Row-major grid of real samples; carries both pixels and transform
/// coefficients.
///
/// Invariants: width >= 1, height >= 1, size() == width * height and every
/// sample finite. Constructors check all three; the mutable accessors exist
/// for building grids in place and do not re-check finiteness.
class ImageGrid {
public:
    ImageGrid(std::size_t width, std::size_t height);
    ImageGrid(std::size_t width, std::size_t height, double fill);
    ImageGrid(std::size_t width, std::size_t height, std::vector<double> pixels);

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t size() const noexcept { return pixels_.size(); }

    double operator()(std::size_t row, std::size_t col) const { return pixels_[row * width_ + col]; }
    double& operator()(std::size_t row, std::size_t col) { return pixels_[row * width_ + col]; }

    std::span<const double> pixels() const noexcept { return pixels_; }
    std::span<double> pixels() noexcept { return pixels_; }

    bool same_shape(const ImageGrid& other) const noexcept {
        return width_ == other.width_ && height_ == other.height_;
    }

    double min() const;
    double max() const;

    friend bool operator==(const ImageGrid&, const ImageGrid&) = default;

private:
    std::size_t width_;
    std::size_t height_;
    std::vector<double> pixels_;
};

/// Largest absolute elementwise difference; throws DimensionError on shape mismatch.
double max_abs_diff(const ImageGrid& a, const ImageGrid& b);

/// Bookkeeping needed to undo pad_for_levels.
struct PadRecord {
    std::size_t original_width = 0;
    std::size_t original_height = 0;
    std::size_t pad_right = 0;
    std::size_t pad_bottom = 0;
    ExtensionMode extension_mode = ExtensionMode::symmetric;

    std::size_t padded_width() const noexcept { return original_width + pad_right; }
    std::size_t padded_height() const noexcept { return original_height + pad_bottom; }

    static PadRecord identity(std::size_t width, std::size_t height) {
        return PadRecord{width, height, 0, 0, ExtensionMode::periodic};
    }

    friend bool operator==(const PadRecord&, const PadRecord&) = default;
};

}  // namespace ctd
