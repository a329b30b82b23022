#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>

#include "ctd/grid.hpp"

namespace ctd {

/// Named failure classes for image loading and saving.
enum class ImageIoErrorKind {
    unreadable_file,
    unsupported_format,
    unsupported_bit_depth,
    corrupt_header,
    truncated_data,
    unwritable_path,
};

const char* to_string(ImageIoErrorKind kind);

class ImageIoError : public std::runtime_error {
public:
    ImageIoError(ImageIoErrorKind kind, const std::string& message);

    ImageIoErrorKind kind() const noexcept { return kind_; }

private:
    ImageIoErrorKind kind_;
};

/// Loads an 8-bit grayscale image. The format is chosen by content: binary
/// PGM (P5, maxval 255) or PNG. RGB PNGs are converted with
/// Y = 0.299 R + 0.587 G + 0.114 B rounded half away from zero; alpha is dropped.
ImageGrid load_image(const std::filesystem::path& path);

/// Saves as P5 PGM unless the extension is ".png". Values are clamped to
/// [0, 255] and rounded half away from zero.
void save_image(const ImageGrid& grid, const std::filesystem::path& path);

/// The byte a sample is stored as: clamp to [0, 255], round half away from zero.
std::uint8_t quantize_sample(double value);

/// Applies quantize_sample to every sample (what a saved file would hold).
ImageGrid quantize(const ImageGrid& grid);

/// Adds zero-mean Gaussian noise with standard deviation `sigma`.
///
/// The generator is std::mt19937_64 seeded with `seed`; each 53-bit uniform
/// u = (draw >> 11) * 2^-53 feeds the Box-Muller transform
/// r = sqrt(-2 ln(1 - u1)), samples r cos(2 pi u2) then r sin(2 pi u2),
/// assigned in raster order. The output is not clamped.
ImageGrid add_awgn(const ImageGrid& grid, double sigma, std::uint64_t seed);

/// Grows the grid on the right and bottom to the smallest multiples of
/// 2^levels, filling new samples by `mode`.
std::pair<ImageGrid, PadRecord> pad_for_levels(const ImageGrid& grid, unsigned levels,
                                               ExtensionMode mode = ExtensionMode::symmetric);

/// Returns the top-left original region described by `rec`.
ImageGrid crop_to_record(const ImageGrid& grid, const PadRecord& rec);

}  // namespace ctd
