#include "ctd/imageio.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numbers>
#include <random>
#include <vector>

namespace ctd {

const char* to_string(ImageIoErrorKind kind) {
    switch (kind) {
        case ImageIoErrorKind::unreadable_file: return "unreadable_file";
        case ImageIoErrorKind::unsupported_format: return "unsupported_format";
        case ImageIoErrorKind::unsupported_bit_depth: return "unsupported_bit_depth";
        case ImageIoErrorKind::corrupt_header: return "corrupt_header";
        case ImageIoErrorKind::truncated_data: return "truncated_data";
        case ImageIoErrorKind::unwritable_path: return "unwritable_path";
    }
    return "unknown";
}

ImageIoError::ImageIoError(ImageIoErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

namespace {

constexpr unsigned char kPngSignature[8] = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};

bool has_png_extension(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext == ".png";
}

std::vector<unsigned char> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ImageIoError(ImageIoErrorKind::unreadable_file, "cannot open " + path.string());
    }
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) {
        throw ImageIoError(ImageIoErrorKind::unreadable_file, "read failed for " + path.string());
    }
    return bytes;
}

// Parses one whitespace-delimited header token, skipping '#' comments.
class PgmHeaderReader {
public:
    explicit PgmHeaderReader(const std::vector<unsigned char>& bytes) : bytes_(bytes) {}

    unsigned long next_number(const char* what) {
        skip_space_and_comments();
        std::size_t start = pos_;
        unsigned long value = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            value = value * 10 + static_cast<unsigned long>(bytes_[pos_] - '0');
            if (value > 1'000'000'000UL) {
                throw ImageIoError(ImageIoErrorKind::corrupt_header, std::string(what) + " is out of range");
            }
            ++pos_;
        }
        if (pos_ == start) {
            throw ImageIoError(ImageIoErrorKind::corrupt_header, std::string("missing ") + what);
        }
        return value;
    }

    // Exactly one whitespace byte separates maxval from the raster.
    std::size_t raster_offset() {
        if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
            throw ImageIoError(ImageIoErrorKind::corrupt_header, "no whitespace after maxval");
        }
        return pos_ + 1;
    }

private:
    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            if (std::isspace(bytes_[pos_])) {
                ++pos_;
            } else if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') {
                    ++pos_;
                }
            } else {
                break;
            }
        }
    }

    const std::vector<unsigned char>& bytes_;
    std::size_t pos_ = 2;
};

ImageGrid decode_pgm(const std::vector<unsigned char>& bytes) {
    PgmHeaderReader reader(bytes);
    const auto width = reader.next_number("width");
    const auto height = reader.next_number("height");
    const auto maxval = reader.next_number("maxval");
    if (width == 0 || height == 0) {
        throw ImageIoError(ImageIoErrorKind::corrupt_header, "zero image dimension");
    }
    if (maxval == 0 || maxval > 65535) {
        throw ImageIoError(ImageIoErrorKind::corrupt_header, "invalid maxval " + std::to_string(maxval));
    }
    if (maxval != 255) {
        throw ImageIoError(ImageIoErrorKind::unsupported_bit_depth,
                           "only maxval 255 is supported, got " + std::to_string(maxval));
    }
    const std::size_t offset = reader.raster_offset();
    const std::size_t count = width * height;
    if (bytes.size() < offset + count) {
        throw ImageIoError(ImageIoErrorKind::truncated_data, "expected " + std::to_string(count) +
                                                                 " raster bytes, found " +
                                                                 std::to_string(bytes.size() - std::min(offset, bytes.size())));
    }
    std::vector<double> pixels(count);
    for (std::size_t i = 0; i < count; ++i) {
        pixels[i] = bytes[offset + i];
    }
    return ImageGrid(width, height, std::move(pixels));
}

double luma(unsigned char r, unsigned char g, unsigned char b) {
    return std::round(0.299 * r + 0.587 * g + 0.114 * b);
}

ImageGrid decode_png(const std::vector<unsigned char>& bytes) {
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
        throw ImageIoError(ImageIoErrorKind::corrupt_header, std::string("png: ") + image.message);
    }
    if (image.format & PNG_FORMAT_FLAG_LINEAR) {
        png_image_free(&image);
        throw ImageIoError(ImageIoErrorKind::unsupported_bit_depth, "16-bit PNG is not supported");
    }
    const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
    const bool alpha = (image.format & PNG_FORMAT_FLAG_ALPHA) != 0;
    if (color) {
        image.format = alpha ? PNG_FORMAT_RGBA : PNG_FORMAT_RGB;
    } else {
        image.format = alpha ? PNG_FORMAT_GA : PNG_FORMAT_GRAY;
    }
    const std::size_t channels = PNG_IMAGE_SAMPLE_CHANNELS(image.format);
    std::vector<unsigned char> raster(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, raster.data(), 0, nullptr)) {
        const std::string message = image.message;
        png_image_free(&image);
        throw ImageIoError(ImageIoErrorKind::truncated_data, "png: " + message);
    }
    const std::size_t count = static_cast<std::size_t>(image.width) * image.height;
    std::vector<double> pixels(count);
    for (std::size_t i = 0; i < count; ++i) {
        const unsigned char* px = &raster[i * channels];
        pixels[i] = color ? luma(px[0], px[1], px[2]) : px[0];
    }
    return ImageGrid(image.width, image.height, std::move(pixels));
}

std::vector<unsigned char> quantized_bytes(const ImageGrid& grid) {
    std::vector<unsigned char> out(grid.size());
    std::transform(grid.pixels().begin(), grid.pixels().end(), out.begin(), quantize_sample);
    return out;
}

}  // namespace

ImageGrid load_image(const std::filesystem::path& path) {
    const auto bytes = read_file(path);
    if (bytes.size() >= 8 && std::equal(std::begin(kPngSignature), std::end(kPngSignature), bytes.begin())) {
        return decode_png(bytes);
    }
    if (bytes.size() >= 2 && bytes[0] == 'P') {
        if (bytes[1] == '5') {
            return decode_pgm(bytes);
        }
        if (bytes[1] >= '1' && bytes[1] <= '7') {
            throw ImageIoError(ImageIoErrorKind::unsupported_format,
                               std::string("netpbm variant P") + static_cast<char>(bytes[1]) + " is not supported");
        }
    }
    throw ImageIoError(ImageIoErrorKind::unsupported_format, path.string() + " is neither binary PGM nor PNG");
}

void save_image(const ImageGrid& grid, const std::filesystem::path& path) {
    const auto bytes = quantized_bytes(grid);
    if (has_png_extension(path)) {
        png_image image;
        std::memset(&image, 0, sizeof(image));
        image.version = PNG_IMAGE_VERSION;
        image.width = static_cast<png_uint_32>(grid.width());
        image.height = static_cast<png_uint_32>(grid.height());
        image.format = PNG_FORMAT_GRAY;
        if (!png_image_write_to_file(&image, path.string().c_str(), 0, bytes.data(), 0, nullptr)) {
            throw ImageIoError(ImageIoErrorKind::unwritable_path, path.string() + ": " + image.message);
        }
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw ImageIoError(ImageIoErrorKind::unwritable_path, "cannot open " + path.string() + " for writing");
    }
    out << "P5\n" << grid.width() << ' ' << grid.height() << "\n255\n";
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw ImageIoError(ImageIoErrorKind::unwritable_path, "write failed for " + path.string());
    }
}

std::uint8_t quantize_sample(double value) {
    const double clamped = std::clamp(value, 0.0, 255.0);
    // std::round rounds halfway cases away from zero.
    return static_cast<std::uint8_t>(std::round(clamped));
}

ImageGrid quantize(const ImageGrid& grid) {
    ImageGrid out(grid.width(), grid.height());
    std::transform(grid.pixels().begin(), grid.pixels().end(), out.pixels().begin(),
                   [](double v) { return static_cast<double>(quantize_sample(v)); });
    return out;
}

ImageGrid add_awgn(const ImageGrid& grid, double sigma, std::uint64_t seed) {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        throw std::invalid_argument("noise sigma must be finite and non-negative");
    }
    ImageGrid out = grid;
    if (sigma == 0.0) {
        return out;
    }
    std::mt19937_64 engine(seed);
    const auto uniform = [&engine] { return static_cast<double>(engine() >> 11) * 0x1.0p-53; };
    auto px = out.pixels();
    for (std::size_t i = 0; i < px.size(); i += 2) {
        const double u1 = uniform();
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(1.0 - u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        px[i] += sigma * radius * std::cos(angle);
        if (i + 1 < px.size()) {
            px[i + 1] += sigma * radius * std::sin(angle);
        }
    }
    return out;
}

std::pair<ImageGrid, PadRecord> pad_for_levels(const ImageGrid& grid, unsigned levels, ExtensionMode mode) {
    if (levels >= 31) {
        throw std::invalid_argument("pad_for_levels: level count too large");
    }
    const std::size_t block = std::size_t{1} << levels;
    const auto round_up = [block](std::size_t n) { return (n + block - 1) / block * block; };
    PadRecord rec;
    rec.original_width = grid.width();
    rec.original_height = grid.height();
    rec.pad_right = round_up(grid.width()) - grid.width();
    rec.pad_bottom = round_up(grid.height()) - grid.height();
    rec.extension_mode = mode;
    if (rec.pad_right == 0 && rec.pad_bottom == 0) {
        return {grid, rec};
    }
    const auto w = static_cast<std::ptrdiff_t>(grid.width());
    const auto h = static_cast<std::ptrdiff_t>(grid.height());
    ImageGrid out(rec.padded_width(), rec.padded_height());
    for (std::size_t r = 0; r < out.height(); ++r) {
        const auto src_r = static_cast<std::size_t>(extend_index(static_cast<std::ptrdiff_t>(r), h, mode));
        for (std::size_t c = 0; c < out.width(); ++c) {
            const auto src_c = static_cast<std::size_t>(extend_index(static_cast<std::ptrdiff_t>(c), w, mode));
            out(r, c) = grid(src_r, src_c);
        }
    }
    return {std::move(out), rec};
}

ImageGrid crop_to_record(const ImageGrid& grid, const PadRecord& rec) {
    if (grid.width() != rec.padded_width() || grid.height() != rec.padded_height()) {
        throw DimensionError("crop_to_record: grid is " + std::to_string(grid.width()) + "x" +
                             std::to_string(grid.height()) + ", record expects " +
                             std::to_string(rec.padded_width()) + "x" + std::to_string(rec.padded_height()));
    }
    if (rec.pad_right == 0 && rec.pad_bottom == 0) {
        return grid;
    }
    ImageGrid out(rec.original_width, rec.original_height);
    for (std::size_t r = 0; r < out.height(); ++r) {
        for (std::size_t c = 0; c < out.width(); ++c) {
            out(r, c) = grid(r, c);
        }
    }
    return out;
}

}  // namespace ctd
