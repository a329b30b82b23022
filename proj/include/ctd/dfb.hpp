#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ctd/grid.hpp"

namespace ctd {

inline constexpr unsigned kMaxDfbOrder = 6;

enum class FanStructure { ladder };

/// Two-channel quincunx fan filter bank realised as a two-step ladder
/// (predict, update) with a separable half-sample interpolation kernel.
///
/// The equivalent 2-D filters h0/h1 (analysis, correlation form) and g0/g1
/// (synthesis, impulse responses) are derived from the ladder and stored on
/// a square grid whose centre sample is tap (0, 0).
struct FanFilterPair {
    std::string name;
    /// Symmetric about the half-sample point; even length, or a single tap.
    std::vector<double> ladder_kernel;
    FanStructure structure = FanStructure::ladder;
    ImageGrid h0;
    ImageGrid h1;
    ImageGrid g0;
    ImageGrid g1;

    /// Phoong-Kim-Vaidyanathan-Ansari ladder kernels: "pkva6", "pkva8", "pkva12",
    /// plus the single-tap "haar" kernel.
    static FanFilterPair by_name(const std::string& name);
    static FanFilterPair pkva12() { return by_name("pkva12"); }
    static FanFilterPair haar() { return by_name("haar"); }

    std::size_t filter_center() const noexcept { return h0.width() / 2; }
};

/// Runs one analysis/synthesis round trip of the fan bank on `grid` through
/// the convolution route (h0, h1 with quincunx decimation, then g0, g1) and
/// returns the largest reconstruction error. Needs even dimensions.
double fan_self_test(const FanFilterPair& filters, const ImageGrid& grid);

/// One fan-bank analysis through the equivalent filters, periodic boundary.
/// Lowpass samples sit on the (i + j) even coset, highpass on the odd coset;
/// the result stores both in place in a grid of the input size.
ImageGrid fan_analysis_by_convolution(const FanFilterPair& filters, const ImageGrid& grid);

/// The ladder route of the same single-level analysis (order-1 DFB without
/// repacking); used to cross-check fan_analysis_by_convolution.
ImageGrid fan_analysis_by_ladder(const FanFilterPair& filters, const ImageGrid& grid);

/// 2^order directional subbands of one grid.
///
/// Subband k is the leaf reached by the binary path of k through the tree,
/// most significant bit = first split, 0 = lowpass-side child. Each subband
/// is a coset of a sampling lattice of determinant 2^order; its samples are
/// stored in original raster order, one stored row per occupied source row,
/// so the stored shape is (source_height / p) rows by
/// (source_width * p / 2^order) columns where p is the row period of the
/// lattice (see dfb_subband_dims).
struct DirectionalSubbands {
    unsigned order = 0;
    std::vector<ImageGrid> subbands;
    std::size_t source_width = 0;
    std::size_t source_height = 0;

    std::size_t sample_count() const noexcept;
};

/// (width, height) of subband `index` for an order-`order` bank on a
/// width x height grid.
std::pair<std::size_t, std::size_t> dfb_subband_dims(std::size_t width, std::size_t height, unsigned order,
                                                     std::size_t index);

/// Order-`order` directional filter bank, periodic boundary. Grid
/// dimensions must be divisible by 2^order; order <= 6.
DirectionalSubbands dfb_analysis(const ImageGrid& grid, unsigned order, const FanFilterPair& filters);

ImageGrid dfb_synthesis(const DirectionalSubbands& subbands, const FanFilterPair& filters);

/// Integer resampling matrices. R0..R3 are the unimodular shears
/// R0 = [1 1; 0 1], R1 = [1 -1; 0 1], R2 = [1 0; 1 1], R3 = [1 0; -1 1] acting
/// on (row, col) indices: forward y[n] = x[R n] with periodic wrap.
/// Q0 and Q1 select the quincunx coset (row + col) even:
///   Q0 forward: y[m][j] = x[(2m + j) mod H][j]   -> (H/2) x W
///   Q1 forward: y[i][m] = x[i][(2m + i) mod W]   -> H x (W/2)
/// and their inverses scatter back, writing zeros on the odd coset.
enum class LatticeMatrix { Q0, Q1, R0, R1, R2, R3 };
enum class ResampleDirection { forward, inverse };

ImageGrid quincunx_resample(const ImageGrid& grid, LatticeMatrix matrix, ResampleDirection direction);

}  // namespace ctd
