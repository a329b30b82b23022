#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "ctd/dfb.hpp"
#include "ctd/grid.hpp"
#include "ctd/pyramid.hpp"

namespace ctd {

struct ContourletConfig {
    unsigned levels = 3;
    /// DFB order per pyramid level, index 0 = finest.
    std::vector<unsigned> orders{3, 2, 2};
    LpFilter lp_filter = LpFilter::burt_adelson();
    FanFilterPair fan_filters = FanFilterPair::pkva12();
    ExtensionMode extension = ExtensionMode::symmetric;

    /// Throws std::invalid_argument unless levels >= 1, one order per level
    /// and every order <= kMaxDfbOrder.
    void validate() const;

    /// Padded dimensions must be multiples of 2^alignment_exponent():
    /// max(levels, max_k(k + orders[k])).
    unsigned alignment_exponent() const;
};

/// Coefficients of the contourlet transform.
///
/// Traversal order, used for serialization and for noise estimation:
/// directional[0] (finest) first, subbands in tree index order, row-major
/// within a subband; the lowpass comes last.
struct ContourletCoeffs {
    ImageGrid lowpass;
    std::vector<DirectionalSubbands> directional;
    ContourletConfig config;
    PadRecord pad;

    std::size_t directional_count() const noexcept;
    std::size_t total_count() const noexcept { return directional_count() + lowpass.size(); }
};

ContourletCoeffs contourlet_forward(const ImageGrid& grid, const ContourletConfig& config = {});

ImageGrid contourlet_inverse(const ContourletCoeffs& coeffs);

/// Applies `f` to every directional coefficient, and to the lowpass too when
/// `include_lowpass` is set.
ContourletCoeffs map_coefficients(const ContourletCoeffs& coeffs, const std::function<double(double)>& f,
                                  bool include_lowpass);

/// Flat little-endian dump:
///   "CTDCOEF1"                                  8 bytes
///   levels, orders[levels], extension (0 symmetric, 1 periodic)   u32 each
///   lp filter name, fan filter name             u32 length + bytes
///   original w, h, padded w, h                  u64 each
///   lowpass w, h, then per level per subband w, h   u64 each
///   coefficients in traversal order             f64 each
void write_coefficients(std::ostream& out, const ContourletCoeffs& coeffs);
ContourletCoeffs read_coefficients(std::istream& in);

}  // namespace ctd
