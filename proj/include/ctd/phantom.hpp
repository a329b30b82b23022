#pragma once

#include <cstddef>

#include "ctd/grid.hpp"

namespace ctd {

/// Piecewise-smooth synthetic test image with integer values in [0, 255].
///
/// With u = (2c + 1) / w - 1 and v = (2r + 1) / h - 1 (both in (-1, 1)):
///   base          40 + 20 u + 15 v^2
///   head          (u / 0.82)^2 + (v / 0.92)^2 < 1          +70 + 40 (1 - q)
///   tilted band   -0.12 < 0.45 u + 0.8 v < 0.06, inside head  +45
///   dark lesion   ((u + 0.32) / 0.18)^2 + ((v - 0.22) / 0.3)^2 < 1   -60
///   bright bump   ((u - 0.36) / 0.24)^2 + ((v + 0.3) / 0.14)^2 < 1   +30 + 50 (1 - q)
///   vertical bar  0.55 < u < 0.65, |v| < 0.5                           -35
/// where q is the left-hand side of the shape's own ellipse test. Values are
/// clamped to [0, 255] and rounded half up. tools/make_phantom.py computes
/// the same image independently.
ImageGrid make_phantom(std::size_t width = 256, std::size_t height = 256);

}  // namespace ctd
