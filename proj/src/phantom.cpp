#include "ctd/phantom.hpp"

#include <algorithm>
#include <cmath>

namespace ctd {

namespace {

double ellipse(double u, double v, double cu, double cv, double au, double av) {
    const double du = (u - cu) / au;
    const double dv = (v - cv) / av;
    return du * du + dv * dv;
}

double phantom_value(double u, double v) {
    double value = 40.0 + 20.0 * u + 15.0 * v * v;
    const double head = ellipse(u, v, 0.0, 0.0, 0.82, 0.92);
    if (head < 1.0) {
        value += 70.0 + 40.0 * (1.0 - head);
        const double band = 0.45 * u + 0.8 * v;
        if (band > -0.12 && band < 0.06) {
            value += 45.0;
        }
    }
    const double lesion = ellipse(u, v, -0.32, 0.22, 0.18, 0.3);
    if (lesion < 1.0) {
        value -= 60.0;
    }
    const double bump = ellipse(u, v, 0.36, -0.3, 0.24, 0.14);
    if (bump < 1.0) {
        value += 30.0 + 50.0 * (1.0 - bump);
    }
    if (u > 0.55 && u < 0.65 && std::fabs(v) < 0.5) {
        value -= 35.0;
    }
    return std::floor(std::clamp(value, 0.0, 255.0) + 0.5);
}

}  // namespace

ImageGrid make_phantom(std::size_t width, std::size_t height) {
    ImageGrid grid(width, height);
    for (std::size_t r = 0; r < height; ++r) {
        const double v = (2.0 * static_cast<double>(r) + 1.0) / static_cast<double>(height) - 1.0;
        for (std::size_t c = 0; c < width; ++c) {
            const double u = (2.0 * static_cast<double>(c) + 1.0) / static_cast<double>(width) - 1.0;
            grid(r, c) = phantom_value(u, v);
        }
    }
    return grid;
}

}  // namespace ctd
