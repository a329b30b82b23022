#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "ctd/grid.hpp"

namespace test {

inline ctd::ImageGrid random_grid(std::size_t w, std::size_t h, std::uint64_t seed, double lo = 0.0,
                                  double hi = 255.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    ctd::ImageGrid g(w, h);
    for (double& v : g.pixels()) {
        v = dist(rng);
    }
    return g;
}

inline double energy(const ctd::ImageGrid& g) {
    double e = 0.0;
    for (const double v : g.pixels()) {
        e += v * v;
    }
    return e;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("ctd_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace test
