#include "ctd/dfb.hpp"

#include <array>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <stdexcept>
#include <tuple>

namespace ctd {

namespace {

// 2x2 integer matrix [a b; c d]; columns are lattice basis vectors in
// (row, col) coordinates.
struct Mat2 {
    long a, b, c, d;

    long det() const { return a * d - b * c; }
    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
};

struct Vec2 {
    long r, c;
};

Vec2 apply(const Mat2& m, Vec2 v) { return {m.a * v.r + m.b * v.c, m.c * v.r + m.d * v.c}; }

constexpr Mat2 kIdentity{1, 0, 0, 1};
constexpr Mat2 kQuincunx{1, -1, 1, 1};
constexpr Mat2 kR0{1, 1, 0, 1};
constexpr Mat2 kR1{1, -1, 0, 1};
constexpr Mat2 kR2{1, 0, 1, 1};
constexpr Mat2 kR3{1, 0, -1, 1};

// Shear applied before the fan bank at tree depth >= 2, indexed by the node's
// channel index mod 4. This choice makes each node split its parent's wedge
// at the midpoint slope.
constexpr std::array<Mat2, 4> kDeepShear{kR3, kR2, kR1, kR0};

// True when p lies in origin + basis * Z^2 on the H x W torus. Valid only
// when (H, 0) and (0, W) are lattice vectors, which holds whenever
// 2^order divides both dimensions.
bool on_lattice(Vec2 p, Vec2 origin, const Mat2& basis) {
    const long det = std::labs(basis.det());
    const long dr = p.r - origin.r;
    const long dc = p.c - origin.c;
    const long n0 = basis.d * dr - basis.b * dc;
    const long n1 = -basis.c * dr + basis.a * dc;
    return n0 % det == 0 && n1 % det == 0;
}

struct Offset {
    std::size_t dr;
    std::size_t dc;
};

struct Torus {
    std::size_t height;
    std::size_t width;

    Offset reduce(Vec2 v) const {
        const auto h = static_cast<long>(height);
        const auto w = static_cast<long>(width);
        return {static_cast<std::size_t>(((v.r % h) + h) % h), static_cast<std::size_t>(((v.c % w) + w) % w)};
    }

    std::size_t shift(std::size_t idx, Offset off) const {
        std::size_t r = idx / width + off.dr;
        std::size_t c = idx % width + off.dc;
        if (r >= height) {
            r -= height;
        }
        if (c >= width) {
            c -= width;
        }
        return r * width + c;
    }
};

struct LadderTaps {
    std::vector<long> position;  // tap offset a
    std::vector<double> weight;  // kernel value times (-1)^a
};

LadderTaps modulated_taps(const std::vector<double>& kernel) {
    LadderTaps taps;
    const long len = static_cast<long>(kernel.size());
    const long first = len == 1 ? 0 : -(len / 2 - 1);
    for (long i = 0; i < len; ++i) {
        const long a = first + i;
        taps.position.push_back(a);
        taps.weight.push_back((a % 2 == 0 ? 1.0 : -1.0) * kernel[static_cast<std::size_t>(i)]);
    }
    return taps;
}

// One fan-bank node. Samples of the channel are origin + basis * n; the
// even child takes n0 + n1 even. With e1 = (1, 0), u = (1, 1), v = (1, -1)
// in lattice coordinates the ladder is
//   d = x_odd - sum_ab w_a w_b x(c - e1 + a u + b v)
//   s = x_even + 1/2 sum_ab w_a w_b d(e + e1 - a u - b v)
// followed by s *= sqrt 2, d /= sqrt 2. Each double sum is applied as two
// one-dimensional passes.
struct Node {
    std::vector<std::uint32_t> even;
    std::vector<std::uint32_t> odd;
    std::vector<Offset> predict_v;
    std::vector<Offset> predict_u;
    std::vector<Offset> update_v;
    std::vector<Offset> update_u;
};

struct Channel {
    Mat2 basis;
    Vec2 origin;
    std::vector<std::uint32_t> positions;
};

void gather(const Torus& torus, const std::vector<double>& src, std::vector<double>& dst,
            const std::vector<std::uint32_t>& positions, const std::vector<Offset>& offsets,
            const std::vector<double>& weights) {
    for (const std::uint32_t p : positions) {
        double acc = 0.0;
        for (std::size_t t = 0; t < offsets.size(); ++t) {
            acc += weights[t] * src[torus.shift(p, offsets[t])];
        }
        dst[p] = acc;
    }
}

class DfbPlan {
public:
    DfbPlan(std::size_t height, std::size_t width, unsigned order, const std::vector<double>& kernel)
        : torus_{height, width}, taps_(modulated_taps(kernel)) {
        Channel root{kIdentity, {0, 0}, {}};
        root.positions.resize(height * width);
        for (std::size_t i = 0; i < root.positions.size(); ++i) {
            root.positions[i] = static_cast<std::uint32_t>(i);
        }
        std::vector<Channel> channels;
        channels.push_back(std::move(root));
        for (unsigned depth = 0; depth < order; ++depth) {
            std::vector<Node> nodes;
            std::vector<Channel> next;
            for (std::size_t k = 0; k < channels.size(); ++k) {
                const Mat2 pre = depth >= 2 ? kDeepShear[k % 4] : kIdentity;
                auto [node, even, odd] = split(channels[k], channels[k].basis * pre);
                nodes.push_back(std::move(node));
                next.push_back(std::move(even));
                next.push_back(std::move(odd));
            }
            levels_.push_back(std::move(nodes));
            channels = std::move(next);
        }
        leaves_ = std::move(channels);
    }

    void analyse(std::vector<double>& buf) const {
        std::vector<double> tmp(buf.size());
        std::vector<double> tmp2(buf.size());
        for (const auto& level : levels_) {
            for (const auto& node : level) {
                gather(torus_, buf, tmp, node.even, node.predict_v, taps_.weight);
                gather(torus_, tmp, tmp2, node.odd, node.predict_u, taps_.weight);
                for (const auto c : node.odd) {
                    buf[c] -= tmp2[c];
                }
                gather(torus_, buf, tmp, node.odd, node.update_v, taps_.weight);
                gather(torus_, tmp, tmp2, node.even, node.update_u, taps_.weight);
                for (const auto e : node.even) {
                    buf[e] = (buf[e] + 0.5 * tmp2[e]) * std::numbers::sqrt2;
                }
                for (const auto c : node.odd) {
                    buf[c] /= std::numbers::sqrt2;
                }
            }
        }
    }

    void synthesise(std::vector<double>& buf) const {
        std::vector<double> tmp(buf.size());
        std::vector<double> tmp2(buf.size());
        for (auto level = levels_.rbegin(); level != levels_.rend(); ++level) {
            for (const auto& node : *level) {
                for (const auto c : node.odd) {
                    buf[c] *= std::numbers::sqrt2;
                }
                for (const auto e : node.even) {
                    buf[e] /= std::numbers::sqrt2;
                }
                gather(torus_, buf, tmp, node.odd, node.update_v, taps_.weight);
                gather(torus_, tmp, tmp2, node.even, node.update_u, taps_.weight);
                for (const auto e : node.even) {
                    buf[e] -= 0.5 * tmp2[e];
                }
                gather(torus_, buf, tmp, node.even, node.predict_v, taps_.weight);
                gather(torus_, tmp, tmp2, node.odd, node.predict_u, taps_.weight);
                for (const auto c : node.odd) {
                    buf[c] += tmp2[c];
                }
            }
        }
    }

    const std::vector<Channel>& leaves() const noexcept { return leaves_; }

    std::pair<std::size_t, std::size_t> leaf_dims(std::size_t k) const {
        const auto& pos = leaves_[k].positions;
        std::size_t rows = 0;
        std::size_t last_row = static_cast<std::size_t>(-1);
        for (const auto p : pos) {
            const std::size_t r = p / torus_.width;
            if (r != last_row) {
                ++rows;
                last_row = r;
            }
        }
        return {pos.size() / rows, rows};
    }

private:
    std::tuple<Node, Channel, Channel> split(const Channel& parent, const Mat2& basis) const {
        const Mat2 child_basis = basis * kQuincunx;
        const Vec2 even_origin = parent.origin;
        const Vec2 step = apply(basis, {1, 0});
        const Vec2 odd_origin{parent.origin.r + step.r, parent.origin.c + step.c};

        Node node;
        Channel even{child_basis, even_origin, {}};
        Channel odd{child_basis, odd_origin, {}};
        for (const auto p : parent.positions) {
            const Vec2 at{static_cast<long>(p / torus_.width), static_cast<long>(p % torus_.width)};
            if (on_lattice(at, even_origin, child_basis)) {
                node.even.push_back(p);
            } else {
                node.odd.push_back(p);
            }
        }
        even.positions = node.even;
        odd.positions = node.odd;

        for (const long t : taps_.position) {
            node.predict_v.push_back(torus_.reduce(apply(basis, {t, -t})));
            node.predict_u.push_back(torus_.reduce(apply(basis, {t - 1, t})));
            node.update_v.push_back(torus_.reduce(apply(basis, {-t, t})));
            node.update_u.push_back(torus_.reduce(apply(basis, {1 - t, -t})));
        }
        return {std::move(node), std::move(even), std::move(odd)};
    }

    Torus torus_;
    LadderTaps taps_;
    std::vector<std::vector<Node>> levels_;
    std::vector<Channel> leaves_;
};

void check_dfb_input(std::size_t width, std::size_t height, unsigned order) {
    if (order > kMaxDfbOrder) {
        throw std::invalid_argument("DFB order " + std::to_string(order) + " exceeds the maximum of " +
                                    std::to_string(kMaxDfbOrder));
    }
    const std::size_t block = std::size_t{1} << order;
    if (width % block != 0 || height % block != 0) {
        throw DimensionError("DFB order " + std::to_string(order) + " needs dimensions divisible by " +
                             std::to_string(block) + ", got " + std::to_string(width) + "x" +
                             std::to_string(height));
    }
    if (width * height > 0xFFFFFFFFULL) {
        throw DimensionError("grid too large for the directional filter bank");
    }
}

// Derives h0/h1 from the ladder weights directly and g0/g1 by running the
// ladder synthesis on impulses.
void fill_equivalent_filters(FanFilterPair& pair) {
    const LadderTaps taps = modulated_taps(pair.ladder_kernel);
    const long len = static_cast<long>(pair.ladder_kernel.size());
    const long size = 4 * len + 3;
    const long centre = size / 2;
    ImageGrid h0(static_cast<std::size_t>(size), static_cast<std::size_t>(size));
    ImageGrid h1(static_cast<std::size_t>(size), static_cast<std::size_t>(size));
    const auto put = [&](ImageGrid& g, Vec2 at, double v) {
        g(static_cast<std::size_t>(centre + at.r), static_cast<std::size_t>(centre + at.c)) += v;
    };
    struct Tap {
        Vec2 delta;
        double weight;
    };
    std::vector<Tap> predict;
    for (std::size_t ia = 0; ia < taps.position.size(); ++ia) {
        for (std::size_t ib = 0; ib < taps.position.size(); ++ib) {
            const long a = taps.position[ia];
            const long b = taps.position[ib];
            predict.push_back({{-1 + a + b, a - b}, taps.weight[ia] * taps.weight[ib]});
        }
    }
    const double root2 = std::numbers::sqrt2;
    put(h1, {0, 0}, 1.0 / root2);
    for (const auto& t : predict) {
        put(h1, t.delta, -t.weight / root2);
    }
    put(h0, {0, 0}, root2);
    for (const auto& t : predict) {
        const Vec2 base{-t.delta.r, -t.delta.c};
        put(h0, base, 0.5 * root2 * t.weight);
        for (const auto& s : predict) {
            put(h0, {base.r + s.delta.r, base.c + s.delta.c}, -0.5 * root2 * t.weight * s.weight);
        }
    }

    const std::size_t work = static_cast<std::size_t>(2 * size + 2);
    const DfbPlan plan(work, work, 1, pair.ladder_kernel);
    const auto impulse_response = [&](std::size_t row, std::size_t col) {
        std::vector<double> buf(work * work, 0.0);
        buf[row * work + col] = 1.0;
        plan.synthesise(buf);
        ImageGrid g(static_cast<std::size_t>(size), static_cast<std::size_t>(size));
        for (long r = -centre; r <= centre; ++r) {
            for (long c = -centre; c <= centre; ++c) {
                g(static_cast<std::size_t>(centre + r), static_cast<std::size_t>(centre + c)) =
                    buf[static_cast<std::size_t>(static_cast<long>(row) + r) * work +
                        static_cast<std::size_t>(static_cast<long>(col) + c)];
            }
        }
        return g;
    };
    const std::size_t mid = work / 2;  // even, so (mid, mid) is on the lowpass coset
    pair.h0 = std::move(h0);
    pair.h1 = std::move(h1);
    pair.g0 = impulse_response(mid, mid);
    pair.g1 = impulse_response(mid + 1, mid);
}

std::vector<double> pkva_kernel(std::initializer_list<double> half) {
    std::vector<double> v(half);
    std::vector<double> kernel(v.rbegin(), v.rend());
    kernel.insert(kernel.end(), v.begin(), v.end());
    return kernel;
}

void check_even_dims(const ImageGrid& grid, const char* what) {
    if (grid.width() % 2 != 0 || grid.height() % 2 != 0) {
        throw DimensionError(std::string(what) + " needs even dimensions");
    }
}

}  // namespace

FanFilterPair FanFilterPair::by_name(const std::string& name) {
    std::vector<double> kernel;
    if (name == "pkva12") {
        kernel = pkva_kernel({0.6300, -0.1930, 0.0972, -0.0526, 0.0272, -0.0144});
    } else if (name == "pkva8") {
        kernel = pkva_kernel({0.6302, -0.1924, 0.0930, -0.0403});
    } else if (name == "pkva6") {
        kernel = pkva_kernel({0.6261, -0.1794, 0.0688});
    } else if (name == "haar") {
        kernel = {1.0};
    } else {
        throw std::invalid_argument("unknown fan filter '" + name + "' (expected pkva6, pkva8, pkva12 or haar)");
    }
    FanFilterPair pair{name, std::move(kernel), FanStructure::ladder, ImageGrid(1, 1), ImageGrid(1, 1),
                       ImageGrid(1, 1), ImageGrid(1, 1)};
    fill_equivalent_filters(pair);
    return pair;
}

std::size_t DirectionalSubbands::sample_count() const noexcept {
    std::size_t total = 0;
    for (const auto& s : subbands) {
        total += s.size();
    }
    return total;
}

ImageGrid fan_analysis_by_ladder(const FanFilterPair& filters, const ImageGrid& grid) {
    check_even_dims(grid, "fan_analysis_by_ladder");
    const DfbPlan plan(grid.height(), grid.width(), 1, filters.ladder_kernel);
    std::vector<double> buf(grid.pixels().begin(), grid.pixels().end());
    plan.analyse(buf);
    return ImageGrid(grid.width(), grid.height(), std::move(buf));
}

ImageGrid fan_analysis_by_convolution(const FanFilterPair& filters, const ImageGrid& grid) {
    check_even_dims(grid, "fan_analysis_by_convolution");
    const auto h = static_cast<std::ptrdiff_t>(grid.height());
    const auto w = static_cast<std::ptrdiff_t>(grid.width());
    const auto centre = static_cast<std::ptrdiff_t>(filters.filter_center());
    const auto size = static_cast<std::ptrdiff_t>(filters.h0.width());
    ImageGrid out(grid.width(), grid.height());
    for (std::ptrdiff_t r = 0; r < h; ++r) {
        for (std::ptrdiff_t c = 0; c < w; ++c) {
            const ImageGrid& f = (r + c) % 2 == 0 ? filters.h0 : filters.h1;
            double acc = 0.0;
            for (std::ptrdiff_t fr = 0; fr < size; ++fr) {
                const auto sr = static_cast<std::size_t>(extend_index(r + fr - centre, h, ExtensionMode::periodic));
                for (std::ptrdiff_t fc = 0; fc < size; ++fc) {
                    const double tap = f(static_cast<std::size_t>(fr), static_cast<std::size_t>(fc));
                    if (tap != 0.0) {
                        acc += tap * grid(sr, static_cast<std::size_t>(
                                                  extend_index(c + fc - centre, w, ExtensionMode::periodic)));
                    }
                }
            }
            out(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = acc;
        }
    }
    return out;
}

double fan_self_test(const FanFilterPair& filters, const ImageGrid& grid) {
    const ImageGrid coeffs = fan_analysis_by_convolution(filters, grid);
    const auto h = static_cast<std::ptrdiff_t>(grid.height());
    const auto w = static_cast<std::ptrdiff_t>(grid.width());
    const auto centre = static_cast<std::ptrdiff_t>(filters.filter_center());
    const auto size = static_cast<std::ptrdiff_t>(filters.g0.width());
    ImageGrid rebuilt(grid.width(), grid.height());
    for (std::ptrdiff_t r = 0; r < h; ++r) {
        for (std::ptrdiff_t c = 0; c < w; ++c) {
            const double v = coeffs(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
            const ImageGrid& g = (r + c) % 2 == 0 ? filters.g0 : filters.g1;
            for (std::ptrdiff_t fr = 0; fr < size; ++fr) {
                const auto tr = static_cast<std::size_t>(extend_index(r + fr - centre, h, ExtensionMode::periodic));
                for (std::ptrdiff_t fc = 0; fc < size; ++fc) {
                    const double tap = g(static_cast<std::size_t>(fr), static_cast<std::size_t>(fc));
                    if (tap != 0.0) {
                        rebuilt(tr, static_cast<std::size_t>(extend_index(c + fc - centre, w, ExtensionMode::periodic))) +=
                            tap * v;
                    }
                }
            }
        }
    }
    return max_abs_diff(rebuilt, grid);
}

std::pair<std::size_t, std::size_t> dfb_subband_dims(std::size_t width, std::size_t height, unsigned order,
                                                     std::size_t index) {
    check_dfb_input(width, height, order);
    if (index >= (std::size_t{1} << order)) {
        throw std::out_of_range("DFB subband index out of range");
    }
    const DfbPlan plan(height, width, order, {1.0});
    return plan.leaf_dims(index);
}

DirectionalSubbands dfb_analysis(const ImageGrid& grid, unsigned order, const FanFilterPair& filters) {
    check_dfb_input(grid.width(), grid.height(), order);
    DirectionalSubbands out;
    out.order = order;
    out.source_width = grid.width();
    out.source_height = grid.height();
    if (order == 0) {
        out.subbands.push_back(grid);
        return out;
    }
    const DfbPlan plan(grid.height(), grid.width(), order, filters.ladder_kernel);
    std::vector<double> buf(grid.pixels().begin(), grid.pixels().end());
    plan.analyse(buf);
    for (std::size_t k = 0; k < plan.leaves().size(); ++k) {
        const auto& positions = plan.leaves()[k].positions;
        const auto [w, h] = plan.leaf_dims(k);
        std::vector<double> values(positions.size());
        for (std::size_t i = 0; i < positions.size(); ++i) {
            values[i] = buf[positions[i]];
        }
        out.subbands.emplace_back(w, h, std::move(values));
    }
    return out;
}

ImageGrid dfb_synthesis(const DirectionalSubbands& subbands, const FanFilterPair& filters) {
    const unsigned order = subbands.order;
    check_dfb_input(subbands.source_width, subbands.source_height, order);
    if (subbands.subbands.size() != (std::size_t{1} << order)) {
        throw DimensionError("dfb_synthesis: expected " + std::to_string(std::size_t{1} << order) +
                             " subbands, got " + std::to_string(subbands.subbands.size()));
    }
    if (order == 0) {
        if (subbands.subbands[0].width() != subbands.source_width ||
            subbands.subbands[0].height() != subbands.source_height) {
            throw DimensionError("dfb_synthesis: order-0 subband does not match source dimensions");
        }
        return subbands.subbands[0];
    }
    const DfbPlan plan(subbands.source_height, subbands.source_width, order, filters.ladder_kernel);
    std::vector<double> buf(subbands.source_width * subbands.source_height);
    for (std::size_t k = 0; k < plan.leaves().size(); ++k) {
        const auto [w, h] = plan.leaf_dims(k);
        const ImageGrid& band = subbands.subbands[k];
        if (band.width() != w || band.height() != h) {
            throw DimensionError("dfb_synthesis: subband " + std::to_string(k) + " is " +
                                 std::to_string(band.width()) + "x" + std::to_string(band.height()) +
                                 ", expected " + std::to_string(w) + "x" + std::to_string(h));
        }
        const auto& positions = plan.leaves()[k].positions;
        const auto values = band.pixels();
        for (std::size_t i = 0; i < positions.size(); ++i) {
            buf[positions[i]] = values[i];
        }
    }
    plan.synthesise(buf);
    return ImageGrid(subbands.source_width, subbands.source_height, std::move(buf));
}

ImageGrid quincunx_resample(const ImageGrid& grid, LatticeMatrix matrix, ResampleDirection direction) {
    const std::size_t h = grid.height();
    const std::size_t w = grid.width();
    const bool forward = direction == ResampleDirection::forward;
    switch (matrix) {
        case LatticeMatrix::R0:
        case LatticeMatrix::R1:
        case LatticeMatrix::R2:
        case LatticeMatrix::R3: {
            // Positive shear for R0/R2; the inverse of a shear flips its sign.
            const bool shear_rows = matrix == LatticeMatrix::R0 || matrix == LatticeMatrix::R1;
            long sign = (matrix == LatticeMatrix::R0 || matrix == LatticeMatrix::R2) ? 1 : -1;
            if (!forward) {
                sign = -sign;
            }
            ImageGrid out(w, h);
            for (std::size_t r = 0; r < h; ++r) {
                for (std::size_t c = 0; c < w; ++c) {
                    if (shear_rows) {
                        const auto src = extend_index(static_cast<std::ptrdiff_t>(r) + sign * static_cast<long>(c),
                                                      static_cast<std::ptrdiff_t>(h), ExtensionMode::periodic);
                        out(r, c) = grid(static_cast<std::size_t>(src), c);
                    } else {
                        const auto src = extend_index(static_cast<std::ptrdiff_t>(c) + sign * static_cast<long>(r),
                                                      static_cast<std::ptrdiff_t>(w), ExtensionMode::periodic);
                        out(r, c) = grid(r, static_cast<std::size_t>(src));
                    }
                }
            }
            return out;
        }
        case LatticeMatrix::Q0: {
            if (forward) {
                if (h % 2 != 0) {
                    throw DimensionError("Q0 resampling needs an even number of rows");
                }
                ImageGrid out(w, h / 2);
                for (std::size_t m = 0; m < h / 2; ++m) {
                    for (std::size_t c = 0; c < w; ++c) {
                        out(m, c) = grid((2 * m + c) % h, c);
                    }
                }
                return out;
            }
            const std::size_t full = 2 * h;
            ImageGrid out(w, full);
            for (std::size_t m = 0; m < h; ++m) {
                for (std::size_t c = 0; c < w; ++c) {
                    out((2 * m + c) % full, c) = grid(m, c);
                }
            }
            return out;
        }
        case LatticeMatrix::Q1: {
            if (forward) {
                if (w % 2 != 0) {
                    throw DimensionError("Q1 resampling needs an even number of columns");
                }
                ImageGrid out(w / 2, h);
                for (std::size_t r = 0; r < h; ++r) {
                    for (std::size_t m = 0; m < w / 2; ++m) {
                        out(r, m) = grid(r, (2 * m + r) % w);
                    }
                }
                return out;
            }
            const std::size_t full = 2 * w;
            ImageGrid out(full, h);
            for (std::size_t r = 0; r < h; ++r) {
                for (std::size_t m = 0; m < w; ++m) {
                    out(r, (2 * m + r) % full) = grid(r, m);
                }
            }
            return out;
        }
    }
    throw std::invalid_argument("unknown lattice matrix");
}

}  // namespace ctd
