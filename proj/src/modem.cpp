#include "frislab/modem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace frislab {

namespace {

bool is_power_of_two(int v) { return v >= 1 && (v & (v - 1)) == 0; }

int log2_exact(int v) {
    int b = 0;
    while ((1 << b) < v) ++b;
    return b;
}

std::uint32_t to_gray(std::uint32_t n) { return n ^ (n >> 1); }

}  // namespace

int Constellation::bits() const { return log2_exact(order); }

Constellation make_constellation(int m, ConstellationFamily family) {
    if (!is_power_of_two(m))
        throw std::invalid_argument("make_constellation: order must be a power of two");
    Constellation c;
    c.order = m;
    c.points.resize(m);
    if (m == 1) {
        c.points(0) = 1.0;
        return c;
    }
    const bool square = (log2_exact(m) % 2 == 0);
    bool use_qam = family == ConstellationFamily::qam ||
                   (family == ConstellationFamily::automatic && square && m >= 4);
    if (family == ConstellationFamily::qam && !square)
        throw std::invalid_argument("make_constellation: QAM requires a square order");
    if (use_qam) {
        const int side = 1 << (log2_exact(m) / 2);
        const int axis_bits = log2_exact(side);
        const double scale = std::sqrt(2.0 * (m - 1) / 3.0);
        for (int i = 0; i < side; ++i) {
            for (int q = 0; q < side; ++q) {
                const double re = 2.0 * i - (side - 1);
                const double im = 2.0 * q - (side - 1);
                const std::uint32_t label = (to_gray(i) << axis_bits) | to_gray(q);
                c.points(label) = std::complex<double>(re, im) / scale;
            }
        }
    } else {
        for (int p = 0; p < m; ++p)
            c.points(to_gray(p)) = std::polar(1.0, 2.0 * M_PI * p / m);
    }
    return c;
}

int FrameConfig::index_bits() const { return log2_exact(n_r); }
int FrameConfig::symbol_bits() const { return log2_exact(m); }

void FrameConfig::validate() const {
    if (!is_power_of_two(n_r)) throw std::invalid_argument("FrameConfig: n_r must be a power of two");
    if (!is_power_of_two(m)) throw std::invalid_argument("FrameConfig: m must be a power of two");
    if (static_cast<long long>(n_r) * m < 2)
        throw std::invalid_argument("FrameConfig: frame must carry at least one bit");
    if (k_sel < 1) throw std::invalid_argument("FrameConfig: k_sel must be positive");
    if (list_size < 1 || list_size > n_r)
        throw std::invalid_argument("FrameConfig: list_size must lie in [1, n_r]");
    phase_mode.validate();
}

MappedFrame map_word(std::uint32_t word, const FrameConfig& cfg,
                     const Constellation& constellation) {
    const int b2 = cfg.symbol_bits();
    const int antenna = static_cast<int>(word >> b2);
    const int label = static_cast<int>(word & ((1u << b2) - 1u));
    return {antenna, label, constellation.point(label)};
}

MappedFrame map_bits(const std::vector<int>& bits, const FrameConfig& cfg,
                     const Constellation& constellation) {
    if (static_cast<int>(bits.size()) != cfg.bits_per_frame())
        throw std::invalid_argument("map_bits: wrong number of bits");
    std::uint32_t word = 0;
    for (int b : bits) word = (word << 1) | static_cast<std::uint32_t>(b & 1);
    return map_word(word, cfg, constellation);
}

std::uint32_t frame_word(int antenna, int symbol_label, const FrameConfig& cfg) {
    return (static_cast<std::uint32_t>(antenna) << cfg.symbol_bits()) |
           static_cast<std::uint32_t>(symbol_label);
}

Eigen::VectorXcd synthesize_rx(const ChannelRealization& chan, const ReflectionConfig& config,
                               std::complex<double> x, double n0, RandomStream& rng) {
    if (n0 < 0.0) throw std::invalid_argument("synthesize_rx: noise variance must be >= 0");
    const Eigen::Index n_r = chan.g_tilde.rows();
    Eigen::VectorXcd y = Eigen::VectorXcd::Zero(n_r);
    for (int n : config.selected)
        y += chan.g_tilde.col(n) * (chan.f(n) * config.reflection(n));
    y *= x;
    if (n0 > 0.0) {
        const double amp = std::sqrt(n0);
        for (Eigen::Index ell = 0; ell < n_r; ++ell) y(ell) += amp * rng.complex_gaussian();
    }
    return y;
}

Eigen::MatrixXcd effective_gain_matrix(const ChannelRealization& chan,
                                       std::span<const ReflectionConfig> configs) {
    const Eigen::Index n_r = chan.g_tilde.rows();
    Eigen::MatrixXcd gains = Eigen::MatrixXcd::Zero(n_r, static_cast<Eigen::Index>(configs.size()));
    for (std::size_t i = 0; i < configs.size(); ++i)
        for (int n : configs[i].selected)
            gains.col(i) += chan.g_tilde.col(n) * (chan.f(n) * configs[i].reflection(n));
    return gains;
}

DetectionResult detect_ml(const Eigen::VectorXcd& y, const Eigen::MatrixXcd& gains,
                          const Constellation& constellation) {
    DetectionResult best{0, 0, std::numeric_limits<double>::infinity()};
    for (int i = 0; i < gains.cols(); ++i) {
        for (int lab = 0; lab < constellation.order; ++lab) {
            const double metric = (y - gains.col(i) * constellation.point(lab)).squaredNorm();
            if (metric < best.metric) best = {i, lab, metric};
        }
    }
    return best;
}

namespace {

// Antenna indices ordered by received energy (descending, ties toward the
// smaller index).
std::vector<int> energy_order(const Eigen::VectorXcd& y) {
    std::vector<int> order(y.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&y](int a, int b) { return std::norm(y(a)) > std::norm(y(b)); });
    return order;
}

}  // namespace

DetectionResult detect_greedy(const Eigen::VectorXcd& y, const Eigen::MatrixXcd& gains,
                              const Constellation& constellation) {
    int i_hat = 0;
    double best_energy = -1.0;
    for (int ell = 0; ell < y.size(); ++ell) {
        const double e = std::norm(y(ell));
        if (e > best_energy) {
            best_energy = e;
            i_hat = ell;
        }
    }
    const std::complex<double> branch = gains(i_hat, i_hat);
    DetectionResult best{i_hat, 0, std::numeric_limits<double>::infinity()};
    for (int lab = 0; lab < constellation.order; ++lab) {
        const double metric = std::norm(y(i_hat) - branch * constellation.point(lab));
        if (metric < best.metric) {
            best.symbol_label = lab;
            best.metric = metric;
        }
    }
    return best;
}

DetectionResult detect_list(const Eigen::VectorXcd& y, const Eigen::MatrixXcd& gains,
                            const Constellation& constellation, int list_size) {
    if (list_size < 1 || list_size > y.size())
        throw std::invalid_argument("detect_list: list size out of range");
    std::vector<int> order = energy_order(y);
    order.resize(list_size);
    std::sort(order.begin(), order.end());  // ascending scan keeps ML tie-breaking
    DetectionResult best{order.front(), 0, std::numeric_limits<double>::infinity()};
    for (int i : order) {
        for (int lab = 0; lab < constellation.order; ++lab) {
            const double metric = (y - gains.col(i) * constellation.point(lab)).squaredNorm();
            if (metric < best.metric) best = {i, lab, metric};
        }
    }
    return best;
}

DetectionResult detect_ml(const Eigen::VectorXcd& y, const ChannelRealization& chan,
                          std::span<const ReflectionConfig> configs,
                          const Constellation& constellation) {
    return detect_ml(y, effective_gain_matrix(chan, configs), constellation);
}

DetectionResult detect_greedy(const Eigen::VectorXcd& y, const ChannelRealization& chan,
                              std::span<const ReflectionConfig> configs,
                              const Constellation& constellation) {
    return detect_greedy(y, effective_gain_matrix(chan, configs), constellation);
}

DetectionResult detect_list(const Eigen::VectorXcd& y, const ChannelRealization& chan,
                            std::span<const ReflectionConfig> configs,
                            const Constellation& constellation, int list_size) {
    return detect_list(y, effective_gain_matrix(chan, configs), constellation, list_size);
}

}  // namespace frislab
