#include "frislab/surface.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace frislab {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

double PhaseMode::step() const {
    if (!quantized()) return 0.0;
    return kTwoPi / static_cast<double>(1u << q_bits);
}

void PhaseMode::validate() const {
    if (quantized() && (q_bits < 1 || q_bits > 30))
        throw std::invalid_argument("PhaseMode: quantized mode needs q_bits in [1, 30]");
}

Eigen::VectorXcd cascaded_coeffs(const ChannelRealization& chan, int target_antenna) {
    if (target_antenna < 0 || target_antenna >= chan.g_tilde.rows())
        throw std::out_of_range("cascaded_coeffs: antenna index out of range");
    return chan.g_tilde.row(target_antenna).transpose().cwiseProduct(chan.f);
}

namespace {

// Top-k indices by a real-valued key, ties toward the smaller index;
// result sorted ascending.
std::vector<int> topk_by_key(const Eigen::VectorXd& key, int k) {
    const int n = static_cast<int>(key.size());
    if (k < 1 || k > n) throw std::invalid_argument("select_topk: k out of range");
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::nth_element(idx.begin(), idx.begin() + (k - 1), idx.end(), [&key](int a, int b) {
        if (key(a) != key(b)) return key(a) > key(b);
        return a < b;
    });
    idx.resize(k);
    std::sort(idx.begin(), idx.end());
    return idx;
}

}  // namespace

std::vector<int> select_topk_continuous(const Eigen::VectorXcd& c, int k) {
    return topk_by_key(c.cwiseAbs2(), k);
}

Eigen::VectorXd align_phases(const Eigen::VectorXcd& c, const std::vector<int>& selected) {
    Eigen::VectorXd phases = Eigen::VectorXd::Zero(c.size());
    for (int n : selected) {
        if (n < 0 || n >= c.size())
            throw std::out_of_range("align_phases: selected index out of range");
        if (c(n) == std::complex<double>(0.0, 0.0)) continue;  // degenerate, phase 0
        double theta = -std::arg(c(n));
        if (theta < 0.0) theta += kTwoPi;
        if (theta >= kTwoPi) theta -= kTwoPi;
        phases(n) = theta;
    }
    return phases;
}

double quantize_phase(double theta, int q_bits) {
    if (!std::isfinite(theta)) throw std::invalid_argument("quantize_phase: non-finite angle");
    if (q_bits < 1) throw std::invalid_argument("quantize_phase: q_bits must be >= 1");
    const double levels = static_cast<double>(1u << q_bits);
    const double step = kTwoPi / levels;
    double m = std::fmod(theta, kTwoPi);
    if (m < 0.0) m += kTwoPi;
    double cell = std::floor(m / step);
    if (cell >= levels) cell = levels - 1.0;
    return cell * step + 0.5 * step;
}

namespace {

ReflectionConfig assemble(const Eigen::VectorXd& phases, std::vector<int> selected,
                          Eigen::Index n_tot) {
    ReflectionConfig config;
    config.selection = Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(n_tot, false);
    config.phases = phases;
    config.reflection = Eigen::VectorXcd::Zero(n_tot);
    for (int n : selected) {
        config.selection(n) = true;
        config.reflection(n) = std::polar(1.0, phases(n));
    }
    config.selected = std::move(selected);
    return config;
}

}  // namespace

ReflectionConfig configure_mode(const ChannelRealization& chan, int target_antenna, int k_sel,
                                const PhaseMode& mode, QuantizedSelection rule) {
    mode.validate();
    const Eigen::VectorXcd c = cascaded_coeffs(chan, target_antenna);
    const Eigen::Index n_tot = c.size();
    if (k_sel < 1 || k_sel > n_tot)
        throw std::invalid_argument("configure_mode: k_sel out of range");

    if (!mode.quantized()) {
        std::vector<int> selected = select_topk_continuous(c, k_sel);
        Eigen::VectorXd phases = align_phases(c, selected);
        return assemble(phases, std::move(selected), n_tot);
    }

    // Quantized: quantize the aligning phase per element, then rank either
    // by the in-phase projection a = Re{c e^{j theta_q}} or by |c|.
    Eigen::VectorXd theta_q(n_tot);
    Eigen::VectorXd metric(n_tot);
    for (Eigen::Index n = 0; n < n_tot; ++n) {
        double ideal = c(n) == std::complex<double>(0.0, 0.0) ? 0.0 : -std::arg(c(n));
        if (ideal < 0.0) ideal += kTwoPi;
        theta_q(n) = quantize_phase(ideal, mode.q_bits);
        metric(n) = rule == QuantizedSelection::in_phase
                        ? (c(n) * std::polar(1.0, theta_q(n))).real()
                        : std::norm(c(n));
    }
    std::vector<int> selected = topk_by_key(metric, k_sel);
    Eigen::VectorXd phases = Eigen::VectorXd::Zero(n_tot);
    for (int n : selected) phases(n) = theta_q(n);
    return assemble(phases, std::move(selected), n_tot);
}

std::complex<double> effective_gain(const ChannelRealization& chan,
                                    const ReflectionConfig& config, int antenna) {
    if (antenna < 0 || antenna >= chan.g_tilde.rows())
        throw std::out_of_range("effective_gain: antenna index out of range");
    std::complex<double> sum = 0.0;
    for (int n : config.selected)
        sum += chan.g_tilde(antenna, n) * chan.f(n) * config.reflection(n);
    return sum;
}

}  // namespace frislab
