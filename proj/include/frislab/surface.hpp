#pragma once

#include <vector>

#include <Eigen/Dense>

#include "frislab/channel.hpp"

namespace frislab {

enum class PhaseVariant { continuous, quantized };

/// Continuous phase control or Q-bit mid-rise quantization with step
/// 2*pi/2^Q.
struct PhaseMode {
    PhaseVariant variant = PhaseVariant::continuous;
    int q_bits = 0;

    static PhaseMode make_continuous() { return {PhaseVariant::continuous, 0}; }
    static PhaseMode make_quantized(int q) { return {PhaseVariant::quantized, q}; }

    bool quantized() const { return variant == PhaseVariant::quantized; }
    double step() const;
    void validate() const;
};

/// Selection metric used under quantized phases: the in-phase projection
/// a = Re{c e^{j theta_q}} (matches the analytical model) or plain |c|.
enum class QuantizedSelection { in_phase, magnitude };

/// Per-mode surface state: which elements radiate and with what phase.
/// reflection(n) = selection(n) * e^{j phases(n)}; `selected` lists the
/// active indices in ascending order.
struct ReflectionConfig {
    Eigen::Array<bool, Eigen::Dynamic, 1> selection;
    Eigen::VectorXd phases;
    Eigen::VectorXcd reflection;
    std::vector<int> selected;
};

/// Cascaded coefficients c_{i,n} = g_tilde(i,n) * f(n) toward antenna i.
Eigen::VectorXcd cascaded_coeffs(const ChannelRealization& chan, int target_antenna);

/// Indices of the k largest |c_n|, ties broken toward the smaller index;
/// returned in ascending index order.
std::vector<int> select_topk_continuous(const Eigen::VectorXcd& c, int k);

/// Aligning phases theta_n = (-arg c_n) mod 2*pi on the selected set, zero
/// elsewhere. A zero coefficient gets phase zero.
Eigen::VectorXd align_phases(const Eigen::VectorXcd& c, const std::vector<int>& selected);

/// Mid-rise nearest-angle quantizer: (floor((theta mod 2pi)/step)*step +
/// step/2) mod 2pi.
double quantize_phase(double theta, int q_bits);

/// Full per-mode configuration: strongest-link selection plus phase
/// alignment (quantized modes select on the in-phase projection by
/// default).
ReflectionConfig configure_mode(const ChannelRealization& chan, int target_antenna, int k_sel,
                                const PhaseMode& mode,
                                QuantizedSelection rule = QuantizedSelection::in_phase);

/// Effective cascaded gain H_ell = sum_n c_{ell,n} v_n.
std::complex<double> effective_gain(const ChannelRealization& chan,
                                    const ReflectionConfig& config, int antenna);

}  // namespace frislab
