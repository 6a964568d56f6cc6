#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "frislab/surface.hpp"

namespace frislab {

enum class ConstellationFamily { automatic, psk, qam };

/// Unit-average-energy M-ary constellation stored in label order:
/// points(lab) is the symbol whose Gray bit label equals lab. M = 1 is the
/// degenerate RSSK "constellation" {1}.
struct Constellation {
    int order = 1;
    Eigen::VectorXcd points;

    int bits() const;
    std::complex<double> point(int label) const { return points(label); }
};

/// Square QAM for M in {4, 16, 64}, PSK for other powers of two;
/// `automatic` picks QAM when M is an even power of two.
Constellation make_constellation(int m, ConstellationFamily family = ConstellationFamily::automatic);

/// Per-frame transmission parameters shared by the modem and the harness.
struct FrameConfig {
    int n_r = 4;
    int m = 1;
    int k_sel = 1;
    PhaseMode phase_mode = PhaseMode::make_continuous();
    int list_size = 1;
    ConstellationFamily family = ConstellationFamily::automatic;

    int index_bits() const;
    int symbol_bits() const;
    int bits_per_frame() const { return index_bits() + symbol_bits(); }
    void validate() const;
};

struct MappedFrame {
    int antenna;       // 0-based receive-antenna index
    int symbol_label;  // index into Constellation::points
    std::complex<double> symbol;
};

/// First log2(N_r) bits pick the antenna (natural binary, MSB first), the
/// rest are the Gray label of the constellation point.
MappedFrame map_bits(const std::vector<int>& bits, const FrameConfig& cfg,
                     const Constellation& constellation);

/// Same mapping with the frame's bits packed MSB-first into a word.
MappedFrame map_word(std::uint32_t word, const FrameConfig& cfg,
                     const Constellation& constellation);
std::uint32_t frame_word(int antenna, int symbol_label, const FrameConfig& cfg);

/// y = G_tilde diag(v) f x + n with n_ell ~ CN(0, n0). No noise is drawn
/// when n0 == 0.
Eigen::VectorXcd synthesize_rx(const ChannelRealization& chan, const ReflectionConfig& config,
                               std::complex<double> x, double n0, RandomStream& rng);

/// Effective gains for all modes: column i holds H_ell^(i) over antennas.
Eigen::MatrixXcd effective_gain_matrix(const ChannelRealization& chan,
                                       std::span<const ReflectionConfig> configs);

struct DetectionResult {
    int antenna;
    int symbol_label;
    double metric;
};

/// Joint ML over (mode, symbol); ties toward the smaller antenna index,
/// then the smaller symbol label.
DetectionResult detect_ml(const Eigen::VectorXcd& y, const Eigen::MatrixXcd& gains,
                          const Constellation& constellation);
DetectionResult detect_ml(const Eigen::VectorXcd& y, const ChannelRealization& chan,
                          std::span<const ReflectionConfig> configs,
                          const Constellation& constellation);

/// Energy-greedy mode pick followed by a scalar symbol decision on that
/// branch; the metric is the achieved scalar residue.
DetectionResult detect_greedy(const Eigen::VectorXcd& y, const Eigen::MatrixXcd& gains,
                              const Constellation& constellation);
DetectionResult detect_greedy(const Eigen::VectorXcd& y, const ChannelRealization& chan,
                              std::span<const ReflectionConfig> configs,
                              const Constellation& constellation);

/// Two-stage list detector: ML restricted to the L antennas with the
/// largest received energy. L = N_r recovers exact ML.
DetectionResult detect_list(const Eigen::VectorXcd& y, const Eigen::MatrixXcd& gains,
                            const Constellation& constellation, int list_size);
DetectionResult detect_list(const Eigen::VectorXcd& y, const ChannelRealization& chan,
                            std::span<const ReflectionConfig> configs,
                            const Constellation& constellation, int list_size);

}  // namespace frislab
