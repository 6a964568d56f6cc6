#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>

#include <doctest.h>

#include "frislab/modem.hpp"

using namespace frislab;
using Complex = std::complex<double>;

namespace {

ChannelRealization random_channel(int n_r, int n_tot, std::uint64_t seed) {
    RandomStream rng(seed);
    ChannelRealization chan;
    sample_channels_into(rng, n_tot, n_r, CorrelationModel::make_identity(n_tot), chan);
    return chan;
}

std::vector<ReflectionConfig> all_configs(const ChannelRealization& chan, int n_r, int k,
                                          const PhaseMode& mode) {
    std::vector<ReflectionConfig> configs;
    for (int i = 0; i < n_r; ++i) configs.push_back(configure_mode(chan, i, k, mode));
    return configs;
}

}  // namespace

TEST_CASE("constellations are unit energy, distinct and Gray labeled") {
    for (int m : {2, 4, 8, 16, 64}) {
        Constellation c = make_constellation(m);
        CHECK(c.points.cwiseAbs2().mean() == doctest::Approx(1.0).epsilon(1e-12));
        for (int a = 0; a < m; ++a)
            for (int b = a + 1; b < m; ++b) CHECK(std::abs(c.point(a) - c.point(b)) > 1e-9);
    }
    // PSK: cyclic neighbours differ in exactly one label bit.
    Constellation psk = make_constellation(8, ConstellationFamily::psk);
    const auto angle_index = [&psk](int lab) {
        return static_cast<int>(std::lround(std::arg(psk.point(lab)) / (2.0 * M_PI / 8) + 8)) %
               8;
    };
    for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 8; ++b)
            if ((angle_index(a) + 1) % 8 == angle_index(b))
                CHECK(std::popcount(static_cast<unsigned>(a ^ b)) == 1);
    CHECK(make_constellation(1).point(0) == Complex(1.0, 0.0));
    CHECK_THROWS_AS(make_constellation(3), std::invalid_argument);
    CHECK_THROWS_AS(make_constellation(8, ConstellationFamily::qam), std::invalid_argument);
}

TEST_CASE("map_bits") {
    FrameConfig cfg;
    cfg.n_r = 4;
    cfg.m = 4;
    cfg.k_sel = 4;
    Constellation c = make_constellation(4);
    MappedFrame f = map_bits({0, 0, 0, 0}, cfg, c);
    CHECK(f.antenna == 0);
    CHECK(f.symbol_label == 0);
    CHECK(f.symbol == c.point(0));

    FrameConfig rssk;
    rssk.n_r = 4;
    rssk.m = 1;
    rssk.k_sel = 4;
    Constellation one = make_constellation(1);
    MappedFrame g = map_bits({1, 1}, rssk, one);
    CHECK(g.antenna == 3);  // last antenna
    CHECK(g.symbol == Complex(1.0, 0.0));

    CHECK_THROWS_AS(map_bits({1, 0, 1}, cfg, c), std::invalid_argument);

    // Exhaustive round trip over N_r = 8, M = 16.
    FrameConfig big;
    big.n_r = 8;
    big.m = 16;
    big.k_sel = 4;
    Constellation c16 = make_constellation(16);
    for (std::uint32_t word = 0; word < (1u << big.bits_per_frame()); ++word) {
        MappedFrame mf = map_word(word, big, c16);
        CHECK(frame_word(mf.antenna, mf.symbol_label, big) == word);
    }
}

TEST_CASE("synthesize_rx") {
    ChannelRealization chan = random_channel(3, 24, 8);
    ReflectionConfig cfg = configure_mode(chan, 1, 8, PhaseMode::make_continuous());
    RandomStream rng(1);
    Eigen::VectorXcd y = synthesize_rx(chan, cfg, Complex(1.0, 0.0), 0.0, rng);
    for (int ell = 0; ell < 3; ++ell)
        CHECK(std::abs(y(ell) - effective_gain(chan, cfg, ell)) < 1e-12);

    // Linearity: a phase rotation of the symbol rotates the output.
    const Complex phase = std::polar(1.0, 0.7);
    Eigen::VectorXcd y2 = synthesize_rx(chan, cfg, phase, 0.0, rng);
    CHECK((y2 - y * phase).cwiseAbs().maxCoeff() < 1e-12);

    // Noise-only variance.
    ChannelRealization zero = chan;
    zero.f.setZero();
    RandomStream rng2(5);
    double acc = 0.0;
    const int draws = 20000;
    for (int it = 0; it < draws; ++it)
        acc += synthesize_rx(zero, cfg, 1.0, 4.0, rng2).cwiseAbs2().sum();
    CHECK(acc / (3 * draws) == doctest::Approx(4.0).epsilon(0.025));

    CHECK_THROWS_AS(synthesize_rx(chan, cfg, 1.0, -1.0, rng), std::invalid_argument);
}

TEST_CASE("ml detector recovers noiseless frames and matches brute force") {
    ChannelRealization chan = random_channel(4, 32, 17);
    const PhaseMode mode = PhaseMode::make_continuous();
    auto configs = all_configs(chan, 4, 12, mode);
    Constellation c = make_constellation(4);
    RandomStream rng(2);

    for (int i = 0; i < 4; ++i) {
        for (int lab = 0; lab < 4; ++lab) {
            Eigen::VectorXcd y = synthesize_rx(chan, configs[i], c.point(lab), 0.0, rng);
            DetectionResult det = detect_ml(y, chan, configs, c);
            CHECK(det.antenna == i);
            CHECK(det.symbol_label == lab);
            CHECK(det.metric == doctest::Approx(0.0).epsilon(1e-18));
        }
    }

    // Enumeration oracle on noisy frames (N_r = 2, M = 2).
    ChannelRealization chan2 = random_channel(2, 16, 23);
    auto configs2 = all_configs(chan2, 2, 8, mode);
    Constellation bpsk = make_constellation(2);
    Eigen::MatrixXcd gains = effective_gain_matrix(chan2, configs2);
    RandomStream noisy(3);
    for (int trial = 0; trial < 200; ++trial) {
        Eigen::VectorXcd y =
            synthesize_rx(chan2, configs2[trial % 2], bpsk.point(trial % 2), 0.5, noisy);
        DetectionResult det = detect_ml(y, gains, bpsk);
        double best = 1e300;
        int bi = -1, bl = -1;
        for (int i = 0; i < 2; ++i)
            for (int lab = 0; lab < 2; ++lab) {
                const double metric = (y - gains.col(i) * bpsk.point(lab)).squaredNorm();
                if (metric < best) {
                    best = metric;
                    bi = i;
                    bl = lab;
                }
            }
        CHECK(det.antenna == bi);
        CHECK(det.symbol_label == bl);
        CHECK(det.metric == doctest::Approx(best));
    }

    // All-zero observation: smallest model norm wins, ties to antenna 0.
    Eigen::VectorXcd zero_y = Eigen::VectorXcd::Zero(2);
    DetectionResult det0 = detect_ml(zero_y, gains, bpsk);
    double best = 1e300;
    int bi = -1, bl = -1;
    for (int i = 0; i < 2; ++i)
        for (int lab = 0; lab < 2; ++lab) {
            const double metric = (gains.col(i) * bpsk.point(lab)).squaredNorm();
            if (metric < best) {
                best = metric;
                bi = i;
                bl = lab;
            }
        }
    CHECK(det0.antenna == bi);
    CHECK(det0.symbol_label == bl);
}

TEST_CASE("greedy detector") {
    Eigen::VectorXcd y(3);
    y << Complex(1.0, 0.0), Complex(0.0, 5.0), Complex(2.0, 0.0);
    Eigen::MatrixXcd gains = Eigen::MatrixXcd::Identity(3, 3);
    Constellation c = make_constellation(2);
    CHECK(detect_greedy(y, gains, c).antenna == 1);

    // Noiseless focused frame.
    ChannelRealization chan = random_channel(4, 64, 31);
    auto configs = all_configs(chan, 4, 32, PhaseMode::make_continuous());
    RandomStream rng(9);
    Constellation qpsk = make_constellation(4);
    Eigen::VectorXcd yf = synthesize_rx(chan, configs[2], qpsk.point(1), 0.0, rng);
    DetectionResult det = detect_greedy(yf, chan, configs, qpsk);
    CHECK(det.antenna == 2);
    CHECK(det.symbol_label == 1);

    // High-SNR agreement with ML on index decisions.
    const double n0 = std::pow(10.0, -3.0);  // 30 dB
    int agree = 0;
    const int frames = 1000;
    RandomStream rng2(12);
    for (int fidx = 0; fidx < frames; ++fidx) {
        ChannelRealization ch = random_channel(4, 64, 40000 + fidx);
        auto cfgs = all_configs(ch, 4, 64, PhaseMode::make_continuous());
        Eigen::MatrixXcd gains2 = effective_gain_matrix(ch, cfgs);
        const int tx = fidx % 4;
        Eigen::VectorXcd yy = gains2.col(tx) * qpsk.point(fidx % 4);
        for (int ell = 0; ell < 4; ++ell) yy(ell) += std::sqrt(n0) * rng2.complex_gaussian();
        if (detect_greedy(yy, gains2, qpsk).antenna == detect_ml(yy, gains2, qpsk).antenna)
            ++agree;
    }
    CHECK(agree >= 990);
}

TEST_CASE("list detector") {
    ChannelRealization chan = random_channel(4, 48, 77);
    auto configs = all_configs(chan, 4, 16, PhaseMode::make_continuous());
    Constellation qpsk = make_constellation(4);
    Eigen::MatrixXcd gains = effective_gain_matrix(chan, configs);
    RandomStream rng(6);

    int l2_not_worse = 0;
    for (int trial = 0; trial < 2000; ++trial) {
        Eigen::VectorXcd y = gains.col(trial % 4) * qpsk.point((trial / 4) % 4);
        for (int ell = 0; ell < 4; ++ell) y(ell) += 0.8 * rng.complex_gaussian();

        // L = N_r is bit-identical to full ML.
        DetectionResult full = detect_list(y, gains, qpsk, 4);
        DetectionResult ml = detect_ml(y, gains, qpsk);
        CHECK(full.antenna == ml.antenna);
        CHECK(full.symbol_label == ml.symbol_label);

        // L = 1 candidate set equals greedy's antenna.
        DetectionResult one = detect_list(y, gains, qpsk, 1);
        CHECK(one.antenna == detect_greedy(y, gains, qpsk).antenna);

        // Metric is monotone non-increasing in L.
        DetectionResult two = detect_list(y, gains, qpsk, 2);
        DetectionResult three = detect_list(y, gains, qpsk, 3);
        CHECK(two.metric <= one.metric + 1e-15);
        CHECK(three.metric <= two.metric + 1e-15);
        CHECK(ml.metric <= three.metric + 1e-15);
        if (two.metric <= one.metric) ++l2_not_worse;
    }
    CHECK(l2_not_worse == 2000);
    CHECK_THROWS_AS(detect_list(Eigen::VectorXcd::Zero(4), gains, qpsk, 5),
                    std::invalid_argument);
}

TEST_CASE("scale equivariance of the detectors") {
    ChannelRealization chan = random_channel(4, 32, 55);
    auto configs = all_configs(chan, 4, 12, PhaseMode::make_quantized(2));
    Constellation qpsk = make_constellation(4);
    Eigen::MatrixXcd gains = effective_gain_matrix(chan, configs);
    RandomStream rng(8);
    for (int trial = 0; trial < 200; ++trial) {
        Eigen::VectorXcd y = gains.col(trial % 4) * qpsk.point(trial % 4);
        for (int ell = 0; ell < 4; ++ell) y(ell) += 0.5 * rng.complex_gaussian();
        const double scale = 3.7;
        DetectionResult a = detect_ml(y, gains, qpsk);
        DetectionResult b = detect_ml(y * scale, gains * scale, qpsk);
        CHECK(a.antenna == b.antenna);
        CHECK(a.symbol_label == b.symbol_label);
        DetectionResult ga = detect_greedy(y, gains, qpsk);
        DetectionResult gb = detect_greedy(y * scale, gains * scale, qpsk);
        CHECK(ga.antenna == gb.antenna);
        CHECK(ga.symbol_label == gb.symbol_label);
    }
}
