#include <cmath>
#include <stdexcept>

#include "frislab/sweep.hpp"

namespace frislab {

namespace {

std::vector<double> grid(double start, double step, double stop) {
    std::vector<double> g;
    for (double x = start; x <= stop + 1e-9; x += step) g.push_back(x);
    return g;
}

SweepSpec base_spec(int n_x, int n_z, double d_x, double d_z, int n_r, int m, int k_sel,
                    PhaseMode phase, CorrelationKind corr, std::vector<double> snr) {
    SweepSpec spec;
    spec.geometry = {n_x, n_z, d_x, d_z};
    spec.frame.n_r = n_r;
    spec.frame.m = m;
    spec.frame.k_sel = k_sel;
    spec.frame.phase_mode = phase;
    spec.frame.list_size = n_r;
    spec.snr_db = std::move(snr);
    spec.correlation = corr;
    return spec;
}

std::vector<Preset> build_presets() {
    std::vector<Preset> presets;
    const PhaseMode cont = PhaseMode::make_continuous();

    // Fixed aperture 3.5x3.5 wavelengths, K_sel = 64 active elements,
    // RSSK with N_r = 4; the 8x8 grid is the fully-active RIS baseline.
    const double d16 = 3.5 / 15.0;
    presets.push_back({"fig2_64", "RSSK grid study: 8x8 baseline, d=0.5, Nr=4, K=64",
                       base_spec(8, 8, 0.5, 0.5, 4, 1, 64, cont, CorrelationKind::jakes,
                                 grid(-25, 1, -17))});
    presets.push_back({"fig2_128", "RSSK grid study: 16x8 over the same 3.5x3.5 aperture",
                       base_spec(16, 8, d16, 0.5, 4, 1, 64, cont, CorrelationKind::jakes,
                                 grid(-29, 1, -20))});
    presets.push_back({"fig2_256", "RSSK grid study: 16x16 over the same 3.5x3.5 aperture",
                       base_spec(16, 16, d16, d16, 4, 1, 64, cont, CorrelationKind::jakes,
                                 grid(-31, 1, -22))});

    // 25x10 grid, K_sel = 50, Nr = 4, QPSK; dense 4.5x2 and sparse 9x4
    // apertures with continuous and 1..3-bit phases.
    const double dense_dx = 4.5 / 24.0, dense_dz = 2.0 / 9.0;
    const double sparse_dx = 9.0 / 24.0, sparse_dz = 4.0 / 9.0;
    for (int q = 0; q <= 3; ++q) {
        const PhaseMode mode = q == 0 ? cont : PhaseMode::make_quantized(q);
        const std::string suffix = q == 0 ? "cont" : "q" + std::to_string(q);
        presets.push_back(
            {"fig3_dense_" + suffix,
             "25x10 FRIS, aperture 4.5x2, K=50, Nr=4, M=4, phase " + suffix,
             base_spec(25, 10, dense_dx, dense_dz, 4, 4, 50, mode, CorrelationKind::jakes,
                       grid(-27, 1, -17))});
        presets.push_back(
            {"fig3_sparse_" + suffix,
             "25x10 FRIS, aperture 9x4, K=50, Nr=4, M=4, phase " + suffix,
             base_spec(25, 10, sparse_dx, sparse_dz, 4, 4, 50, mode, CorrelationKind::jakes,
                       grid(-28, 1, -18))});
    }

    // Fixed activation ratio 1/3 at 2-wavelength spacing (weak correlation,
    // run against the identity baseline the analysis covers), Nr=8, M=4, Q=3.
    const PhaseMode q3 = PhaseMode::make_quantized(3);
    struct Fig4 { int k, nx, nz; double lo, hi; };
    for (const Fig4& c : {Fig4{20, 10, 6, -27, -17}, Fig4{40, 12, 10, -30, -21},
                          Fig4{60, 15, 12, -32, -23}, Fig4{80, 16, 15, -33, -24}}) {
        presets.push_back(
            {"fig4_k" + std::to_string(c.k),
             "activation ratio 1/3: " + std::to_string(c.nx) + "x" + std::to_string(c.nz) +
                 " at d=2, K=" + std::to_string(c.k) + ", Nr=8, M=4, Q=3",
             base_spec(c.nx, c.nz, 2.0, 2.0, 8, 4, c.k, q3, CorrelationKind::identity,
                       grid(c.lo, 1, c.hi))});
    }

    // 24x10 grid at d=2 (240 candidates), sweep of the active-element count,
    // Nr=8, M=4, Q=3.
    struct Fig5 { int k; double lo, hi; };
    for (const Fig5& c : {Fig5{40, -27, -18}, Fig5{80, -31, -22}, Fig5{120, -33, -24},
                          Fig5{160, -34, -25}, Fig5{200, -34, -25}, Fig5{240, -35, -26}}) {
        presets.push_back(
            {"fig5_k" + std::to_string(c.k),
             "24x10 at d=2, K=" + std::to_string(c.k) + " of 240, Nr=8, M=4, Q=3",
             base_spec(24, 10, 2.0, 2.0, 8, 4, c.k, q3, CorrelationKind::identity,
                       grid(c.lo, 1, c.hi))});
    }

    // 20x9 grid over a 4.5x3 aperture, Nr=16, M=16, K=70, Q=2, list
    // detection with growing list sizes (L=16 is exact ML).
    for (int l : {1, 2, 3, 5, 16}) {
        SweepSpec spec = base_spec(20, 9, 4.5 / 19.0, 3.0 / 8.0, 16, 16, 70,
                                   PhaseMode::make_quantized(2), CorrelationKind::jakes,
                                   grid(-16, 1, -4));
        spec.detector = DetectorKind::list;
        spec.frame.list_size = l;
        presets.push_back({"fig6_L" + std::to_string(l),
                           "20x9 FRIS, aperture 4.5x3, Nr=16, M=16, K=70, Q=2, Top-" +
                               std::to_string(l) + " list detection",
                           spec});
    }
    return presets;
}

}  // namespace

const std::vector<Preset>& list_presets() {
    static const std::vector<Preset> presets = build_presets();
    return presets;
}

const Preset& find_preset(const std::string& name) {
    for (const Preset& p : list_presets())
        if (p.name == name) return p;
    throw std::invalid_argument("unknown preset '" + name + "'");
}

}  // namespace frislab
