#include <algorithm>
#include <cmath>

#include <doctest.h>

#include "frislab/channel.hpp"
#include "oracles.hpp"

using namespace frislab;

TEST_CASE("element_distance") {
    FrisGeometry geom{8, 8, 0.5, 0.5};
    CHECK(element_distance(geom, 3, 3) == 0.0);
    CHECK(element_distance(geom, 0, 1) == doctest::Approx(0.5));        // horizontal step
    FrisGeometry square{2, 2, 0.5, 0.5};
    CHECK(element_distance(square, 0, 3) ==
          doctest::Approx(0.7071067811865476).epsilon(1e-15));          // diagonal
    CHECK_THROWS_AS(element_distance(square, 0, 4), std::out_of_range);
}

TEST_CASE("jakes correlation diagonal and zero-spacing") {
    CorrelationModel model = build_jakes_correlation({4, 3, 0.3, 0.7});
    for (int i = 0; i < 12; ++i) CHECK(model.j_matrix(i, i) == doctest::Approx(1.0));

    // Spacing at (first J0 zero)/(2 pi) makes adjacent elements uncorrelated.
    const double d0 = oracle::j0_first_zero() / (2.0 * M_PI);
    CorrelationModel pair = build_jakes_correlation({2, 1, d0, d0});
    CHECK(std::abs(pair.j_matrix(0, 1)) < 1e-9);
}

TEST_CASE("weak-correlation regime at two-wavelength spacing") {
    // Nearest neighbours dominate: J0(4 pi) = 0.15750739... by the series
    // oracle (long-double ascending series).
    const double j0_4pi = oracle::j0_series(4.0 * M_PI);
    CHECK(j0_4pi == doctest::Approx(0.157507392482138).epsilon(1e-8));
    CorrelationModel model = build_jakes_correlation({10, 6, 2.0, 2.0});
    double max_off = 0.0;
    for (int p = 0; p < model.size(); ++p)
        for (int q = 0; q < model.size(); ++q)
            if (p != q) max_off = std::max(max_off, std::abs(model.j_matrix(p, q)));
    CHECK(max_off == doctest::Approx(j0_4pi).epsilon(1e-9));
    CHECK(max_off < 0.16);
}

TEST_CASE("psd_sqrt basics") {
    Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(3, 3);
    CHECK((psd_sqrt(eye) - eye).cwiseAbs().maxCoeff() < 1e-12);

    Eigen::MatrixXd d = Eigen::Vector2d(4.0, 9.0).asDiagonal();
    Eigen::MatrixXd root = psd_sqrt(d);
    CHECK(root(0, 0) == doctest::Approx(2.0));
    CHECK(root(1, 1) == doctest::Approx(3.0));

    Eigen::MatrixXd asym = eye;
    asym(0, 1) = 1e-3;
    CHECK_THROWS_AS(psd_sqrt(asym), std::invalid_argument);
}

TEST_CASE("sqrt factor reconstructs J for the dense grid") {
    CorrelationModel model = build_jakes_correlation({25, 10, 0.1875, 2.0 / 9.0});
    const Eigen::MatrixXd recon = model.sqrt_factor * model.sqrt_factor.transpose();
    const double rel = (recon - model.j_matrix).norm() / model.j_matrix.norm();
    CHECK(rel < 1e-9);
    CHECK((model.sqrt_factor - model.sqrt_factor.transpose()).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(model.eigenvalues.minCoeff() >= 0.0);
}

TEST_CASE("J is invariant under distance-preserving relabeling") {
    FrisGeometry geom{5, 5, 0.4, 0.4};
    CorrelationModel model = build_jakes_correlation(geom);
    const int n = geom.n_tot();
    // Transpose the square grid: (i, j) -> (j, i). Entries agree to
    // rounding (FP contraction keeps the distance only ulp-identical).
    std::vector<int> perm(n);
    for (int e = 0; e < n; ++e)
        perm[e] = geom.horizontal_index(e) * geom.n_x + geom.vertical_index(e);
    double worst = 0.0;
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
            worst = std::max(worst,
                             std::abs(model.j_matrix(perm[p], perm[q]) - model.j_matrix(p, q)));
    CHECK(worst < 1e-13);
    // The sorted multiset of entries is preserved as well.
    std::vector<double> a(model.j_matrix.data(), model.j_matrix.data() + n * n);
    Eigen::MatrixXd permuted(n, n);
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) permuted(p, q) = model.j_matrix(perm[p], perm[q]);
    std::vector<double> b(permuted.data(), permuted.data() + n * n);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-13);
}

TEST_CASE("sample_channels determinism and construction") {
    FrisGeometry geom{4, 2, 0.5, 0.5};
    CorrelationModel corr = build_jakes_correlation(geom);
    RandomStream a(42), b(42);
    ChannelRealization ca = sample_channels(a, geom, 3, corr);
    ChannelRealization cb = sample_channels(b, geom, 3, corr);
    CHECK(ca.f == cb.f);
    CHECK(ca.g == cb.g);
    CHECK((ca.g_tilde - cb.g_tilde).cwiseAbs().maxCoeff() == 0.0);
    // g_tilde is g * sqrt_factor by construction.
    CHECK((ca.g_tilde - ca.g * corr.sqrt_factor).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("sampled channels have unit variance under identity correlation") {
    FrisGeometry geom{8, 4, 0.5, 0.5};
    CorrelationModel corr = CorrelationModel::make_identity(geom.n_tot());
    RandomStream rng(7);
    double sum = 0.0;
    std::int64_t count = 0;
    ChannelRealization chan;
    for (int it = 0; it < 200; ++it) {
        sample_channels_into(rng, geom.n_tot(), 2, corr, chan);
        sum += chan.g_tilde.cwiseAbs2().sum();
        count += chan.g_tilde.size();
    }
    CHECK(sum / count == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("empirical column correlation matches J") {
    FrisGeometry geom{4, 2, 0.25, 0.25};  // strongly correlated pair grid
    CorrelationModel corr = build_jakes_correlation(geom);
    RandomStream rng(11);
    const int n_r = 2;
    const int draws = 60000;
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(geom.n_tot(), geom.n_tot());
    double re_acc = 0.0;
    ChannelRealization chan;
    for (int it = 0; it < draws; ++it) {
        sample_channels_into(rng, geom.n_tot(), n_r, corr, chan);
        acc += (chan.g_tilde.adjoint() * chan.g_tilde).real();
        re_acc += chan.g_tilde.real()(0, 0) * chan.g_tilde.real()(0, 1);
    }
    acc /= draws * n_r;
    // E[g^H_p g_q] = N_r J_pq per draw pair; normalized above.
    const double err = (acc - corr.j_matrix).cwiseAbs().maxCoeff();
    CHECK(err < 3.5 / std::sqrt(static_cast<double>(draws) * n_r));
    // Real parts carry half the correlation: E[Re(p) Re(q)] = J_pq / 2.
    CHECK(re_acc / draws == doctest::Approx(0.5 * corr.j_matrix(0, 1)).epsilon(0.05));
}
