#include "frislab/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "frislab/numerics.hpp"

namespace frislab {

void FrisGeometry::validate() const {
    if (n_x < 1 || n_z < 1)
        throw std::invalid_argument("FrisGeometry: element counts must be positive");
    if (!(d_x > 0.0) || !(d_z > 0.0))
        throw std::invalid_argument("FrisGeometry: spacings must be positive");
}

double element_distance(const FrisGeometry& geom, int p, int q) {
    if (p < 0 || q < 0 || p >= geom.n_tot() || q >= geom.n_tot())
        throw std::out_of_range("element_distance: element index out of range");
    const double di = geom.d_x * (geom.horizontal_index(p) - geom.horizontal_index(q));
    const double dj = geom.d_z * (geom.vertical_index(p) - geom.vertical_index(q));
    return std::sqrt(di * di + dj * dj);
}

CorrelationModel CorrelationModel::make_identity(int n) {
    CorrelationModel model;
    model.j_matrix = Eigen::MatrixXd::Identity(n, n);
    model.sqrt_factor = model.j_matrix;
    model.eigenvalues = Eigen::VectorXd::Ones(n);
    model.is_identity = true;
    return model;
}

Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& j) {
    if (j.rows() != j.cols()) throw std::invalid_argument("psd_sqrt: matrix must be square");
    const double asym = (j - j.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-10) throw std::invalid_argument("psd_sqrt: matrix is not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
    if (es.info() != Eigen::Success) throw std::runtime_error("psd_sqrt: eigensolver failed");
    Eigen::VectorXd lam = es.eigenvalues();
    if (lam.minCoeff() < -1e-10)
        throw std::invalid_argument("psd_sqrt: eigenvalue below -1e-10, matrix is not PSD");
    lam = lam.cwiseMax(0.0);
    return es.eigenvectors() * lam.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
}

CorrelationModel build_jakes_correlation(const FrisGeometry& geom) {
    geom.validate();
    const int n = geom.n_tot();
    CorrelationModel model;
    model.j_matrix.resize(n, n);
    for (int p = 0; p < n; ++p) {
        model.j_matrix(p, p) = 1.0;
        for (int q = p + 1; q < n; ++q) {
            const double v = bessel_j0(2.0 * M_PI * element_distance(geom, p, q));
            model.j_matrix(p, q) = v;
            model.j_matrix(q, p) = v;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(model.j_matrix);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("build_jakes_correlation: eigensolver failed");
    model.eigenvalues = es.eigenvalues();
    if (model.eigenvalues.minCoeff() < -1e-6)
        throw std::runtime_error(
            "build_jakes_correlation: strongly negative eigenvalue; correlation model broken");
    model.eigenvalues = model.eigenvalues.cwiseMax(0.0);
    model.sqrt_factor = es.eigenvectors() * model.eigenvalues.cwiseSqrt().asDiagonal() *
                        es.eigenvectors().transpose();
    return model;
}

void sample_channels_into(RandomStream& rng, int n_tot, int n_r, const CorrelationModel& corr,
                          ChannelRealization& out) {
    if (n_r < 1) throw std::invalid_argument("sample_channels: n_r must be >= 1");
    if (corr.size() != n_tot)
        throw std::invalid_argument("sample_channels: correlation size does not match geometry");
    out.f.resize(n_tot);
    for (int n = 0; n < n_tot; ++n) out.f(n) = rng.complex_gaussian();
    out.g.resize(n_r, n_tot);
    for (Eigen::Index k = 0; k < out.g.size(); ++k) out.g.data()[k] = rng.complex_gaussian();
    if (corr.is_identity) {
        out.g_tilde = out.g;
        return;
    }
    out.g_tilde.resize(n_r, n_tot);
    // sqrt_factor is real, so correlate the real and imaginary parts with
    // two real GEMMs instead of one complex one.
    out.g_tilde.real() = out.g.real() * corr.sqrt_factor;
    out.g_tilde.imag() = out.g.imag() * corr.sqrt_factor;
}

ChannelRealization sample_channels(RandomStream& rng, const FrisGeometry& geom, int n_r,
                                   const CorrelationModel& corr) {
    geom.validate();
    ChannelRealization chan;
    sample_channels_into(rng, geom.n_tot(), n_r, corr, chan);
    return chan;
}

}  // namespace frislab
