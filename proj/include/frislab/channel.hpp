#pragma once

#include <Eigen/Dense>

#include "frislab/rng.hpp"

namespace frislab {

/// Uniform planar array of candidate fluid elements. Spacings are in
/// wavelengths. Elements are indexed row-major: n = j * n_x + i with
/// i in [0, n_x) along the horizontal axis and j in [0, n_z) vertical.
struct FrisGeometry {
    int n_x = 1;
    int n_z = 1;
    double d_x = 0.5;
    double d_z = 0.5;

    int n_tot() const { return n_x * n_z; }
    int horizontal_index(int n) const { return n % n_x; }
    int vertical_index(int n) const { return n / n_x; }

    void validate() const;
};

/// Euclidean distance (in wavelengths) between elements p and q (0-based).
double element_distance(const FrisGeometry& geom, int p, int q);

/// Jakes spatial-correlation matrix with its symmetric PSD square root.
struct CorrelationModel {
    Eigen::MatrixXd j_matrix;
    Eigen::MatrixXd sqrt_factor;
    Eigen::VectorXd eigenvalues;
    bool is_identity = false;

    int size() const { return static_cast<int>(j_matrix.rows()); }
    static CorrelationModel make_identity(int n);
};

/// J_{p,q} = J0(2*pi*d_{p,q}) with the square root taken through an
/// eigendecomposition (negative rounding noise clamped at zero).
CorrelationModel build_jakes_correlation(const FrisGeometry& geom);

/// Symmetric PSD square root of a symmetric matrix whose eigenvalues may
/// carry floating-point noise down to -1e-10.
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& j);

/// One draw of the cascaded channel: f is the Tx-FRIS vector, g the
/// uncorrelated FRIS-Rx matrix and g_tilde = g * sqrt_factor.
struct ChannelRealization {
    Eigen::VectorXcd f;
    Eigen::MatrixXcd g;
    Eigen::MatrixXcd g_tilde;
};

ChannelRealization sample_channels(RandomStream& rng, const FrisGeometry& geom, int n_r,
                                   const CorrelationModel& corr);

/// Buffer-reusing variant for tight Monte Carlo loops. Draw order is fixed:
/// f first, then g in column-major storage order.
void sample_channels_into(RandomStream& rng, int n_tot, int n_r, const CorrelationModel& corr,
                          ChannelRealization& out);

}  // namespace frislab
