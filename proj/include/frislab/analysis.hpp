#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "frislab/channel.hpp"
#include "frislab/modem.hpp"

namespace frislab {

/// Per-element statistics of the selected cascaded links under the
/// tail-threshold model. For continuous phases e2b_eff is exactly zero and
/// e2_eff = mu_eff^2 + sigma2_eff; for quantized phases e2_eff carries the
/// total link energy and e2b_eff the quadrature leakage.
struct EffectiveStats {
    double mu_eff = 0.0;
    double sigma2_eff = 0.0;
    double e2_eff = 0.0;
    double e2b_eff = 0.0;
    double threshold = 0.0;
    double p_sel = 1.0;
};

/// Truncated double-Rayleigh statistics for continuous phase alignment;
/// the threshold solves 2 tau K1(2 tau) = p_sel.
EffectiveStats continuous_stats(double p_sel);

/// Joint magnitude/quantization-error statistics for Q-bit phases with
/// selection on the in-phase projection a = r cos(eps).
EffectiveStats quantized_stats(double p_sel, int q_bits);

struct AggregateStats {
    double mean_focused;
    double var_focused;
    double energy_unfocused;
};

/// CLT aggregation over k_sel selected elements.
AggregateStats aggregate(const EffectiveStats& stats, int k_sel);

/// Real Gaussian vector y ~ N(mean, covariance) backing the quadratic form
/// Z = ||y||^2.
struct GaussianQuadraticForm {
    Eigen::VectorXd mean;
    Eigen::MatrixXd covariance;
};

/// E[exp(-s ||y||^2)] evaluated in the eigenbasis of the covariance, which
/// keeps singular covariances well defined.
double gaussian_quadratic_mgf(const GaussianQuadraticForm& form, double s);

/// MGF of the decision metric for index-error events (i != i_hat).
double mgf_case1(double s, std::complex<double> x, std::complex<double> x_hat,
                 const EffectiveStats& stats, int k_sel, int n_r);

/// MGF of the decision metric for symbol-only events (i = i_hat, x != x_hat).
double mgf_case2(double s, std::complex<double> x, std::complex<double> x_hat,
                 const EffectiveStats& stats, int k_sel, int n_r);

/// UPEP evaluation method: Craig's finite integral (Gauss-Legendre) or the
/// two-exponential approximation of the Q-function.
struct UpepMethod {
    enum class Kind { craig, two_exp };
    Kind kind = Kind::craig;
    int nodes = 64;

    static UpepMethod craig(int nodes = 64) { return {Kind::craig, nodes}; }
    static UpepMethod two_exp() { return {Kind::two_exp, 0}; }
};

double upep(const std::function<double(double)>& mgf, double n0,
            const UpepMethod& method = UpepMethod::craig());

/// Union bound on the bit error rate under J = I, using the same bit
/// labeling as the modem (natural-binary index bits, Gray symbol bits).
double union_bound_ber(const FrameConfig& cfg, const EffectiveStats& stats, double n0,
                       const UpepMethod& method = UpepMethod::craig());

/// Monte Carlo check of the identity-correlation lower bound for one error
/// event (Appendix ordering M(s;J) >= M(s;I) plus the Schur-Horn
/// majorization of eigenvalues over the diagonal).
struct OrderingPoint {
    double s;
    double mgf_j;
    double mgf_i;
    double diff;         // mean of paired differences
    double diff_stderr;  // standard error of the paired differences
    bool satisfied;      // diff >= -3 * stderr
};

struct OrderingReport {
    std::vector<OrderingPoint> points;
    bool majorization_ok = false;
    bool all_satisfied() const;
};

OrderingReport verify_identity_lower_bound(const CorrelationModel& corr,
                                           const Eigen::VectorXcd& v_i,
                                           const Eigen::VectorXcd& v_i_hat,
                                           std::complex<double> x, std::complex<double> x_hat,
                                           int n_r, const std::vector<double>& s_grid,
                                           int sample_budget, RandomStream& rng);

}  // namespace frislab
