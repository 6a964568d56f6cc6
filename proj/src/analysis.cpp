#include "frislab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "frislab/numerics.hpp"

namespace frislab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double double_rayleigh_pdf(double r) { return 4.0 * r * bessel_k0(2.0 * r); }

// Pr(r > t) = 2 t K1(2t).
double tail_probability(double t) {
    if (t <= 0.0) return 1.0;
    return 2.0 * t * bessel_k1(2.0 * t);
}

// M2(t) = int_t^inf 4 r^3 K0(2r) dr in closed form.
double second_incomplete_moment(double t) {
    if (t <= 0.0) return 1.0;
    const double k0 = bessel_k0(2.0 * t);
    const double k1 = bessel_k1(2.0 * t);
    return 2.0 * t * t * t * k1 + 2.0 * t * t * k0 + 2.0 * t * k1;
}

const QuadratureSpec kStatsQuad{1e-11, 1e-14, 2000};

}  // namespace

EffectiveStats continuous_stats(double p_sel) {
    if (!(p_sel > 0.0) || p_sel > 1.0)
        throw std::invalid_argument("continuous_stats: p_sel must lie in (0, 1]");
    double tau = 0.0;
    if (p_sel < 1.0) {
        tau = solve_root_monotone([p_sel](double t) { return tail_probability(t) - p_sel; },
                                  1e-8, 50.0, 1e-12);
    }
    const double m0 = tail_probability(tau);
    const double m2 = second_incomplete_moment(tau);
    const double m1 = integrate_tail(
        [](double r) { return 4.0 * r * r * bessel_k0(2.0 * r); }, tau, kStatsQuad);
    EffectiveStats stats;
    stats.p_sel = p_sel;
    stats.threshold = tau;
    stats.mu_eff = m1 / m0;
    stats.e2_eff = m2 / m0;
    stats.sigma2_eff = stats.e2_eff - stats.mu_eff * stats.mu_eff;
    stats.e2b_eff = 0.0;
    return stats;
}

namespace {

// Incomplete moments of the quantized-phase selection event {a > tau} with
// a = r cos(eps), eps ~ U[-step/2, step/2]. The integrand over r splits at
// r_star = tau / cos(step/2), beyond which the angular window saturates at
// phi = step/2.
struct QuantizedMoments {
    double m0a, m1a, m2a, m2r;
};

QuantizedMoments quantized_moments(double tau, double step) {
    const double half = 0.5 * step;
    const double cos_half = std::cos(half);
    const double sin_half = std::sin(half);
    const bool saturates = cos_half > 1e-12;  // q = 1 never saturates (half = pi/2)
    const double r_star = saturates ? tau / cos_half : std::numeric_limits<double>::infinity();

    const auto phi = [tau, half](double r) {
        if (r <= tau) return 0.0;
        double c = tau / r;
        if (c > 1.0) c = 1.0;
        return std::min(std::acos(c), half);
    };

    QuantizedMoments m{0.0, 0.0, 0.0, 0.0};
    if (tau <= 0.0) {
        // phi == half everywhere: the angular factor is constant.
        m.m0a = 1.0;
        m.m1a = (2.0 * sin_half / step) *
                integrate_tail([](double r) { return r * double_rayleigh_pdf(r); }, 0.0,
                               kStatsQuad);
        m.m2a = (half + 0.5 * std::sin(2.0 * half)) / step;  // times E[r^2] = 1
        m.m2r = 1.0;
        return m;
    }

    // Region below saturation: phi = acos(tau/r).
    const double hi = saturates ? r_star : 0.0;
    if (saturates && r_star > tau) {
        m.m0a += integrate_adaptive(
            [&](double r) { return 2.0 * phi(r) / step * double_rayleigh_pdf(r); }, tau, hi,
            kStatsQuad);
        m.m1a += integrate_adaptive(
            [&](double r) { return 2.0 * r * std::sin(phi(r)) / step * double_rayleigh_pdf(r); },
            tau, hi, kStatsQuad);
        m.m2a += integrate_adaptive(
            [&](double r) {
                const double p = phi(r);
                return r * r / step * (p + 0.5 * std::sin(2.0 * p)) * double_rayleigh_pdf(r);
            },
            tau, hi, kStatsQuad);
        m.m2r += integrate_adaptive(
            [&](double r) { return 2.0 * r * r * phi(r) / step * double_rayleigh_pdf(r); }, tau,
            hi, kStatsQuad);
        // Saturated region in closed form where possible.
        m.m0a += tail_probability(r_star);
        m.m1a += (2.0 * sin_half / step) *
                 integrate_tail([](double r) { return r * double_rayleigh_pdf(r); }, r_star,
                                kStatsQuad);
        m.m2a += ((half + 0.5 * std::sin(2.0 * half)) / step) * second_incomplete_moment(r_star);
        m.m2r += second_incomplete_moment(r_star);
    } else {
        // q = 1: the acos window applies on the whole tail.
        m.m0a = integrate_tail(
            [&](double r) { return 2.0 * phi(r) / step * double_rayleigh_pdf(r); }, tau,
            kStatsQuad);
        m.m1a = integrate_tail(
            [&](double r) { return 2.0 * r * std::sin(phi(r)) / step * double_rayleigh_pdf(r); },
            tau, kStatsQuad);
        m.m2a = integrate_tail(
            [&](double r) {
                const double p = phi(r);
                return r * r / step * (p + 0.5 * std::sin(2.0 * p)) * double_rayleigh_pdf(r);
            },
            tau, kStatsQuad);
        m.m2r = integrate_tail(
            [&](double r) { return 2.0 * r * r * phi(r) / step * double_rayleigh_pdf(r); }, tau,
            kStatsQuad);
    }
    return m;
}

}  // namespace

EffectiveStats quantized_stats(double p_sel, int q_bits) {
    if (!(p_sel > 0.0) || p_sel > 1.0)
        throw std::invalid_argument("quantized_stats: p_sel must lie in (0, 1]");
    if (q_bits < 1) throw std::invalid_argument("quantized_stats: q_bits must be >= 1");
    const double step = kTwoPi / static_cast<double>(1u << q_bits);
    double tau = 0.0;
    if (p_sel < 1.0) {
        tau = solve_root_monotone(
            [step, p_sel](double t) { return quantized_moments(t, step).m0a - p_sel; }, 1e-8,
            50.0, 1e-11);
    }
    const QuantizedMoments m = quantized_moments(tau, step);
    EffectiveStats stats;
    stats.p_sel = p_sel;
    stats.threshold = tau;
    stats.mu_eff = m.m1a / m.m0a;
    stats.sigma2_eff = m.m2a / m.m0a - stats.mu_eff * stats.mu_eff;
    stats.e2_eff = m.m2r / m.m0a;
    stats.e2b_eff = (m.m2r - m.m2a) / m.m0a;
    return stats;
}

AggregateStats aggregate(const EffectiveStats& stats, int k_sel) {
    if (k_sel < 1) throw std::invalid_argument("aggregate: k_sel must be >= 1");
    const double k = static_cast<double>(k_sel);
    return {k * stats.mu_eff, k * stats.sigma2_eff, k * stats.e2_eff};
}

double gaussian_quadratic_mgf(const GaussianQuadraticForm& form, double s) {
    if (s < 0.0) throw std::invalid_argument("gaussian_quadratic_mgf: s must be >= 0");
    if (form.covariance.rows() != form.covariance.cols() ||
        form.mean.size() != form.covariance.rows())
        throw std::invalid_argument("gaussian_quadratic_mgf: dimension mismatch");
    if ((form.covariance - form.covariance.transpose()).cwiseAbs().maxCoeff() >
        1e-10 * std::max(1.0, form.covariance.cwiseAbs().maxCoeff()))
        throw std::invalid_argument("gaussian_quadratic_mgf: covariance must be symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(form.covariance);
    const Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
    const Eigen::VectorXd mt = es.eigenvectors().transpose() * form.mean;
    double log_det = 0.0;
    double expo = 0.0;
    for (Eigen::Index k = 0; k < lam.size(); ++k) {
        const double denom = 1.0 + 2.0 * s * lam(k);
        log_det += std::log(denom);
        expo += mt(k) * mt(k) / denom;
    }
    return std::exp(-0.5 * log_det - s * expo);
}

double mgf_case1(double s, std::complex<double> x, std::complex<double> x_hat,
                 const EffectiveStats& stats, int k_sel, int n_r) {
    if (n_r < 2) throw std::invalid_argument("mgf_case1: index errors need n_r >= 2");
    if (s < 0.0) throw std::invalid_argument("mgf_case1: s must be >= 0");
    const double k = static_cast<double>(k_sel);
    const double xr = x.real(), xi = x.imag();
    const double hr = x_hat.real(), hi = x_hat.imag();
    const double ks2 = k * stats.sigma2_eff;
    const double a_hat = 0.5 * k * stats.e2_eff * std::norm(x_hat);
    const double a_x = 0.5 * k * stats.e2_eff * std::norm(x);
    const double c_eff = 0.5 * k * stats.mu_eff * stats.mu_eff;

    GaussianQuadraticForm form;
    form.mean.resize(4);
    form.mean << xr, xi, -hr, -hi;
    form.mean *= k * stats.mu_eff;

    const double s12 = ks2 * xr * xi;
    const double s34 = ks2 * hr * hi;
    const double s13 = c_eff * (-xr * hr + xi * hi);
    const double s14 = -c_eff * (xr * hi + xi * hr);
    const double s23 = s14;
    const double s24 = -s13;
    form.covariance.resize(4, 4);
    form.covariance << ks2 * xr * xr + a_hat, s12, s13, s14,
        s12, ks2 * xi * xi + a_hat, s23, s24,
        s13, s23, ks2 * hr * hr + a_x, s34,
        s14, s24, s34, ks2 * hi * hi + a_x;

    const double cross = 1.0 + s * k * stats.e2_eff * (std::norm(x) + std::norm(x_hat));
    return gaussian_quadratic_mgf(form, s) * std::pow(cross, -(n_r - 2));
}

double mgf_case2(double s, std::complex<double> x, std::complex<double> x_hat,
                 const EffectiveStats& stats, int k_sel, int n_r) {
    if (x == x_hat) throw std::invalid_argument("mgf_case2: degenerate event x == x_hat");
    if (s < 0.0) throw std::invalid_argument("mgf_case2: s must be >= 0");
    const double k = static_cast<double>(k_sel);
    const double d2 = std::norm(x - x_hat);
    const double mu_h = k * stats.mu_eff;
    const double sig_h2 = k * stats.sigma2_eff;
    const double denom = 1.0 + 2.0 * s * sig_h2 * d2;
    const double focused = std::exp(-mu_h * mu_h * d2 * s / denom) / std::sqrt(denom);
    return focused * std::pow(1.0 + s * k * stats.e2_eff * d2, -(n_r - 1));
}

double upep(const std::function<double(double)>& mgf, double n0, const UpepMethod& method) {
    if (!(n0 > 0.0)) throw std::invalid_argument("upep: noise variance must be positive");
    if (method.kind == UpepMethod::Kind::two_exp)
        return mgf(1.0 / (4.0 * n0)) / 12.0 + mgf(1.0 / (3.0 * n0)) / 4.0;
    // Craig's representation; the lower limit dodges the sin^-2 pole where
    // the integrand tends to mgf(inf) * 0.
    const double lo = 1e-9;
    const double hi = 0.5 * M_PI;
    const double integral = gauss_legendre(
        [&mgf, n0](double eta) {
            const double sn = std::sin(eta);
            return mgf(1.0 / (4.0 * n0 * sn * sn));
        },
        lo, hi, method.nodes);
    return integral / M_PI;
}

double union_bound_ber(const FrameConfig& cfg, const EffectiveStats& stats, double n0,
                       const UpepMethod& method) {
    cfg.validate();
    const Constellation constellation = make_constellation(cfg.m, cfg.family);
    const int m = cfg.m;
    const int n_r = cfg.n_r;
    const int b1 = cfg.index_bits();
    const int b = cfg.bits_per_frame();
    // UPEPs depend on the symbols only, so the antenna sums collapse:
    // the index-bit Hamming weights sum to n_r^2 b1 / 2 over ordered pairs.
    double total = 0.0;
    for (int lx = 0; lx < m; ++lx) {
        for (int lh = 0; lh < m; ++lh) {
            const std::complex<double> x = constellation.point(lx);
            const std::complex<double> xh = constellation.point(lh);
            const int e_sym = __builtin_popcount(static_cast<unsigned>(lx ^ lh));
            if (n_r >= 2) {
                const double p1 = upep(
                    [&](double s) { return mgf_case1(s, x, xh, stats, cfg.k_sel, n_r); }, n0,
                    method);
                total += p1 * (0.5 * n_r * n_r * b1 +
                               static_cast<double>(n_r) * (n_r - 1) * e_sym);
            }
            if (lx != lh) {
                const double p2 = upep(
                    [&](double s) { return mgf_case2(s, x, xh, stats, cfg.k_sel, n_r); }, n0,
                    method);
                total += static_cast<double>(n_r) * p2 * e_sym;
            }
        }
    }
    return total / (static_cast<double>(m) * n_r * b);
}

bool OrderingReport::all_satisfied() const {
    for (const auto& p : points)
        if (!p.satisfied) return false;
    return majorization_ok;
}

OrderingReport verify_identity_lower_bound(const CorrelationModel& corr,
                                           const Eigen::VectorXcd& v_i,
                                           const Eigen::VectorXcd& v_i_hat,
                                           std::complex<double> x, std::complex<double> x_hat,
                                           int n_r, const std::vector<double>& s_grid,
                                           int sample_budget, RandomStream& rng) {
    const Eigen::Index n = v_i.size();
    if (v_i_hat.size() != n || corr.size() != n)
        throw std::invalid_argument("verify_identity_lower_bound: dimension mismatch");
    const Eigen::VectorXcd a_diag = x * v_i - x_hat * v_i_hat;

    // B_J = A^H J A; under J = I it reduces to diag(|a_n|^2).
    Eigen::MatrixXcd b_j = a_diag.conjugate().asDiagonal() *
                           corr.j_matrix.cast<std::complex<double>>() *
                           a_diag.asDiagonal().toDenseMatrix();
    const Eigen::VectorXd b_diag = a_diag.cwiseAbs2();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(b_j);
    Eigen::VectorXd lam = es.eigenvalues();
    std::sort(lam.data(), lam.data() + lam.size(), std::greater<double>());
    Eigen::VectorXd diag_sorted = b_diag;
    std::sort(diag_sorted.data(), diag_sorted.data() + diag_sorted.size(),
              std::greater<double>());
    bool major = true;
    double lam_sum = 0.0, diag_sum = 0.0;
    const double tol = 1e-8 * std::max(1.0, b_diag.sum());
    for (Eigen::Index kidx = 0; kidx < n; ++kidx) {
        lam_sum += lam(kidx);
        diag_sum += diag_sorted(kidx);
        if (lam_sum < diag_sum - tol) major = false;
    }
    if (std::abs(lam_sum - diag_sum) > tol) major = false;

    OrderingReport report;
    report.majorization_ok = major;
    const std::size_t ns = s_grid.size();
    std::vector<double> sum_j(ns, 0.0), sum_i(ns, 0.0), sum_d(ns, 0.0), sum_d2(ns, 0.0);
    Eigen::VectorXcd f(n), af(n), saf(n);
    for (int it = 0; it < sample_budget; ++it) {
        for (Eigen::Index kidx = 0; kidx < n; ++kidx) f(kidx) = rng.complex_gaussian();
        af = a_diag.cwiseProduct(f);
        saf = corr.sqrt_factor * af;
        const double q_j = saf.squaredNorm();
        const double q_i = b_diag.dot(f.cwiseAbs2());
        for (std::size_t k = 0; k < ns; ++k) {
            const double t_j = std::pow(1.0 + s_grid[k] * q_j, -n_r);
            const double t_i = std::pow(1.0 + s_grid[k] * q_i, -n_r);
            const double d = t_j - t_i;
            sum_j[k] += t_j;
            sum_i[k] += t_i;
            sum_d[k] += d;
            sum_d2[k] += d * d;
        }
    }
    for (std::size_t k = 0; k < ns; ++k) {
        OrderingPoint pt;
        pt.s = s_grid[k];
        const double nn = static_cast<double>(sample_budget);
        pt.mgf_j = sum_j[k] / nn;
        pt.mgf_i = sum_i[k] / nn;
        pt.diff = sum_d[k] / nn;
        const double var = std::max(0.0, sum_d2[k] / nn - pt.diff * pt.diff);
        pt.diff_stderr = std::sqrt(var / nn);
        pt.satisfied = pt.diff >= -3.0 * pt.diff_stderr;
        report.points.push_back(pt);
    }
    return report;
}

}  // namespace frislab
