#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace frislab {

/// Tolerances and subdivision budget for the adaptive quadrature routines.
struct QuadratureSpec {
    double relative_tolerance = 1e-10;
    double absolute_tolerance = 1e-13;
    int max_subdivisions = 400;

    void validate() const;
};

/// Thrown when adaptive refinement exhausts its subdivision budget. Carries
/// the best estimate reached so the caller can decide whether it is usable.
class ConvergenceError : public std::runtime_error {
  public:
    ConvergenceError(const std::string& what, double best_estimate, double error_estimate)
        : std::runtime_error(what), best_(best_estimate), err_(error_estimate) {}

    double best_estimate() const noexcept { return best_; }
    double error_estimate() const noexcept { return err_; }

  private:
    double best_;
    double err_;
};

/// Bessel function of the first kind, order zero. Absolute error below
/// 1e-12 for |x| <= 1e4.
double bessel_j0(double x);

/// Modified Bessel functions of the second kind, orders zero and one.
/// Relative error below 1e-12 for x in [1e-8, 700]; underflows to zero for
/// large arguments. Both diverge at the origin, so x must be positive.
double bessel_k0(double x);
double bessel_k1(double x);

/// Adaptive Gauss-Kronrod (G7/K15) integration of f over the finite
/// interval [a, b].
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          const QuadratureSpec& spec = {});

/// Integral of f over [a, inf) for integrands with exponential decay.
/// Maps the half-line to [0,1) via r = a + u/(1-u) and refines adaptively.
double integrate_tail(const std::function<double(double)>& f, double a,
                      const QuadratureSpec& spec = {});

/// Root of a continuous monotone function on a bracketing interval
/// [lo, hi] with g(lo)*g(hi) <= 0. Brent iteration with a bisection
/// fallback; stops once |g(x)| <= tol or the bracket width is <= tol.
double solve_root_monotone(const std::function<double(double)>& g, double lo, double hi,
                           double tol);

/// Fixed-order Gauss-Legendre estimate of the integral of f over [a, b].
double gauss_legendre(const std::function<double(double)>& f, double a, double b, int nodes);

}  // namespace frislab
