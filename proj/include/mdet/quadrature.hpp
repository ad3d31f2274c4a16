#pragma once

// Adaptive quadrature helpers shared by the moment oracle, normalization of
// the counterexample densities and the Krein ladder.

#include <functional>

namespace mdet::quadrature {

/// Integral of f over the finite interval [a, b] with adaptive Gauss-Kronrod.
/// Throws std::runtime_error if the result is not finite.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-12);

struct LogIntegral {
    double log_value = 0.0;  ///< ln of the integral
    double t_lo = 0.0;       ///< effective integration window in t = ln x
    double t_hi = 0.0;
};

/// ln of the integral over x in (0, inf) of exp(log_integrand(x)).
///
/// Integrates in t = ln x, where the integrand exp(log_integrand(e^t) + t) is
/// typically a single smooth bump. A coarse scan locates the bump; everything
/// more than 60 nats below the peak is discarded (mass fraction < 1e-24 for
/// integrands that decay monotonically away from the bump). Throws
/// std::runtime_error when the integrand is -inf everywhere or the window
/// touches the scan boundary.
LogIntegral log_integrate_half_line(const std::function<double(double)>& log_integrand);

}  // namespace mdet::quadrature
