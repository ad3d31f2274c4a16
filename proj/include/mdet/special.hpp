#pragma once

// Log-space special functions. Everything here returns natural logarithms so
// that tails such as exp(-1e9) and moments such as exp(1e3) stay representable.

#include <span>

namespace mdet::special {

/// ln(sum_i exp(v_i)); -inf for an empty span or all -inf entries.
double log_sum_exp(std::span<const double> values);

/// ln(exp(a) + exp(b)).
double log_add_exp(double a, double b);

/// ln(exp(a) - exp(b)) for a >= b; -inf when a == b.
double log_sub_exp(double a, double b);

/// ln Q(s, z), the regularized upper incomplete gamma function.
/// Falls back to a continued fraction when Q underflows double range.
double log_gamma_q(double s, double z);

/// ln P(s, z) = ln(1 - Q(s, z)).
double log_gamma_p(double s, double z);

/// ln of the standard normal density.
double log_normal_pdf(double z);

/// Mills ratio R(z) = Phi(-z) / phi(z), in log form. Valid for all real z.
double log_mills_ratio(double z);

/// ln Phi(-z), the upper standard normal tail.
double log_normal_upper_tail(double z);

}  // namespace mdet::special
