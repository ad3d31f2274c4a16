#pragma once

// The theorem engine. Given a product of independent GG/DGG/IG factors it
// decides moment determinacy from closed-form growth exponents and, for the
// indeterminacy direction, verifies the hazard, tail and monotonicity side
// conditions numerically before committing to a conclusion.

#include <optional>
#include <string>
#include <vector>

#include "mdet/criteria.hpp"
#include "mdet/distributions.hpp"

namespace mdet {

enum class Conclusion { Determinate, Indeterminate, Inconclusive };

std::string to_string(Conclusion c);  // "M-det", "M-indet", "inconclusive"

struct FactorExponent {
    std::string factor;            ///< canonical description
    double exponent = 0.0;         ///< a_i with m_{i,k} = O(k^{a_i k})
    std::optional<Rational> exact; ///< exact a_i when beta is rational
};

struct Verdict {
    Conclusion conclusion = Conclusion::Inconclusive;
    std::string rule;                    ///< theorem applied, e.g. "Theorem 7"
    std::vector<std::string> citations;  ///< corollaries/lemmas supporting the rule
    SupportClass support = SupportClass::Stieltjes;
    std::vector<FactorExponent> exponents;
    double exponent_sum = 0.0;
    /// Exact sum when every exponent is exact and the sum fits the rational type.
    std::optional<Rational> exponent_sum_exact;
    /// True when the threshold comparison was done in exact arithmetic.
    bool exact_comparison = false;
    double threshold = 2.0;
    /// Sum of fitted ratio rates (ratio route only).
    std::optional<double> ratio_sum;
    std::vector<CriterionReport> side_conditions;
    std::vector<std::string> failed_conditions;
    std::vector<std::string> caveats;
    std::optional<double> x0;  ///< tail threshold at which side conditions verified
    std::vector<double> thetas;
    std::vector<std::string> theta_factors;  ///< factor order used by the split
    std::string decreasing_factor;           ///< factor supplying condition (i)
};

struct DecisionConfig {
    int horizon = 200;
    double x0 = 1.0;
    CriteriaConfig criteria{};
    /// Float exponent sums this close to the threshold are inconclusive.
    double boundary_band = 0.005;
    /// Side-condition grid runs over [x0, grid_span * x0].
    double grid_span = 1e3;
    int grid_points = 61;
    /// x0 is doubled up to this many times while searching for a threshold.
    int x0_search_steps = 12;
    /// Slack per factor on the summed ratio estimates.
    double ratio_slack = 1e-3;
    KreinSchedule krein{};
};

/// a_i: 1/beta for GG and DGG, 1 for IG.
double factor_exponent(const DistributionSpec& d);
std::optional<Rational> exact_factor_exponent(const DistributionSpec& d);

/// Single-variable decision: growth threshold 2 (Stieltjes) or 1 (Hamburger).
Verdict decide_single(const DistributionSpec& d, const DecisionConfig& cfg = {});

/// Product decision. Falls back to decide_single for one factor.
Verdict decide_product(const ProductSpec& p, const DecisionConfig& cfg = {});

/// Determinacy through summed moment-ratio rates. Never concludes M-indet.
Verdict ratio_route(const ProductSpec& p, const DecisionConfig& cfg = {});

/// Deterministic human-readable trail of a verdict.
std::string explain(const Verdict& v);

// Side-condition verifiers, exposed for testing and the CLI.

/// f/(1-F) >= A/x on the grid; A is the grid minimum of x f(x)/(1-F(x)).
CriterionReport verify_hazard_bound(const DistributionSpec& d, double x0, const DecisionConfig& cfg = {});

/// 1-F(x) >= B x^g exp(-a x^b) with the family's native (a, b, g); B fitted
/// as the grid minimum of the ratio.
CriterionReport verify_tail_bound(const DistributionSpec& d, double x0, const DecisionConfig& cfg = {});

/// Density decreasing on [x0, inf), checked through L_f > 0 on the grid.
CriterionReport verify_decreasing(const DistributionSpec& d, double x0, const DecisionConfig& cfg = {});

/// Native tail-bound parameters (alpha, beta, gamma) used by verify_tail_bound.
struct TailShape {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
};
TailShape native_tail_shape(const DistributionSpec& d);

}  // namespace mdet
