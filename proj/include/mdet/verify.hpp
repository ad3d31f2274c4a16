#pragma once

// Independent oracles: quadrature moments, Monte Carlo moment checks, the
// slowly-decaying counterexample densities, the Stirling approximation and
// the theta exponent split used by the product indeterminacy arguments.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mdet/criteria.hpp"
#include "mdet/distributions.hpp"

namespace mdet {

enum class Support { HalfLine, RealLine };

/// ln of E|X|^k = ln int |x|^k f(x) dx. The half-line form integrates over
/// (0, inf); the real-line form adds the mirrored half. k = 0 gives ln of the
/// total mass. Throws std::runtime_error if the quadrature cannot bracket the
/// integrand's mass.
double quadrature_log_abs_moment(const LogDensityFn& log_density, Support support, int k);

/// E X^k by quadrature. Odd real-line moments are the difference of the halves.
double quadrature_moment(const LogDensityFn& log_density, Support support, int k);

/// Quadrature moments of a family member, straight from its log-density.
double quadrature_moment(const DistributionSpec& d, int k);
double quadrature_log_abs_moment(const DistributionSpec& d, int k);

/// int_x^inf f(t) dt by quadrature.
double quadrature_tail(const LogDensityFn& log_density, double x);

/// ln-density of the lognormal(mu, sigma) law, the classic indeterminate case.
double lognormal_log_density(double x, double mu = 0.0, double sigma = 1.0);

// ---------------------------------------------------------------------------
// Counterexample densities with growth exactly at the determinacy boundary.
//   Stieltjes: f(x) = c exp(-sqrt(x) / (1 + |ln x|^delta)),  x > 0
//   Hamburger: f(x) = c exp(-|x| / (1 + |ln |x||^delta)),    x real
// Both are indeterminate for delta > 1 although their moments grow only
// slightly faster than the determinate threshold.

struct CounterexampleDensity {
    MomentCase kase = MomentCase::Stieltjes;
    double delta = 2.0;
    double log_norming = 0.0;

    /// ln f(x). The Hamburger form extends continuously to x = 0.
    double log_density(double x) const;
    LogDensityFn log_density_fn() const;
    Support support() const {
        return kase == MomentCase::Stieltjes ? Support::HalfLine : Support::RealLine;
    }
};

/// Normalizes the density numerically. Throws std::invalid_argument unless
/// delta > 1.
CounterexampleDensity build_counterexample(MomentCase kase, double delta);

struct GrowthBoundReport {
    bool holds = false;
    double a = 0.0;
    double threshold = 2.0;
    /// Exponent of the certified bound, strictly between threshold and a.
    double b = 0.0;
    /// ln x0 of the tail threshold beyond which f(x) <= c exp(-x^(1/b)) (Stieltjes)
    /// or c exp(-|x|^(1/b)) (Hamburger).
    double log_x0 = 0.0;
    int kmax = 0;
    int last_reliable_k = 0;
    std::vector<int> orders;
    std::vector<double> log_moments;  ///< quadrature values
    std::vector<double> log_bounds;   ///< certified upper bounds
    /// Max of ln m_k / (k ln k) (Stieltjes) or ln m_2k / (2k ln 2k) (Hamburger)
    /// over the tail window [kmax/2, kmax].
    double literal_window_max = 0.0;
    std::vector<std::string> notes;
};

/// Checks m_k = O(k^{ak}) (Stieltjes) or m_2k = O((2k)^{2ak}) (Hamburger) by
/// exhibiting a bound of order k^{bk} with threshold < b < a, valid for all k,
/// and verifying each quadrature moment up to kmax against it. For a at or
/// below the threshold no such bound exists and the report is false.
GrowthBoundReport verify_growth_bound(const CounterexampleDensity& cd, double a, int kmax = 40);

// ---------------------------------------------------------------------------
// Exponent split: theta_1..theta_n in (0, 1) summing to 1 with
//   2 theta_i beta_i < 1 (Stieltjes)  or  theta_i beta_i < 1 (Hamburger).

struct ThetaSplit {
    std::vector<double> thetas;
    MomentCase kase = MomentCase::Stieltjes;
    std::vector<double> betas;
};

/// Thrown when no split exists; inequality() names the violated hypothesis.
class InfeasibleSplit : public std::invalid_argument {
public:
    InfeasibleSplit(std::string inequality, const std::string& message)
        : std::invalid_argument(message), inequality_(std::move(inequality)) {}
    const std::string& inequality() const noexcept { return inequality_; }

private:
    std::string inequality_;
};

/// Smallest slack required of every strict inequality in a returned split.
inline constexpr double kThetaMargin = 1e-9;

/// Feasible split with the last factor taking the residual theta_n.
ThetaSplit theta_split(const std::vector<double>& betas, MomentCase kase);

/// Smallest slack over all strict inequalities of a split (negative if violated).
double theta_split_margin(const ThetaSplit& split);

// ---------------------------------------------------------------------------

/// sqrt(2 pi) x^(x - 1/2) e^(-x). Throws std::domain_error for x <= 0.
double stirling_gamma(double x);
double log_stirling_gamma(double x);

struct MomentCheck {
    int k = 0;
    double analytic = 0.0;
    double empirical = 0.0;
    double standard_error = 0.0;
    double z_score = 0.0;
    bool pass = false;
};

struct McReport {
    std::uint64_t seed = 0;
    std::size_t n = 0;
    double tolerance_se = 4.0;
    std::vector<MomentCheck> checks;

    int failures() const;
    bool passed() const { return failures() == 0; }
};

/// Samples the product factor by factor and compares empirical moments
/// k = 1..kmax with the analytic product moments. Throws std::invalid_argument
/// for kmax outside 1..8 or n < 1e5.
McReport mc_cross_check(const ProductSpec& p, std::uint64_t seed, std::size_t n, int kmax,
                        double tolerance_se = 4.0);

struct OracleCheck {
    std::string factor;
    int k = 0;
    double analytic = 0.0;    ///< exp(log_moment), or 0 for vanishing moments
    double quadrature = 0.0;
    double rel_error = 0.0;   ///< relative to E|X|^k for vanishing moments
    bool pass = false;
};

/// Quadrature against analytic moments for k = 1..kmax.
std::vector<OracleCheck> oracle_cross_check(const DistributionSpec& d, int kmax, double rel_tol = 1e-8);

// ---------------------------------------------------------------------------
// Golden fixtures: tab-separated "k  log_moment  tolerance", one header line.

struct FixtureRow {
    int k = 0;
    double log_moment = 0.0;
    double tolerance = 0.0;
};

std::vector<FixtureRow> read_fixture(const std::string& path);
void write_fixture(const std::string& path, const std::vector<FixtureRow>& rows);

}  // namespace mdet
