#pragma once

// Numerical evaluators for the checkable moment-determinacy conditions:
// growth exponents, ratio rates, Hardy/Cramer bounds, Carleman sums, Krein
// integrals and Lin's Condition L.
//
// The underlying conditions are asymptotic O(.) statements. Every evaluator
// decides from a finite horizon and reports `Inconclusive` when its evidence
// sits inside the tolerance band of the relevant threshold.

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "mdet/distributions.hpp"

namespace mdet {

enum class Parity { AllK, EvenOnly };

/// k -> ln m_k. All-k sequences hold k = 1..K; even-only sequences hold
/// k = 2, 4, ..., 2K, so both carry K entries.
class LogMomentSequence {
public:
    LogMomentSequence(Parity parity, std::vector<int> orders, std::vector<double> log_moments,
                      std::string source);

    /// Analytic sequence of one factor. DGG factors always give even-only.
    static LogMomentSequence analytic(const DistributionSpec& d, int horizon = 200,
                                      Parity parity = Parity::AllK);

    /// Pointwise sum of the factor sequences (independence). Even-only when
    /// any factor is real valued.
    static LogMomentSequence product(const ProductSpec& p, int horizon = 200);

    /// Builds a sequence from an explicit formula k -> ln m_k.
    static LogMomentSequence from_function(const std::function<double(int)>& log_moment,
                                           int horizon, Parity parity, std::string source);

    Parity parity() const noexcept { return parity_; }
    int horizon() const noexcept { return static_cast<int>(orders_.size()); }
    const std::vector<int>& orders() const noexcept { return orders_; }
    const std::vector<double>& values() const noexcept { return log_moments_; }
    const std::string& source() const noexcept { return source_; }

    /// ln m_k for a stored order; throws std::out_of_range otherwise.
    double at(int k) const;

    /// Pointwise sum with a sequence of the same parity and horizon.
    LogMomentSequence operator+(const LogMomentSequence& other) const;

private:
    Parity parity_;
    std::vector<int> orders_;
    std::vector<double> log_moments_;
    std::string source_;
};

enum class Criterion {
    GrowthExponent,
    RatioRate,
    Hardy,
    Cramer,
    Carleman,
    Krein,
    ConditionL,
    // Side conditions of the product theorems.
    HazardBound,
    TailBound,
    DecreasingDensity,
};

enum class Status { Holds, Fails, Inconclusive };

std::string to_string(Criterion c);
std::string to_string(Status s);
std::string to_string(Parity p);

struct CriterionReport {
    Criterion criterion = Criterion::GrowthExponent;
    Status status = Status::Inconclusive;
    /// Headline number: fitted exponent, c0, partial sum or ladder value.
    double estimate = 0.0;
    /// Named numeric evidence in insertion order.
    std::vector<std::pair<std::string, double>> evidence;
    /// Krein truncation ladder or Carleman partial sums, when applicable.
    std::vector<double> ladder;
    std::vector<std::string> notes;
    /// Optional subject label (factor description) for side conditions.
    std::string subject;

    double evidence_value(const std::string& name) const;
};

struct CriteriaConfig {
    /// Inconclusive band around growth/ratio thresholds.
    double tolerance = 0.05;
    /// Maximum drift of the fitted exponent between the two tail halves.
    double trend_tolerance = 0.02;
};

/// Growth exponent a in m_k = O(k^{ak}) (all-k) or m_{2k} = O((2k)^{2ak})
/// (even-only). `threshold` defaults to 2 (all-k) or 1 (even-only); status is
/// Holds when a < threshold - tol, Fails when a > threshold + tol.
CriterionReport growth_exponent(const LogMomentSequence& s, const CriteriaConfig& cfg = {},
                                double threshold = 0.0);

/// Rate r in m_{k+1}/m_k = O((k+1)^r), or m_{2(k+1)}/m_{2k} = O((k+1)^r).
/// Status is taken against threshold 2.
CriterionReport ratio_rate(const LogMomentSequence& s, const CriteriaConfig& cfg = {});

/// m_k <= c0^k (2k)! for all k. Requires an all-k sequence.
CriterionReport hardy_check(const LogMomentSequence& s, const CriteriaConfig& cfg = {});

/// m_{2k} <= c0^k (2k)! for all k. Odd entries are ignored.
CriterionReport cramer_check(const LogMomentSequence& s, const CriteriaConfig& cfg = {});

/// Carleman partial sum and its convergence class. Holds means the series
/// diverges (Carleman's condition is met); Fails means it converges, which
/// alone proves nothing about indeterminacy.
CriterionReport carleman_quantity(const LogMomentSequence& s, const CriteriaConfig& cfg = {});

using LogDensityFn = std::function<double(double)>;

/// Truncation ladder T_j = x0 * first * factor^j, j = 0..rungs-1.
struct KreinSchedule {
    double first = 10.0;
    double factor = 2.0;
    int rungs = 15;

    KreinSchedule doubled() const { return {first, factor, 2 * rungs}; }
};

/// Krein logarithmic integral on the tail (x0, T_j):
///   Stieltjes: int -ln f(x^2) / (1 + x^2) dx
///   Hamburger: 2 int -ln f(x) / (1 + x^2) dx   (symmetric density)
/// Holds means the quantity is classified finite. Throws std::domain_error if
/// the density vanishes on part of the tail.
CriterionReport krein_quantity(const LogDensityFn& log_density, MomentCase kase,
                               const KreinSchedule& schedule = {}, double x0 = 1.0);

/// Condition L from the closed-form L_f of a family on (x0, 1e4 x0).
CriterionReport condition_L_check(const DistributionSpec& d, double x0 = 1.0);

/// Condition L through central differences of ln f (step h = 1e-5 x).
/// `symmetric` must be true for Hamburger-case densities.
CriterionReport condition_L_check(const LogDensityFn& log_density, double x0, MomentCase kase,
                                  bool symmetric = false);

/// Condition L from sampled L values on a geometric grid (shared decision rule).
CriterionReport condition_L_from_values(const std::vector<double>& xs, const std::vector<double>& L);

}  // namespace mdet
