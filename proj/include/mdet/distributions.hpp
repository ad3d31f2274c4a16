#pragma once

// The distribution algebra: generalized gamma (GG), double generalized gamma
// (DGG) and inverse Gaussian (IG) families, their named special cases, and
// products of independent factors drawn from them.
//
//   GG(alpha, beta, gamma):  f(x) = c x^(gamma-1) exp(-alpha x^beta),   x > 0,
//                            c = beta alpha^(gamma/beta) / Gamma(gamma/beta)
//   DGG(alpha, beta, gamma): f(x) = (c/2) |x|^(gamma-1) exp(-alpha |x|^beta), x real
//   IG(mu, lambda):          f(x) = sqrt(lambda / (2 pi x^3))
//                                   exp(-lambda (x-mu)^2 / (2 mu^2 x)),    x > 0

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <boost/rational.hpp>

namespace mdet {

using Rational = boost::rational<std::int64_t>;

enum class Family { GG, DGG, IG };

/// Which classical moment problem a distribution belongs to.
enum class MomentCase { Stieltjes, Hamburger };

enum class SupportClass { Stieltjes, Hamburger, Mixed };

std::string to_string(Family f);
std::string to_string(MomentCase c);
std::string to_string(SupportClass c);

/// Parses "3", "0.25", "1/3", "-2" into an exact rational; nullopt if the
/// text is not a plain decimal or fraction (for instance "1e-3").
std::optional<Rational> parse_rational(const std::string& text);

std::string to_string(const Rational& r);

/// A positive real parameter that may also carry its exact rational value.
struct Param {
    double value = 0.0;
    std::optional<Rational> exact;

    /// Doubles that are exactly k / 2^20 (integers, halves, quarters...) also
    /// record that exact value.
    Param(double v) : value(v) {  // NOLINT(google-explicit-constructor)
        const double scaled = std::ldexp(v, 20);
        if (std::isfinite(scaled) && std::fabs(scaled) < 1e15 && scaled == std::floor(scaled)) {
            exact = Rational(static_cast<std::int64_t>(scaled), std::int64_t(1) << 20);
        }
    }
    Param(Rational r)              // NOLINT(google-explicit-constructor)
        : value(boost::rational_cast<double>(r)), exact(r) {}
};

class DistributionSpec {
public:
    /// Throws std::invalid_argument naming the offending parameter unless all
    /// parameters are strictly positive and finite.
    static DistributionSpec gg(Param alpha, Param beta, Param gamma);
    static DistributionSpec dgg(Param alpha, Param beta, Param gamma);
    static DistributionSpec ig(Param mu, Param lambda);

    // Named aliases, resolved to family form.
    static DistributionSpec exponential(Param rate = Param(Rational(1)));
    static DistributionSpec chi_square(Param nu);
    static DistributionSpec normal();
    static DistributionSpec half_normal();

    Family family() const noexcept { return family_; }
    MomentCase moment_case() const noexcept {
        return family_ == Family::DGG ? MomentCase::Hamburger : MomentCase::Stieltjes;
    }
    bool real_valued() const noexcept { return family_ == Family::DGG; }

    double alpha() const noexcept { return p1_.value; }
    double beta() const noexcept { return p2_.value; }
    double gamma() const noexcept { return p3_.value; }
    double mu() const noexcept { return p1_.value; }
    double lambda() const noexcept { return p2_.value; }

    const Param& alpha_param() const noexcept { return p1_; }
    const Param& beta_param() const noexcept { return p2_; }
    const Param& gamma_param() const noexcept { return p3_; }
    const Param& mu_param() const noexcept { return p1_; }
    const Param& lambda_param() const noexcept { return p2_; }

    /// ln of the norming constant c (GG/DGG include the 1/2 for DGG).
    double log_norming() const noexcept { return log_norming_; }

    /// Canonical family form, e.g. "GG(1, 1/3, 1)" or "IG(1, 2)".
    std::string describe() const;

    friend bool operator==(const DistributionSpec& a, const DistributionSpec& b) {
        return a.family_ == b.family_ && a.p1_.value == b.p1_.value &&
               a.p2_.value == b.p2_.value && a.p3_.value == b.p3_.value;
    }

private:
    DistributionSpec(Family family, Param p1, Param p2, Param p3);

    Family family_;
    Param p1_, p2_, p3_;
    double log_norming_ = 0.0;
};

/// An ordered list of mutually independent factors.
class ProductSpec {
public:
    explicit ProductSpec(std::vector<DistributionSpec> factors);

    const std::vector<DistributionSpec>& factors() const noexcept { return factors_; }
    std::size_t size() const noexcept { return factors_.size(); }
    SupportClass support_class() const noexcept { return support_; }

    /// Stieltjes for all-nonnegative products, Hamburger otherwise.
    MomentCase moment_case() const noexcept {
        return support_ == SupportClass::Stieltjes ? MomentCase::Stieltjes : MomentCase::Hamburger;
    }

    std::string describe() const;

private:
    std::vector<DistributionSpec> factors_;
    SupportClass support_;
};

SupportClass support_class(const ProductSpec& p);

/// ln f(x); -inf where the density vanishes (x <= 0 for GG/IG, x == 0 for DGG
/// with gamma != 1, and x == 0 for DGG generally by convention).
double log_density(const DistributionSpec& d, double x);

/// As log_density but throws std::domain_error outside the open support.
double log_density_strict(const DistributionSpec& d, double x);

/// ln m_k in log space. For DGG with odd k the moment vanishes.
struct LogMoment {
    double log_value = 0.0;
    bool vanishes = false;
};

/// Throws std::invalid_argument for k < 1.
LogMoment log_moment(const DistributionSpec& d, int k);

/// ln of the tail function 1 - F(x).
double log_tail(const DistributionSpec& d, double x);

/// 1 - F(x). Throws std::domain_error for x < 0 on GG/IG.
double tail(const DistributionSpec& d, double x);

/// ln(f(x) / (1 - F(x))).
double log_hazard(const DistributionSpec& d, double x);

/// f(x) / (1 - F(x)). Throws std::range_error if the ratio is not representable
/// in double precision; use log_hazard in that case.
double hazard(const DistributionSpec& d, double x);

/// L_f(x) = -x f'(x) / f(x). Throws std::domain_error for x <= 0.
double lin_L(const DistributionSpec& d, double x);

/// One draw using the caller's engine.
double draw(const DistributionSpec& d, std::mt19937_64& engine);

/// n i.i.d. draws, deterministic in seed.
std::vector<double> sample(const DistributionSpec& d, std::uint64_t seed, std::size_t n);

}  // namespace mdet
