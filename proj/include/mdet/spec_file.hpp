#pragma once

// Product specification files (YAML, schema 1):
//
//   schema: 1
//   factors:
//     - exp                      # aliases: exp, exp(rate), chisq(nu), normal,
//     - chisq(3)                 #          halfnormal, ig(mu, lambda)
//     - {family: GG, alpha: 1, beta: 1/3, gamma: 1}
//     - {family: IG, mu: 1, lambda: 2}
//   options:                     # all optional
//     k_horizon: 200
//     x0: 1
//     tolerance: 0.05
//     trend_tolerance: 0.02
//     krein_first: 10
//     krein_factor: 2
//     krein_rungs: 15
//     seed: 7
//
// Parameters accept integers, decimals and fractions ("1/3"); these are kept
// as exact rationals. Scientific notation is accepted as a plain double.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mdet/decision.hpp"
#include "mdet/distributions.hpp"

namespace mdet {

/// Parse failure with a 1-based position in the source text.
class SpecError : public std::runtime_error {
public:
    SpecError(const std::string& message, int line, int column);
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

struct SpecOptions {
    std::optional<int> k_horizon;
    std::optional<double> x0;
    std::optional<double> tolerance;
    std::optional<double> trend_tolerance;
    std::optional<double> krein_first;
    std::optional<double> krein_factor;
    std::optional<int> krein_rungs;
    std::optional<std::uint64_t> seed;
};

struct SpecFile {
    ProductSpec product;
    SpecOptions options;
};

SpecFile parse_spec_text(const std::string& text);

/// Reads and parses a file; unreadable files raise SpecError at line 0.
SpecFile parse_spec_file(const std::string& path);

/// Parses an alias such as "exp", "chisq(3)" or "ig(1, 2)". Throws
/// std::invalid_argument for unknown names or bad arguments.
DistributionSpec parse_alias(const std::string& text);

/// Overlays the options present in the file onto a configuration.
DecisionConfig apply_options(const SpecOptions& options, DecisionConfig base = {});

}  // namespace mdet
