#pragma once

// JSON rendering of verdicts, criterion reports and verification results.
// Object keys are emitted in sorted order, so identical inputs give
// byte-identical documents.

#include <optional>
#include <string>
#include <vector>

#include "mdet/criteria.hpp"
#include "mdet/decision.hpp"
#include "mdet/verify.hpp"

namespace mdet {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kReportSchema = "mdet-report/1";

struct AnalyzeReportInput {
    const ProductSpec* product = nullptr;
    const Verdict* verdict = nullptr;
    const Verdict* ratio = nullptr;  ///< optional ratio-route verdict
    const DecisionConfig* config = nullptr;
    std::optional<std::uint64_t> seed;
};

std::string render_analyze_report(const AnalyzeReportInput& in);

std::string render_criterion_report(const std::string& name, const std::string& subject,
                                    const CriterionReport& report);

std::string render_verify_report(const ProductSpec& product, const std::vector<OracleCheck>& oracle,
                                 const McReport& mc);

/// The parts of an analyze report that must survive a round trip exactly.
struct ParsedReport {
    std::string schema;
    std::string tool_version;
    Conclusion conclusion = Conclusion::Inconclusive;
    std::string rule;
    std::vector<std::string> citations;
    std::vector<FactorExponent> exponents;
    double exponent_sum = 0.0;
    std::optional<Rational> exponent_sum_exact;
    double threshold = 0.0;
};

/// Throws std::invalid_argument if the text is not an analyze report.
ParsedReport parse_analyze_report(const std::string& text);

Conclusion conclusion_from_string(const std::string& s);

}  // namespace mdet
