#include "mdet/report.hpp"

#include <stdexcept>

#include "json.hpp"

namespace mdet {

namespace {

using nlohmann::json;

json optional_rational(const std::optional<Rational>& r) {
    return r ? json(to_string(*r)) : json(nullptr);
}

std::optional<Rational> rational_from(const json& j) {
    if (j.is_null()) return std::nullopt;
    auto r = parse_rational(j.get<std::string>());
    if (!r) throw std::invalid_argument("bad rational in report: " + j.get<std::string>());
    return r;
}

json to_json(const CriterionReport& r) {
    json evidence = json::object();
    for (const auto& [name, value] : r.evidence) evidence[name] = value;
    return {{"criterion", to_string(r.criterion)},
            {"status", to_string(r.status)},
            {"estimate", r.estimate},
            {"evidence", evidence},
            {"ladder", r.ladder},
            {"notes", r.notes},
            {"subject", r.subject}};
}

json to_json(const Verdict& v) {
    json exponents = json::array();
    for (const auto& e : v.exponents) {
        exponents.push_back({{"factor", e.factor}, {"a", e.exponent}, {"a_exact", optional_rational(e.exact)}});
    }
    json side = json::array();
    for (const auto& r : v.side_conditions) side.push_back(to_json(r));
    json out = {{"conclusion", to_string(v.conclusion)},
                {"rule", v.rule},
                {"citations", v.citations},
                {"support_class", to_string(v.support)},
                {"exponents", exponents},
                {"exponent_sum", v.exponent_sum},
                {"exponent_sum_exact", optional_rational(v.exponent_sum_exact)},
                {"exact_comparison", v.exact_comparison},
                {"threshold", v.threshold},
                {"side_conditions", side},
                {"failed_conditions", v.failed_conditions},
                {"caveats", v.caveats},
                {"x0", v.x0 ? json(*v.x0) : json(nullptr)},
                {"thetas", v.thetas},
                {"theta_factors", v.theta_factors},
                {"decreasing_factor", v.decreasing_factor}};
    if (v.ratio_sum) out["ratio_sum"] = *v.ratio_sum;
    return out;
}

json config_json(const DecisionConfig& c) {
    return {{"k_horizon", c.horizon},
            {"x0", c.x0},
            {"tolerance", c.criteria.tolerance},
            {"trend_tolerance", c.criteria.trend_tolerance},
            {"boundary_band", c.boundary_band},
            {"krein", {{"first", c.krein.first}, {"factor", c.krein.factor}, {"rungs", c.krein.rungs}}}};
}

json input_json(const ProductSpec& p) {
    json factors = json::array();
    for (const auto& f : p.factors()) factors.push_back(f.describe());
    return {{"factors", factors}, {"support_class", to_string(p.support_class())}};
}

json header(const std::string& command) {
    return {{"schema", kReportSchema}, {"tool_version", kToolVersion}, {"command", command}};
}

}  // namespace

Conclusion conclusion_from_string(const std::string& s) {
    if (s == "M-det") return Conclusion::Determinate;
    if (s == "M-indet") return Conclusion::Indeterminate;
    if (s == "inconclusive") return Conclusion::Inconclusive;
    throw std::invalid_argument("unknown conclusion '" + s + "'");
}

std::string render_analyze_report(const AnalyzeReportInput& in) {
    json doc = header("analyze");
    doc["input"] = input_json(*in.product);
    doc["verdict"] = to_json(*in.verdict);
    doc["config"] = config_json(*in.config);
    doc["seed"] = in.seed ? json(*in.seed) : json(nullptr);
    if (in.ratio) doc["ratio_route"] = to_json(*in.ratio);
    return doc.dump(2) + "\n";
}

std::string render_criterion_report(const std::string& name, const std::string& subject,
                                    const CriterionReport& report) {
    json doc = header("criterion");
    doc["name"] = name;
    doc["input"] = subject;
    doc["report"] = to_json(report);
    return doc.dump(2) + "\n";
}

std::string render_verify_report(const ProductSpec& product, const std::vector<OracleCheck>& oracle,
                                 const McReport& mc) {
    json doc = header("verify");
    doc["input"] = input_json(product);
    json o = json::array();
    int failures = 0;
    for (const auto& c : oracle) {
        o.push_back({{"factor", c.factor},
                     {"k", c.k},
                     {"analytic", c.analytic},
                     {"quadrature", c.quadrature},
                     {"rel_error", c.rel_error},
                     {"pass", c.pass}});
        failures += c.pass ? 0 : 1;
    }
    json m = json::array();
    for (const auto& c : mc.checks) {
        m.push_back({{"k", c.k},
                     {"analytic", c.analytic},
                     {"empirical", c.empirical},
                     {"standard_error", c.standard_error},
                     {"z_score", c.z_score},
                     {"pass", c.pass}});
    }
    failures += mc.failures();
    doc["oracle"] = o;
    doc["monte_carlo"] = {{"seed", mc.seed}, {"n", mc.n}, {"tolerance_se", mc.tolerance_se}, {"checks", m}};
    doc["failures"] = failures;
    doc["passed"] = failures == 0;
    return doc.dump(2) + "\n";
}

ParsedReport parse_analyze_report(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("report is not valid JSON: ") + e.what());
    }
    if (!doc.contains("verdict") || doc.value("command", "") != "analyze") {
        throw std::invalid_argument("not an analyze report");
    }
    const json& v = doc["verdict"];
    ParsedReport r;
    r.schema = doc.at("schema").get<std::string>();
    r.tool_version = doc.at("tool_version").get<std::string>();
    r.conclusion = conclusion_from_string(v.at("conclusion").get<std::string>());
    r.rule = v.at("rule").get<std::string>();
    r.citations = v.at("citations").get<std::vector<std::string>>();
    for (const auto& e : v.at("exponents")) {
        r.exponents.push_back({e.at("factor").get<std::string>(), e.at("a").get<double>(), rational_from(e.at("a_exact"))});
    }
    r.exponent_sum = v.at("exponent_sum").get<double>();
    r.exponent_sum_exact = rational_from(v.at("exponent_sum_exact"));
    r.threshold = v.at("threshold").get<double>();
    return r;
}

}  // namespace mdet
