#include "mdet/spec_file.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace mdet {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return char(std::tolower(c)); });
    return s;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void fail_at(const YAML::Node& node, const std::string& message) {
    const auto mark = node.Mark();
    if (mark.is_null()) throw SpecError(message, 0, 0);
    throw SpecError(message, mark.line + 1, mark.column + 1);
}

Param param_from_text(const std::string& text) {
    if (auto r = parse_rational(text)) return Param(*r);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size()) throw std::invalid_argument("'" + text + "' is not a number");
    return Param(v);
}

Param param_from_node(const YAML::Node& node, const std::string& field) {
    if (!node.IsScalar()) fail_at(node, "parameter '" + field + "' must be a scalar");
    try {
        return param_from_text(trim(node.Scalar()));
    } catch (const std::invalid_argument& e) {
        fail_at(node, "parameter '" + field + "': " + e.what());
    }
}

// name(args) -> factor.
DistributionSpec build(const std::string& name, const std::vector<Param>& args) {
    auto need = [&](std::size_t lo, std::size_t hi) {
        if (args.size() < lo || args.size() > hi) {
            throw std::invalid_argument("wrong number of arguments for '" + name + "'");
        }
    };
    if (name == "exp") {
        need(0, 1);
        return args.empty() ? DistributionSpec::exponential() : DistributionSpec::exponential(args[0]);
    }
    if (name == "chisq") {
        need(1, 1);
        return DistributionSpec::chi_square(args[0]);
    }
    if (name == "normal") {
        need(0, 0);
        return DistributionSpec::normal();
    }
    if (name == "halfnormal") {
        need(0, 0);
        return DistributionSpec::half_normal();
    }
    if (name == "ig") {
        need(2, 2);
        return DistributionSpec::ig(args[0], args[1]);
    }
    if (name == "gg" || name == "dgg") {
        need(3, 3);
        return name == "gg" ? DistributionSpec::gg(args[0], args[1], args[2])
                            : DistributionSpec::dgg(args[0], args[1], args[2]);
    }
    throw std::invalid_argument("unknown family '" + name + "'");
}

DistributionSpec factor_from_map(const YAML::Node& node) {
    const YAML::Node family_node = node["family"];
    if (!family_node) fail_at(node, "factor is missing 'family'");
    const std::string family = lower(trim(family_node.as<std::string>()));

    std::vector<std::string> keys;
    if (family == "gg" || family == "dgg") {
        keys = {"alpha", "beta", "gamma"};
    } else if (family == "ig") {
        keys = {"mu", "lambda"};
    } else if (family == "exp") {
        keys = {"rate"};
    } else if (family == "chisq") {
        keys = {"nu"};
    } else if (family == "normal" || family == "halfnormal") {
        keys = {};
    } else {
        fail_at(family_node, "unknown family '" + family_node.as<std::string>() + "'");
    }

    for (const auto& kv : node) {
        const auto key = kv.first.as<std::string>();
        if (key != "family" && std::find(keys.begin(), keys.end(), key) == keys.end()) {
            fail_at(kv.first, "unknown key '" + key + "' for family '" + family + "'");
        }
    }
    std::vector<Param> args;
    for (const auto& key : keys) {
        const YAML::Node v = node[key];
        if (!v) {
            if (family == "exp") continue;  // rate defaults to 1
            fail_at(node, "factor is missing parameter '" + key + "'");
        }
        args.push_back(param_from_node(v, key));
    }
    try {
        return build(family, args);
    } catch (const std::invalid_argument& e) {
        fail_at(node, e.what());
    }
}

DistributionSpec factor_from_node(const YAML::Node& node) {
    if (node.IsScalar()) {
        try {
            return parse_alias(node.Scalar());
        } catch (const std::invalid_argument& e) {
            fail_at(node, e.what());
        }
    }
    if (node.IsMap()) return factor_from_map(node);
    fail_at(node, "factor must be an alias string or a mapping");
}

template <typename T>
std::optional<T> option(const YAML::Node& options, const char* key) {
    const YAML::Node v = options[key];
    if (!v) return std::nullopt;
    try {
        return v.as<T>();
    } catch (const YAML::Exception&) {
        fail_at(v, std::string("option '") + key + "' has the wrong type");
    }
}

}  // namespace

SpecError::SpecError(const std::string& message, int line, int column)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ", column " + std::to_string(column) +
                                        ": " + message
                                  : message),
      line_(line),
      column_(column) {}

DistributionSpec parse_alias(const std::string& raw) {
    const std::string text = trim(raw);
    const auto open = text.find('(');
    std::string name = lower(trim(text.substr(0, open)));
    std::vector<Param> args;
    if (open != std::string::npos) {
        if (text.back() != ')') throw std::invalid_argument("unbalanced parentheses in '" + text + "'");
        std::stringstream inner(text.substr(open + 1, text.size() - open - 2));
        std::string piece;
        while (std::getline(inner, piece, ',')) args.push_back(param_from_text(trim(piece)));
    }
    return build(name, args);
}

SpecFile parse_spec_text(const std::string& text) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw SpecError(e.msg, e.mark.line + 1, e.mark.column + 1);
    }
    if (!root.IsMap()) throw SpecError("spec must be a mapping with a 'factors' list", 1, 1);

    static const std::set<std::string> top_keys = {"schema", "factors", "options"};
    for (const auto& kv : root) {
        const auto key = kv.first.as<std::string>();
        if (!top_keys.count(key)) fail_at(kv.first, "unknown key '" + key + "'");
    }
    if (const YAML::Node schema = root["schema"]) {
        if (schema.as<std::string>() != "1") fail_at(schema, "unsupported schema '" + schema.as<std::string>() + "'");
    }
    const YAML::Node factors = root["factors"];
    if (!factors || !factors.IsSequence() || factors.size() == 0) {
        fail_at(factors ? factors : root, "'factors' must be a nonempty list");
    }
    std::vector<DistributionSpec> parsed;
    for (const auto& f : factors) parsed.push_back(factor_from_node(f));

    SpecOptions opts;
    if (const YAML::Node o = root["options"]) {
        if (!o.IsMap()) fail_at(o, "'options' must be a mapping");
        static const std::set<std::string> known = {"k_horizon",    "x0",           "tolerance",
                                                    "trend_tolerance", "krein_first", "krein_factor",
                                                    "krein_rungs",  "seed"};
        for (const auto& kv : o) {
            const auto key = kv.first.as<std::string>();
            if (!known.count(key)) fail_at(kv.first, "unknown option '" + key + "'");
        }
        opts.k_horizon = option<int>(o, "k_horizon");
        opts.x0 = option<double>(o, "x0");
        opts.tolerance = option<double>(o, "tolerance");
        opts.trend_tolerance = option<double>(o, "trend_tolerance");
        opts.krein_first = option<double>(o, "krein_first");
        opts.krein_factor = option<double>(o, "krein_factor");
        opts.krein_rungs = option<int>(o, "krein_rungs");
        opts.seed = option<std::uint64_t>(o, "seed");
        if (opts.k_horizon && *opts.k_horizon < 40) fail_at(o["k_horizon"], "option 'k_horizon' must be >= 40");
        if (opts.x0 && !(*opts.x0 > 0.0)) fail_at(o["x0"], "option 'x0' must be positive");
        if (opts.tolerance && !(*opts.tolerance > 0.0)) fail_at(o["tolerance"], "option 'tolerance' must be positive");
    }
    return {ProductSpec(std::move(parsed)), opts};
}

SpecFile parse_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecError("cannot read spec file '" + path + "'", 0, 0);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_spec_text(buf.str());
}

DecisionConfig apply_options(const SpecOptions& o, DecisionConfig cfg) {
    if (o.k_horizon) cfg.horizon = *o.k_horizon;
    if (o.x0) cfg.x0 = *o.x0;
    if (o.tolerance) cfg.criteria.tolerance = *o.tolerance;
    if (o.trend_tolerance) cfg.criteria.trend_tolerance = *o.trend_tolerance;
    if (o.krein_first) cfg.krein.first = *o.krein_first;
    if (o.krein_factor) cfg.krein.factor = *o.krein_factor;
    if (o.krein_rungs) cfg.krein.rungs = *o.krein_rungs;
    return cfg;
}

}  // namespace mdet
