#pragma once

// Scenario description and its JSON file format.
//
// A scenario file is a JSON object with a mandatory "schema_version". Every
// object in the file is read strictly: a key the schema does not know is a
// validation error carrying the JSON path of the key.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "persist/checks.hpp"
#include "persist/network.hpp"

namespace persist {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Initial beliefs: explicit values or a named pattern.
///   "zero-one-split:0,1"   zeros on the listed nodes, ones elsewhere
///   "zero-one-split:auto"  zeros on an ancestor-closed component of the persistent graph
///   "uniform-random"       uniform [0, 1) from the scenario seed
///   "uniform-random:SEED"  uniform [0, 1) from an explicit seed
struct InitialCondition {
    enum class Kind { Values, ZeroOneSplit, ZeroOneSplitAuto, UniformRandom };

    Kind kind = Kind::Values;
    std::vector<double> values;
    std::vector<NodeId> zero_nodes;
    std::optional<std::uint64_t> seed;

    friend bool operator==(const InitialCondition&, const InitialCondition&) = default;
};

enum class CheckKind {
    Stochasticity,
    SelfConfidence,
    ArcBalance,
    IntegralArcBalance,
    WindowBound,
    CutBalance,
    PersistentQsc,
    PersistentStronglyConnected,
};

enum class CertificateKind {
    DiscreteRate,
    ContinuousRate,
    AgreementSchedule,
    SigmaFloor,
    ThetaFloor,
    WindowViolation,
    LemmaBounds,
};

/// One assumption check. Only the parameters of its kind are meaningful.
struct CheckSpec {
    CheckKind kind = CheckKind::Stochasticity;
    double eta = 0.0;
    double A = 1.0;
    double interval = 1.0;  ///< integral_arc_balance interval length
    double a_star = 0.0;
    double window = 1.0;
    double K = 1.0;
    ArcScope scope = ArcScope::Underlying;
    bool expect_pass = true;

    friend bool operator==(const CheckSpec&, const CheckSpec&) = default;
};

/// One certificate to compute and verify against the trajectory.
struct CertificateSpec {
    CertificateKind kind = CertificateKind::DiscreteRate;
    double eta = 0.0;
    double a_star = 0.0;
    std::int64_t T_star = 1;
    double A = 1.0;
    double tau0 = 0.0;
    double target_ratio = 0.01;
    double epsilon = 0.5;
    std::int64_t T = 1;
    std::int64_t search_to = 0;
    std::size_t max_T = 20;           ///< lemma_bounds, discrete
    std::size_t start_stride = 1000;  ///< lemma_bounds, continuous
    std::size_t window = 2000;        ///< lemma_bounds, continuous influence window in samples
    bool expect_pass = true;

    friend bool operator==(const CertificateSpec&, const CertificateSpec&) = default;
};

struct Scenario {
    std::string name;
    std::string description;
    TimeMode mode = TimeMode::Discrete;
    std::size_t nodes = 0;
    std::vector<WeightedArc> arcs;
    std::vector<SelfWeight> self_weights;  ///< empty: complement on every node
    InitialCondition x0;
    std::optional<double> t0;  ///< nullopt: the earliest start a floor certificate accepts
    double horizon = 0.0;      ///< steps (discrete) or duration (continuous)
    double h_max = 1e-3;
    double xi_fraction = 0.5;
    double landmark_period = 0.0;
    std::vector<CheckSpec> checks;
    std::vector<CertificateSpec> certificates;
    std::size_t stride = 1;
    std::uint64_t seed = 0;

    TimeVaryingNetwork network() const { return {nodes, arcs, mode, self_weights}; }

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

// ---------------------------------------------------------------------------
// Names

inline const char* to_string(CheckKind k) {
    switch (k) {
        case CheckKind::Stochasticity: return "stochasticity";
        case CheckKind::SelfConfidence: return "self_confidence";
        case CheckKind::ArcBalance: return "arc_balance";
        case CheckKind::IntegralArcBalance: return "integral_arc_balance";
        case CheckKind::WindowBound: return "window_bound";
        case CheckKind::CutBalance: return "cut_balance";
        case CheckKind::PersistentQsc: return "persistent_qsc";
        case CheckKind::PersistentStronglyConnected: return "persistent_strongly_connected";
    }
    return "?";
}

inline const char* to_string(CertificateKind k) {
    switch (k) {
        case CertificateKind::DiscreteRate: return "discrete_rate";
        case CertificateKind::ContinuousRate: return "continuous_rate";
        case CertificateKind::AgreementSchedule: return "agreement_schedule";
        case CertificateKind::SigmaFloor: return "sigma_floor";
        case CertificateKind::ThetaFloor: return "theta_floor";
        case CertificateKind::WindowViolation: return "window_violation";
        case CertificateKind::LemmaBounds: return "lemma_bounds";
    }
    return "?";
}

inline std::string to_string(const InitialCondition& x0) {
    switch (x0.kind) {
        case InitialCondition::Kind::Values: return "values";
        case InitialCondition::Kind::ZeroOneSplitAuto: return "zero-one-split:auto";
        case InitialCondition::Kind::ZeroOneSplit: {
            std::string s = "zero-one-split:";
            for (std::size_t k = 0; k < x0.zero_nodes.size(); ++k) s += (k ? "," : "") + std::to_string(x0.zero_nodes[k]);
            return s;
        }
        case InitialCondition::Kind::UniformRandom:
            return x0.seed ? "uniform-random:" + std::to_string(*x0.seed) : "uniform-random";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Reading

namespace detail {

/// Strict view of one JSON object: every key must be consumed before finish().
class ObjectReader {
public:
    ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ValidationError(path_, "expected an object");
    }

    std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    const json* find(const std::string& key) {
        used_.insert(key);
        auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    const json& require(const std::string& key) {
        const json* v = find(key);
        if (!v) throw ValidationError(at(key), "missing required field");
        return *v;
    }

    double number(const std::string& key) { return as_number(require(key), at(key)); }

    double number_or(const std::string& key, double fallback) {
        const json* v = find(key);
        return v ? as_number(*v, at(key)) : fallback;
    }

    std::int64_t integer(const std::string& key) { return as_integer(require(key), at(key)); }

    std::int64_t integer_or(const std::string& key, std::int64_t fallback) {
        const json* v = find(key);
        return v ? as_integer(*v, at(key)) : fallback;
    }

    std::string string(const std::string& key) { return as_string(require(key), at(key)); }

    std::string string_or(const std::string& key, std::string fallback) {
        const json* v = find(key);
        return v ? as_string(*v, at(key)) : fallback;
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!used_.count(it.key())) throw ValidationError(at(it.key()), "unknown field");
    }

    static double as_number(const json& v, const std::string& path) {
        if (!v.is_number()) throw ValidationError(path, "expected a number");
        double d = v.get<double>();
        if (!std::isfinite(d)) throw ValidationError(path, "expected a finite number");
        return d;
    }

    static std::int64_t as_integer(const json& v, const std::string& path) {
        if (v.is_number_integer()) return v.get<std::int64_t>();
        if (v.is_number_float()) {
            double d = v.get<double>();
            if (std::isfinite(d) && d == std::floor(d) && std::abs(d) < 9e15) return static_cast<std::int64_t>(d);
        }
        throw ValidationError(path, "expected an integer");
    }

    static std::string as_string(const json& v, const std::string& path) {
        if (!v.is_string()) throw ValidationError(path, "expected a string");
        return v.get<std::string>();
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> used_;
};

inline const char* kSupportedFamilies =
    "zero, constant, power_decay, exponential_decay, periodic_pulse, tabulated";

inline WeightFunction read_weight(const json& j, const std::string& path) {
    ObjectReader r(j, path);
    const std::string fam = r.string("family");
    WeightFunction w;
    try {
        if (fam == "zero") {
            w = WeightFunction::zero();
        } else if (fam == "constant") {
            w = WeightFunction::constant(r.number("c"));
        } else if (fam == "power_decay") {
            double c = r.number("c");
            w = WeightFunction::power_decay(c, r.number("p"));
        } else if (fam == "exponential_decay") {
            double c = r.number("c");
            w = WeightFunction::exponential_decay(c, r.number("lambda"));
        } else if (fam == "periodic_pulse") {
            double h = r.number("height"), wd = r.number("width"), p = r.number("period");
            w = WeightFunction::periodic_pulse(h, wd, p, r.number_or("growth", 1.0));
        } else if (fam == "tabulated") {
            std::vector<double> bp, vals;
            const json& jb = r.require("breakpoints");
            const json& jv = r.require("values");
            if (!jb.is_array()) throw ValidationError(r.at("breakpoints"), "expected an array");
            if (!jv.is_array()) throw ValidationError(r.at("values"), "expected an array");
            for (std::size_t k = 0; k < jb.size(); ++k)
                bp.push_back(ObjectReader::as_number(jb[k], r.at("breakpoints") + "[" + std::to_string(k) + "]"));
            for (std::size_t k = 0; k < jv.size(); ++k)
                vals.push_back(ObjectReader::as_number(jv[k], r.at("values") + "[" + std::to_string(k) + "]"));
            std::optional<Persistence> declared;
            if (const json* p = r.find("persistence")) {
                std::string s = ObjectReader::as_string(*p, r.at("persistence"));
                if (s == "persistent") declared = Persistence::Persistent;
                else if (s == "vanishing") declared = Persistence::Vanishing;
                else throw ValidationError(r.at("persistence"), "expected \"persistent\" or \"vanishing\"");
            }
            w = WeightFunction::tabulated(std::move(bp), std::move(vals), declared);
        } else {
            throw ParseError(r.at("family") + ": unknown weight family \"" + fam + "\" (supported: " +
                             kSupportedFamilies + ")");
        }
    } catch (const DomainError& e) {
        throw ValidationError(path, e.what());
    }
    r.finish();
    return w;
}

inline bool parse_expect(ObjectReader& r) {
    const std::string e = r.string_or("expect", "pass");
    if (e == "pass") return true;
    if (e == "fail") return false;
    throw ValidationError(r.at("expect"), "expected \"pass\" or \"fail\"");
}

inline CheckSpec read_check(const json& j, const std::string& path) {
    ObjectReader r(j, path);
    const std::string kind = r.string("kind");
    CheckSpec c;
    if (kind == "stochasticity") {
        c.kind = CheckKind::Stochasticity;
    } else if (kind == "self_confidence") {
        c.kind = CheckKind::SelfConfidence;
        c.eta = r.number("eta");
    } else if (kind == "arc_balance") {
        c.kind = CheckKind::ArcBalance;
        c.A = r.number("A");
    } else if (kind == "integral_arc_balance") {
        c.kind = CheckKind::IntegralArcBalance;
        c.A = r.number("A");
        c.interval = r.number("interval");
    } else if (kind == "window_bound") {
        c.kind = CheckKind::WindowBound;
        c.a_star = r.number("a_star");
        c.window = r.number("window");
    } else if (kind == "cut_balance") {
        c.kind = CheckKind::CutBalance;
        c.K = r.number("K");
        const std::string scope = r.string_or("scope", "underlying");
        if (scope == "underlying") c.scope = ArcScope::Underlying;
        else if (scope == "persistent") c.scope = ArcScope::Persistent;
        else throw ValidationError(r.at("scope"), "expected \"underlying\" or \"persistent\"");
    } else if (kind == "persistent_qsc") {
        c.kind = CheckKind::PersistentQsc;
    } else if (kind == "persistent_strongly_connected") {
        c.kind = CheckKind::PersistentStronglyConnected;
    } else {
        throw ValidationError(r.at("kind"), "unknown check kind \"" + kind + "\"");
    }
    c.expect_pass = parse_expect(r);
    r.finish();
    return c;
}

inline std::size_t read_count(ObjectReader& r, const std::string& key, std::size_t fallback) {
    std::int64_t v = r.integer_or(key, static_cast<std::int64_t>(fallback));
    if (v < 1) throw ValidationError(r.at(key), "must be >= 1");
    return static_cast<std::size_t>(v);
}

inline CertificateSpec read_certificate(const json& j, const std::string& path) {
    ObjectReader r(j, path);
    const std::string kind = r.string("kind");
    CertificateSpec c;
    if (kind == "discrete_rate") {
        c.kind = CertificateKind::DiscreteRate;
        c.eta = r.number("eta");
        c.a_star = r.number("a_star");
        c.T_star = r.integer("T_star");
    } else if (kind == "continuous_rate") {
        c.kind = CertificateKind::ContinuousRate;
        c.A = r.number("A");
        c.a_star = r.number("a_star");
        c.tau0 = r.number("tau0");
    } else if (kind == "agreement_schedule") {
        c.kind = CertificateKind::AgreementSchedule;
        c.A = r.number("A");
        c.target_ratio = r.number("target_ratio");
    } else if (kind == "sigma_floor") {
        c.kind = CertificateKind::SigmaFloor;
    } else if (kind == "theta_floor") {
        c.kind = CertificateKind::ThetaFloor;
    } else if (kind == "window_violation") {
        c.kind = CertificateKind::WindowViolation;
        c.epsilon = r.number("epsilon");
        c.T = r.integer("T");
        c.A = r.number("A");
        c.search_to = r.integer("search_to");
    } else if (kind == "lemma_bounds") {
        c.kind = CertificateKind::LemmaBounds;
        c.max_T = read_count(r, "max_T", c.max_T);
        c.start_stride = read_count(r, "start_stride", c.start_stride);
        c.window = read_count(r, "window", c.window);
    } else {
        throw ValidationError(r.at("kind"), "unknown certificate kind \"" + kind + "\"");
    }
    c.expect_pass = parse_expect(r);
    r.finish();
    return c;
}

inline InitialCondition read_x0(const json& j, const std::string& path) {
    InitialCondition x0;
    if (j.is_array()) {
        for (std::size_t k = 0; k < j.size(); ++k)
            x0.values.push_back(ObjectReader::as_number(j[k], path + "[" + std::to_string(k) + "]"));
        return x0;
    }
    const std::string s = ObjectReader::as_string(j, path);
    const std::string split = "zero-one-split:", uniform = "uniform-random";
    if (s == split + "auto") {
        x0.kind = InitialCondition::Kind::ZeroOneSplitAuto;
    } else if (s.rfind(split, 0) == 0) {
        x0.kind = InitialCondition::Kind::ZeroOneSplit;
        std::stringstream ss(s.substr(split.size()));
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            try {
                std::size_t used = 0;
                long long v = std::stoll(tok, &used);
                if (used != tok.size() || v < 0) throw std::invalid_argument(tok);
                x0.zero_nodes.push_back(static_cast<NodeId>(v));
            } catch (const std::logic_error&) {
                throw ValidationError(path, "bad node index \"" + tok + "\" in pattern");
            }
        }
        if (x0.zero_nodes.empty()) throw ValidationError(path, "zero-one-split needs at least one node");
    } else if (s == uniform) {
        x0.kind = InitialCondition::Kind::UniformRandom;
    } else if (s.rfind(uniform + ":", 0) == 0) {
        x0.kind = InitialCondition::Kind::UniformRandom;
        try {
            std::size_t used = 0;
            const std::string tail = s.substr(uniform.size() + 1);
            x0.seed = std::stoull(tail, &used);
            if (used != tail.size()) throw std::invalid_argument(tail);
        } catch (const std::logic_error&) {
            throw ValidationError(path, "bad seed in pattern \"" + s + "\"");
        }
    } else {
        throw ValidationError(path, "unknown initial-condition pattern \"" + s + "\"");
    }
    return x0;
}

inline std::size_t line_of(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    for (std::size_t k = 0; k < byte && k < text.size(); ++k)
        if (text[k] == '\n') ++line;
    return line;
}

inline void require_node(std::size_t node, std::size_t n, const std::string& path) {
    if (node >= n) throw ValidationError(path, "node " + std::to_string(node) + " out of range for " + std::to_string(n) + " nodes");
}

}  // namespace detail

/// Builds a validated scenario from parsed JSON.
inline Scenario scenario_from_json(const json& j) {
    using detail::ObjectReader;
    ObjectReader r(j, "");
    const std::int64_t version = r.integer("schema_version");
    if (version != kSchemaVersion)
        throw ValidationError("schema_version", "unsupported version " + std::to_string(version) + " (expected " +
                                                    std::to_string(kSchemaVersion) + ")");
    Scenario s;
    s.name = r.string("name");
    if (s.name.empty()) throw ValidationError("name", "must be nonempty");
    s.description = r.string_or("description", "");
    const std::string mode = r.string("mode");
    if (mode == "discrete") s.mode = TimeMode::Discrete;
    else if (mode == "continuous") s.mode = TimeMode::Continuous;
    else throw ValidationError("mode", "expected \"discrete\" or \"continuous\"");
    const std::int64_t n = r.integer("nodes");
    if (n < 1) throw ValidationError("nodes", "must be >= 1");
    s.nodes = static_cast<std::size_t>(n);

    const json& arcs = r.require("arcs");
    if (!arcs.is_array()) throw ValidationError("arcs", "expected an array");
    std::set<Arc> seen;
    for (std::size_t k = 0; k < arcs.size(); ++k) {
        const std::string path = "arcs[" + std::to_string(k) + "]";
        ObjectReader a(arcs[k], path);
        const std::int64_t from = a.integer("from"), to = a.integer("to");
        if (from < 0) throw ValidationError(a.at("from"), "must be >= 0");
        if (to < 0) throw ValidationError(a.at("to"), "must be >= 0");
        detail::require_node(static_cast<std::size_t>(from), s.nodes, a.at("from"));
        detail::require_node(static_cast<std::size_t>(to), s.nodes, a.at("to"));
        if (from == to) throw ValidationError(path, "self-loop arcs are not allowed; use self_weights");
        Arc arc{static_cast<NodeId>(from), static_cast<NodeId>(to)};
        if (!seen.insert(arc).second) throw ValidationError(path, "duplicate arc " + to_string(arc));
        s.arcs.push_back({arc, detail::read_weight(a.require("weight"), a.at("weight"))});
        a.finish();
    }

    if (const json* sw = r.find("self_weights")) {
        if (s.mode == TimeMode::Continuous) throw ValidationError("self_weights", "not allowed in continuous mode");
        if (sw->is_string()) {
            if (sw->get<std::string>() != "complement") throw ValidationError("self_weights", "expected \"complement\" or a list");
        } else if (sw->is_array()) {
            if (sw->size() != s.nodes) throw ValidationError("self_weights", "need one entry per node");
            for (std::size_t k = 0; k < sw->size(); ++k) {
                const std::string path = "self_weights[" + std::to_string(k) + "]";
                const json& e = (*sw)[k];
                if (e.is_string() && e.get<std::string>() == "complement") s.self_weights.push_back(SelfWeight::complement());
                else s.self_weights.push_back(SelfWeight::of(detail::read_weight(e, path)));
            }
        } else {
            throw ValidationError("self_weights", "expected \"complement\" or a list");
        }
    }

    s.x0 = detail::read_x0(r.require("x0"), "x0");
    if (s.x0.kind == InitialCondition::Kind::Values && s.x0.values.size() != s.nodes)
        throw ValidationError("x0", "need one value per node");
    for (std::size_t k = 0; k < s.x0.zero_nodes.size(); ++k) detail::require_node(s.x0.zero_nodes[k], s.nodes, "x0");

    const json* t0 = r.find("t0");
    if (!t0) {
        s.t0 = 0.0;
    } else if (t0->is_string()) {
        if (t0->get<std::string>() != "certified") throw ValidationError("t0", "expected a number or \"certified\"");
    } else {
        s.t0 = ObjectReader::as_number(*t0, "t0");
        if (*s.t0 < 0) throw ValidationError("t0", "must be >= 0");
        if (s.mode == TimeMode::Discrete && *s.t0 != std::floor(*s.t0)) throw ValidationError("t0", "must be an integer step");
    }

    s.horizon = r.number("horizon");
    if (!(s.horizon > 0)) throw ValidationError("horizon", "must be > 0");
    if (s.mode == TimeMode::Discrete && s.horizon != std::floor(s.horizon))
        throw ValidationError("horizon", "must be an integer number of steps");

    if (const json* ig = r.find("integrator")) {
        ObjectReader ir(*ig, "integrator");
        s.h_max = ir.number_or("h_max", s.h_max);
        s.xi_fraction = ir.number_or("xi_fraction", s.xi_fraction);
        s.landmark_period = ir.number_or("landmark_period", s.landmark_period);
        ir.finish();
        if (!(s.h_max > 0)) throw ValidationError("integrator.h_max", "must be > 0");
        if (!(s.xi_fraction > 0 && s.xi_fraction <= 1)) throw ValidationError("integrator.xi_fraction", "must lie in (0, 1]");
        if (s.landmark_period < 0) throw ValidationError("integrator.landmark_period", "must be >= 0");
    }

    if (const json* cs = r.find("checks")) {
        if (!cs->is_array()) throw ValidationError("checks", "expected an array");
        for (std::size_t k = 0; k < cs->size(); ++k)
            s.checks.push_back(detail::read_check((*cs)[k], "checks[" + std::to_string(k) + "]"));
    }
    if (const json* cs = r.find("certificates")) {
        if (!cs->is_array()) throw ValidationError("certificates", "expected an array");
        for (std::size_t k = 0; k < cs->size(); ++k)
            s.certificates.push_back(detail::read_certificate((*cs)[k], "certificates[" + std::to_string(k) + "]"));
    }
    if (const json* out = r.find("output")) {
        detail::ObjectReader orr(*out, "output");
        s.stride = detail::read_count(orr, "stride", 1);
        orr.finish();
    }
    const std::int64_t seed = r.integer_or("seed", 0);
    if (seed < 0) throw ValidationError("seed", "must be >= 0");
    s.seed = static_cast<std::uint64_t>(seed);
    r.finish();

    // Network-level validation: classification errors and discrete step widths.
    try {
        (void)s.network();
    } catch (const ClassificationError& e) {
        throw ValidationError("arcs", e.what());
    } catch (const DomainError& e) {
        throw ValidationError("arcs", e.what());
    }
    return s;
}

inline Scenario parse_scenario(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(e.what(), detail::line_of(text, e.byte == 0 ? 0 : e.byte - 1));
    }
    return scenario_from_json(j);
}

inline Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scenario file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

// ---------------------------------------------------------------------------
// Writing

inline json to_json(const WeightFunction& w) {
    return std::visit(
        detail::overloaded{
            [](const family::Zero&) { return json{{"family", "zero"}}; },
            [](const family::Constant& f) { return json{{"family", "constant"}, {"c", f.c}}; },
            [](const family::PowerDecay& f) { return json{{"family", "power_decay"}, {"c", f.c}, {"p", f.p}}; },
            [](const family::ExponentialDecay& f) {
                return json{{"family", "exponential_decay"}, {"c", f.c}, {"lambda", f.lambda}};
            },
            [](const family::PeriodicPulse& f) {
                return json{{"family", "periodic_pulse"}, {"height", f.height}, {"width", f.width},
                            {"period", f.period}, {"growth", f.growth}};
            },
            [](const family::Tabulated& f) {
                json j{{"family", "tabulated"}, {"breakpoints", f.breakpoints}, {"values", f.values}};
                if (f.declared) j["persistence"] = to_string(*f.declared);
                return j;
            },
        },
        w.variant());
}

inline json to_json(const CheckSpec& c) {
    json j{{"kind", to_string(c.kind)}};
    switch (c.kind) {
        case CheckKind::SelfConfidence: j["eta"] = c.eta; break;
        case CheckKind::ArcBalance: j["A"] = c.A; break;
        case CheckKind::IntegralArcBalance: j["A"] = c.A, j["interval"] = c.interval; break;
        case CheckKind::WindowBound: j["a_star"] = c.a_star, j["window"] = c.window; break;
        case CheckKind::CutBalance:
            j["K"] = c.K;
            j["scope"] = c.scope == ArcScope::Persistent ? "persistent" : "underlying";
            break;
        default: break;
    }
    j["expect"] = c.expect_pass ? "pass" : "fail";
    return j;
}

inline json to_json(const CertificateSpec& c) {
    json j{{"kind", to_string(c.kind)}};
    switch (c.kind) {
        case CertificateKind::DiscreteRate: j["eta"] = c.eta, j["a_star"] = c.a_star, j["T_star"] = c.T_star; break;
        case CertificateKind::ContinuousRate: j["A"] = c.A, j["a_star"] = c.a_star, j["tau0"] = c.tau0; break;
        case CertificateKind::AgreementSchedule: j["A"] = c.A, j["target_ratio"] = c.target_ratio; break;
        case CertificateKind::WindowViolation:
            j["epsilon"] = c.epsilon, j["T"] = c.T, j["A"] = c.A, j["search_to"] = c.search_to;
            break;
        case CertificateKind::LemmaBounds:
            j["max_T"] = c.max_T, j["start_stride"] = c.start_stride, j["window"] = c.window;
            break;
        default: break;
    }
    j["expect"] = c.expect_pass ? "pass" : "fail";
    return j;
}

inline json to_json(const Scenario& s) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["name"] = s.name;
    j["description"] = s.description;
    j["mode"] = to_string(s.mode);
    j["nodes"] = s.nodes;
    j["arcs"] = json::array();
    for (const auto& a : s.arcs) j["arcs"].push_back({{"from", a.arc.tail}, {"to", a.arc.head}, {"weight", to_json(a.weight)}});
    if (s.mode == TimeMode::Discrete) {
        bool all_complement = true;
        for (const auto& sw : s.self_weights) all_complement &= sw.kind == SelfWeight::Kind::Complement;
        if (all_complement) {
            j["self_weights"] = "complement";
        } else {
            j["self_weights"] = json::array();
            for (const auto& sw : s.self_weights)
                j["self_weights"].push_back(sw.kind == SelfWeight::Kind::Complement ? json("complement") : to_json(sw.fn));
        }
    }
    j["x0"] = s.x0.kind == InitialCondition::Kind::Values ? json(s.x0.values) : json(to_string(s.x0));
    j["t0"] = s.t0 ? json(*s.t0) : json("certified");
    j["horizon"] = s.horizon;
    if (s.mode == TimeMode::Continuous)
        j["integrator"] = {{"h_max", s.h_max}, {"xi_fraction", s.xi_fraction}, {"landmark_period", s.landmark_period}};
    j["checks"] = json::array();
    for (const auto& c : s.checks) j["checks"].push_back(to_json(c));
    j["certificates"] = json::array();
    for (const auto& c : s.certificates) j["certificates"].push_back(to_json(c));
    j["output"] = {{"stride", s.stride}};
    j["seed"] = s.seed;
    return j;
}

inline void save_scenario(const Scenario& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write scenario file " + path);
    out << to_json(s).dump(2) << '\n';
    if (!out) throw IoError("write failed for " + path);
}

}  // namespace persist
