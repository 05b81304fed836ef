#pragma once

// Scenario execution: assumption checks, simulation, certificate verification,
// trajectory CSV and the run report (text and JSON with the same content).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "persist/analysis.hpp"
#include "persist/scenario.hpp"

namespace persist {

struct VerdictRecord {
    std::string stage;  ///< "check" or "certificate"
    std::string kind;
    Verdict verdict = Verdict::Pass;
    bool expect_pass = true;
    double worst = 0.0;
    std::string detail;
    std::string witness;

    bool as_expected() const { return (verdict != Verdict::Fail) == expect_pass; }

    friend bool operator==(const VerdictRecord&, const VerdictRecord&) = default;
};

struct RunReport {
    std::string scenario;
    std::string mode;
    std::uint64_t seed = 0;
    double t0 = 0.0;
    double t_end = 0.0;
    std::size_t samples = 0;
    double initial_H = 0.0;
    double final_H = 0.0;
    double min_H = 0.0;
    bool aborted = false;
    std::string abort_reason;
    std::vector<VerdictRecord> records;
    std::string trajectory_path;
    double wall_seconds = 0.0;

    bool ok() const {
        if (aborted) return false;
        for (const auto& r : records)
            if (!r.as_expected()) return false;
        return true;
    }
};

using AnyTrajectory = std::variant<Trajectory, ContinuousTrajectory>;

struct RunResult {
    RunReport report;
    AnyTrajectory trajectory;
};

struct RunOptions {
    std::string out_dir;                  ///< empty: no CSV written
    std::optional<std::size_t> stride;    ///< overrides the scenario's output stride
    std::optional<std::uint64_t> seed;    ///< overrides the scenario seed
};

// ---------------------------------------------------------------------------
// Formatting

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string describe(const Witness& w) {
    std::string s;
    if (w.node) s += "node " + std::to_string(*w.node) + " ";
    if (w.arc) s += "arc " + to_string(*w.arc) + " ";
    if (w.other_arc) s += "vs " + to_string(*w.other_arc) + " ";
    s += "t=" + fmt(w.t) + " value=" + fmt(w.value);
    if (!w.note.empty()) s += " (" + w.note + ")";
    return s;
}

// ---------------------------------------------------------------------------
// CSV

namespace detail {

template <class Row>
void write_csv(const std::string& path, std::size_t n, std::size_t count, std::size_t stride, Row row) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write trajectory file " + path);
    out << "t";
    for (std::size_t i = 0; i < n; ++i) out << ",x_" << i;
    out << ",psi,Psi,H\n";
    if (stride == 0) stride = 1;
    for (std::size_t k = 0; k < count; ++k) {
        if (k % stride != 0 && k + 1 != count) continue;
        auto [t, x] = row(k);
        auto m = metrics(x);
        out << fmt(t);
        for (double v : x) out << ',' << fmt(v);
        out << ',' << fmt(m.psi) << ',' << fmt(m.Psi) << ',' << fmt(m.H) << '\n';
    }
    if (!out) throw IoError("write failed for " + path);
}

}  // namespace detail

/// Header "t,x_0,...,x_{n-1},psi,Psi,H", one row per kept sample (every
/// `stride`-th plus the last), reals at 17 significant digits.
inline void emit_trajectory_csv(const Trajectory& traj, const std::string& path, std::size_t stride = 1) {
    const std::size_t n = traj.states.empty() ? 0 : traj.states.front().size();
    detail::write_csv(path, n, traj.size(), stride, [&](std::size_t k) {
        return std::pair<double, std::span<const double>>{static_cast<double>(traj.time(k)), traj.states[k]};
    });
}

inline void emit_trajectory_csv(const ContinuousTrajectory& traj, const std::string& path, std::size_t stride = 1) {
    const std::size_t n = traj.values.empty() ? 0 : traj.values.front().size();
    detail::write_csv(path, n, traj.size(), stride, [&](std::size_t k) {
        return std::pair<double, std::span<const double>>{traj.times[k], traj.values[k]};
    });
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

inline CsvTable read_trajectory_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty CSV file " + path, 1);
    std::stringstream hs(line);
    for (std::string cell; std::getline(hs, cell, ',');) table.header.push_back(cell);
    for (std::size_t lineno = 2; std::getline(in, line); ++lineno) {
        std::vector<double> row;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::logic_error&) {
                throw ParseError("bad number \"" + cell + "\"", lineno);
            }
        }
        if (row.size() != table.header.size()) throw ParseError("wrong column count", lineno);
        table.rows.push_back(std::move(row));
    }
    return table;
}

// ---------------------------------------------------------------------------
// Report rendering

inline json to_json(const RunReport& r, bool include_timing = false) {
    json j;
    j["scenario"] = r.scenario;
    j["mode"] = r.mode;
    j["seed"] = r.seed;
    j["t0"] = r.t0;
    j["t_end"] = r.t_end;
    j["samples"] = r.samples;
    j["initial_H"] = r.initial_H;
    j["final_H"] = r.final_H;
    j["min_H"] = r.min_H;
    j["aborted"] = r.aborted;
    j["abort_reason"] = r.abort_reason;
    j["records"] = json::array();
    for (const auto& v : r.records)
        j["records"].push_back({{"stage", v.stage},
                                {"kind", v.kind},
                                {"verdict", to_string(v.verdict)},
                                {"expect", v.expect_pass ? "pass" : "fail"},
                                {"as_expected", v.as_expected()},
                                {"worst", v.worst},
                                {"detail", v.detail},
                                {"witness", v.witness}});
    j["trajectory"] = r.trajectory_path;
    j["result"] = r.ok() ? "pass" : "fail";
    if (include_timing) j["wall_seconds"] = r.wall_seconds;
    return j;
}

inline RunReport report_from_json(const json& j) {
    try {
        RunReport r;
        r.scenario = j.at("scenario").get<std::string>();
        r.mode = j.at("mode").get<std::string>();
        r.seed = j.at("seed").get<std::uint64_t>();
        r.t0 = j.at("t0").get<double>();
        r.t_end = j.at("t_end").get<double>();
        r.samples = j.at("samples").get<std::size_t>();
        r.initial_H = j.at("initial_H").get<double>();
        r.final_H = j.at("final_H").get<double>();
        r.min_H = j.at("min_H").get<double>();
        r.aborted = j.at("aborted").get<bool>();
        r.abort_reason = j.at("abort_reason").get<std::string>();
        for (const auto& v : j.at("records")) {
            VerdictRecord rec;
            rec.stage = v.at("stage").get<std::string>();
            rec.kind = v.at("kind").get<std::string>();
            const std::string verdict = v.at("verdict").get<std::string>();
            rec.verdict = verdict == "pass" ? Verdict::Pass : verdict == "fail" ? Verdict::Fail : Verdict::Vacuous;
            rec.expect_pass = v.at("expect").get<std::string>() == "pass";
            rec.worst = v.at("worst").get<double>();
            rec.detail = v.at("detail").get<std::string>();
            rec.witness = v.at("witness").get<std::string>();
            r.records.push_back(std::move(rec));
        }
        r.trajectory_path = j.at("trajectory").get<std::string>();
        if (j.contains("wall_seconds")) r.wall_seconds = j.at("wall_seconds").get<double>();
        return r;
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed report: ") + e.what());
    }
}

inline std::string to_text(const RunReport& r, bool include_timing = false) {
    std::ostringstream o;
    o << "scenario " << r.scenario << "\n";
    o << "mode " << r.mode << "  seed " << r.seed << "\n";
    o << "t0 " << fmt(r.t0) << "  t_end " << fmt(r.t_end) << "  samples " << r.samples << "\n";
    o << "H initial " << fmt(r.initial_H) << "  final " << fmt(r.final_H) << "  min " << fmt(r.min_H) << "\n";
    if (r.aborted) o << "aborted: " << r.abort_reason << "\n";
    for (const auto& v : r.records) {
        o << v.stage << ' ' << v.kind << ": " << to_string(v.verdict) << " (expected "
          << (v.expect_pass ? "pass" : "fail") << ")" << (v.as_expected() ? "" : "  MISMATCH") << "\n";
        o << "  worst " << fmt(v.worst) << "  " << v.detail << "\n";
        if (!v.witness.empty()) o << "  witness " << v.witness << "\n";
    }
    if (!r.trajectory_path.empty()) o << "trajectory " << r.trajectory_path << "\n";
    if (include_timing) o << "wall " << fmt(r.wall_seconds) << " s\n";
    o << "result " << (r.ok() ? "PASS" : "FAIL") << "\n";
    return o.str();
}

// ---------------------------------------------------------------------------
// Execution

namespace detail {

inline std::vector<double> resolve_x0(const Scenario& s, const TimeVaryingNetwork& net, std::uint64_t seed) {
    const auto& x0 = s.x0;
    switch (x0.kind) {
        case InitialCondition::Kind::Values: return x0.values;
        case InitialCondition::Kind::ZeroOneSplit: return zero_one_split(s.nodes, x0.zero_nodes);
        case InitialCondition::Kind::ZeroOneSplitAuto: {
            auto split = find_split_components(net.persistence().persistent_graph);
            if (!split) throw DomainError("zero-one-split:auto needs a persistent graph without a center");
            return zero_one_split(s.nodes, split->Vu);
        }
        case InitialCondition::Kind::UniformRandom: {
            std::mt19937_64 rng(x0.seed.value_or(seed));
            std::uniform_real_distribution<double> u(0.0, 1.0);
            std::vector<double> v(s.nodes);
            for (double& e : v) e = u(rng);
            return v;
        }
    }
    return {};
}

/// Sample times for pointwise checks of a continuous run: a linear grid plus a
/// grid uniform in log(1 + t), so long horizons are covered at every scale.
inline std::vector<double> continuous_samples(double t0, double t_end) {
    std::vector<double> out;
    const int m = 500;
    for (int k = 0; k <= m; ++k) out.push_back(t0 + (t_end - t0) * k / m);
    const double a = std::log1p(t0), b = std::log1p(t_end);
    for (int k = 1; k < m; ++k) out.push_back(std::expm1(a + (b - a) * k / m));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

inline VerdictRecord from_check(const CheckReport& c, bool expect) {
    return {"check", c.check, c.verdict, expect, c.worst, c.detail, c.witness ? describe(*c.witness) : ""};
}

inline VerdictRecord run_check(const CheckSpec& spec, const TimeVaryingNetwork& net, double t0, double t_end,
                               std::uint64_t seed) {
    const bool discrete = net.mode() == TimeMode::Discrete;
    std::vector<std::int64_t> steps;
    std::vector<double> times;
    if (discrete) {
        for (auto t = static_cast<std::int64_t>(t0); t < static_cast<std::int64_t>(t_end); ++t) {
            steps.push_back(t);
            times.push_back(static_cast<double>(t));
        }
    } else {
        times = continuous_samples(t0, t_end);
    }
    const Digraph& gp = net.persistence().persistent_graph;
    switch (spec.kind) {
        case CheckKind::Stochasticity: return from_check(check_stochasticity(net, steps), spec.expect_pass);
        case CheckKind::SelfConfidence: return from_check(check_self_confidence(net, spec.eta, steps), spec.expect_pass);
        case CheckKind::ArcBalance: return from_check(check_arc_balance(net, spec.A, times), spec.expect_pass);
        case CheckKind::IntegralArcBalance: {
            std::vector<std::pair<double, double>> iv;
            for (double t : times) iv.emplace_back(t, t + spec.interval);
            return from_check(check_integral_arc_balance(net, spec.A, iv), spec.expect_pass);
        }
        case CheckKind::WindowBound: return from_check(check_window_bound(net, spec.a_star, spec.window, times), spec.expect_pass);
        case CheckKind::CutBalance: {
            CutBalanceOptions opt;
            opt.scope = spec.scope;
            opt.seed = seed;
            return from_check(check_cut_balance(net, spec.K, times, opt), spec.expect_pass);
        }
        case CheckKind::PersistentQsc: {
            auto c = centers(gp);
            std::string detail = c.empty() ? "persistent graph has no center"
                                           : std::to_string(c.size()) + " center(s), diameter " + std::to_string(diameter(gp));
            return {"check", to_string(spec.kind), c.empty() ? Verdict::Fail : Verdict::Pass, spec.expect_pass,
                    static_cast<double>(c.size()), detail, ""};
        }
        case CheckKind::PersistentStronglyConnected: {
            bool sc = is_strongly_connected(gp);
            return {"check", to_string(spec.kind), sc ? Verdict::Pass : Verdict::Fail, spec.expect_pass, sc ? 1.0 : 0.0,
                    sc ? "persistent graph strongly connected" : "persistent graph not strongly connected", ""};
        }
    }
    throw DomainError("unhandled check kind");
}

inline std::size_t persistent_diameter(const TimeVaryingNetwork& net) {
    const Digraph& gp = net.persistence().persistent_graph;
    if (!is_quasi_strongly_connected(gp)) throw DomainError("persistent graph has no center");
    return diameter(gp);
}

inline RateCertificate continuous_certificate(const TimeVaryingNetwork& net, double A, double a_star, double tau0) {
    return continuous_rate_bound(A, net.node_count(), theta_total_integral(ThetaFunction::of(net)), a_star, tau0,
                                 persistent_diameter(net));
}

/// Contraction factor used per round of the agreement schedule.
inline RateCertificate schedule_certificate(const TimeVaryingNetwork& net, double A) {
    // a* and tau0 do not enter epsilon; any positive placeholders give the same m0.
    return continuous_certificate(net, A, 1.0, 1.0);
}

inline std::vector<double> schedule_times(const TimeVaryingNetwork& net, const CertificateSpec& c, double t0) {
    auto cert = schedule_certificate(net, c.A);
    return agreement_schedule(net, t0, persistent_diameter(net), rounds_for_ratio(cert.epsilon, c.target_ratio));
}

inline VerdictRecord contraction_record(const CertificateSpec& spec, const RateCertificate& cert,
                                        const ContractionReport& rep) {
    return {"certificate",
            to_string(spec.kind),
            rep.verdict,
            spec.expect_pass,
            rep.worst_margin,
            "epsilon " + fmt(cert.epsilon) + "  T0 " + fmt(cert.T0) + "  windows " + std::to_string(rep.windows),
            "t=" + fmt(rep.witness_t)};
}

inline VerdictRecord bound_record(const CertificateSpec& spec, const BoundReport& rep, const std::string& what) {
    return {"certificate",
            to_string(spec.kind),
            rep.verdict,
            spec.expect_pass,
            rep.worst_violation,
            what + "  checked " + std::to_string(rep.checked),
            rep.witness_node ? "node " + std::to_string(*rep.witness_node) + " t=" + fmt(rep.witness_t) : ""};
}

template <class Traj>
VerdictRecord floor_record(const CertificateSpec& spec, const LowerBoundCertificate& cert, const Traj& traj,
                           const TimeVaryingNetwork& net, double t0) {
    auto split = find_split_components(net.persistence().persistent_graph);
    if (!split) throw DomainError("floor certificate needs a persistent graph without a center");
    const auto& states = [&]() -> const std::vector<std::vector<double>>& {
        if constexpr (std::is_same_v<Traj, Trajectory>) return traj.states;
        else return traj.values;
    }();
    auto ext = component_extremes(states, split->Vu, split->Vw);
    double worst = kInf;
    std::size_t at = 0;
    for (std::size_t k = 0; k < ext.size(); ++k) {
        double m = std::min(ext[k].L, metrics(states[k]).H);
        if (m < worst) worst = m, at = k;
    }
    const double tol = 1e-9;
    Verdict v = worst >= cert.floor - tol ? Verdict::Pass : Verdict::Fail;
    std::string detail = "floor " + fmt(cert.floor) + "  required t0 " + fmt(cert.required_t0);
    if (cert.kind == LowerBoundCertificate::Kind::DiscreteSigma) detail += "  sigma* " + fmt(cert.sigma_star);
    detail += "  theta tail " + fmt(cert.theta_tail);
    if (t0 < cert.required_t0) {
        v = Verdict::Fail;
        detail += "  start precedes certified t0";
    }
    double t_at;
    if constexpr (std::is_same_v<Traj, Trajectory>) t_at = static_cast<double>(traj.time(at));
    else t_at = traj.times[at];
    return {"certificate", to_string(spec.kind), v, spec.expect_pass, worst - cert.floor, detail, "t=" + fmt(t_at)};
}

inline VerdictRecord failed(const CertificateSpec& spec, const std::string& why) {
    return {"certificate", to_string(spec.kind), Verdict::Fail, spec.expect_pass, kInf, why, ""};
}

inline VerdictRecord run_certificate(const CertificateSpec& spec, const TimeVaryingNetwork& net, const AnyTrajectory& any,
                                     double t0, const std::vector<double>& schedule) {
    const auto* dtraj = std::get_if<Trajectory>(&any);
    const auto* ctraj = std::get_if<ContinuousTrajectory>(&any);
    auto need = [&](bool ok, const char* what) {
        if (!ok) throw DomainError(std::string(to_string(spec.kind)) + " applies to " + what + " scenarios only");
    };
    switch (spec.kind) {
        case CertificateKind::DiscreteRate: {
            need(dtraj, "discrete");
            auto cert = discrete_rate_bound(spec.eta, spec.a_star, spec.T_star, persistent_diameter(net));
            return contraction_record(spec, cert, verify_contraction(*dtraj, cert));
        }
        case CertificateKind::ContinuousRate: {
            need(ctraj, "continuous");
            auto cert = continuous_certificate(net, spec.A, spec.a_star, spec.tau0);
            return contraction_record(spec, cert, verify_contraction(*ctraj, cert));
        }
        case CertificateKind::AgreementSchedule: {
            need(ctraj, "continuous");
            auto cert = schedule_certificate(net, spec.A);
            std::vector<std::size_t> at;
            for (double t : schedule) {
                auto it = std::lower_bound(ctraj->times.begin(), ctraj->times.end(), t);
                if (it == ctraj->times.end() || *it != t)
                    return failed(spec, "schedule time " + fmt(t) + " lies beyond the integrated horizon");
                at.push_back(static_cast<std::size_t>(it - ctraj->times.begin()));
            }
            auto rep = verify_contraction_at(*ctraj, at, cert.epsilon);
            auto rec = contraction_record(spec, cert, rep);
            const double H0 = ctraj->metrics_at(at.front()).H, H1 = ctraj->metrics_at(at.back()).H;
            const double ratio = H0 > 0 ? H1 / H0 : 0.0;
            rec.detail = "epsilon " + fmt(cert.epsilon) + " per round  rounds " + std::to_string(at.size() - 1) +
                         "  t_end " + fmt(schedule.back()) + "  H ratio " + fmt(ratio) + " vs target " +
                         fmt(spec.target_ratio);
            if (!(ratio < spec.target_ratio)) rec.verdict = Verdict::Fail;
            return rec;
        }
        case CertificateKind::SigmaFloor: {
            need(dtraj, "discrete");
            auto cert = sigma_star_certificate(ThetaFunction::of(net), static_cast<std::int64_t>(t0));
            return floor_record(spec, cert, *dtraj, net, t0);
        }
        case CertificateKind::ThetaFloor: {
            need(ctraj, "continuous");
            auto cert = continuous_floor_certificate(ThetaFunction::of(net), t0);
            return floor_record(spec, cert, *ctraj, net, t0);
        }
        case CertificateKind::WindowViolation: {
            need(dtraj, "discrete");
            const double threshold = window_violation_threshold(spec.A, net.node_count(), spec.epsilon);
            auto found = find_window_violation(net, spec.T, threshold, static_cast<std::int64_t>(t0), spec.search_to);
            if (!found) return failed(spec, "no window below threshold " + fmt(threshold) + " up to t=" + std::to_string(spec.search_to));
            const auto k = static_cast<std::size_t>(*found - dtraj->t0);
            const auto T = static_cast<std::size_t>(spec.T);
            if (k + T >= dtraj->size()) return failed(spec, "violation window at t*=" + std::to_string(*found) + " runs past the horizon");
            const double H_start = dtraj->metrics_at(k).H, H_end = dtraj->metrics_at(k + T).H;
            const double margin = H_end - spec.epsilon * H_start;
            return {"certificate",
                    to_string(spec.kind),
                    margin > 0 ? Verdict::Pass : Verdict::Fail,
                    spec.expect_pass,
                    margin,
                    "threshold " + fmt(threshold) + "  H(t*) " + fmt(H_start) + "  H(t*+T) " + fmt(H_end),
                    "t*=" + std::to_string(*found)};
        }
        case CertificateKind::LemmaBounds: {
            if (dtraj) return bound_record(spec, verify_convexity_bounds(*dtraj, net, spec.max_T), "convexity bounds, T <= " + std::to_string(spec.max_T));
            auto rep = verify_exponential_bounds(*ctraj, net, spec.start_stride);
            detail::merge(rep, verify_influence_bounds(*ctraj, net, spec.window, spec.start_stride));
            return bound_record(spec, rep, "exponential and influence bounds");
        }
    }
    throw DomainError("unhandled certificate kind");
}

}  // namespace detail

/// Start time a scenario runs from: explicit, or the earliest start the floor
/// certificate of its mode accepts.
inline double resolve_t0(const Scenario& s, const TimeVaryingNetwork& net) {
    if (s.t0) return *s.t0;
    auto theta = ThetaFunction::of(net);
    if (s.mode == TimeMode::Discrete) return sigma_star_certificate(theta, 0).required_t0;
    return continuous_floor_certificate(theta, 0.0, true).required_t0;
}

/// Runs checks only (no simulation).
inline RunReport check_scenario(const Scenario& s, std::optional<std::uint64_t> seed = {}) {
    const auto net = s.network();
    RunReport r;
    r.scenario = s.name;
    r.mode = to_string(s.mode);
    r.seed = seed.value_or(s.seed);
    r.t0 = resolve_t0(s, net);
    r.t_end = r.t0 + s.horizon;
    for (const auto& c : s.checks) r.records.push_back(detail::run_check(c, net, r.t0, r.t_end, r.seed));
    return r;
}

inline RunResult run_scenario(const Scenario& s, const RunOptions& opt = {}) {
    const auto start = std::chrono::steady_clock::now();
    const auto net = s.network();
    RunResult result{check_scenario(s, opt.seed), Trajectory{}};
    RunReport& r = result.report;

    for (const auto& rec : r.records)
        if (!rec.as_expected()) {
            r.aborted = true;
            r.abort_reason = "check " + rec.kind + " " + to_string(rec.verdict) + " (expected " +
                             (rec.expect_pass ? "pass" : "fail") + ")" + (rec.witness.empty() ? "" : " at " + rec.witness);
            r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            return result;
        }

    const auto x0 = detail::resolve_x0(s, net, r.seed);
    std::vector<double> schedule;
    if (s.mode == TimeMode::Discrete) {
        result.trajectory = simulate(net, {x0, static_cast<std::int64_t>(r.t0)}, static_cast<std::int64_t>(s.horizon));
    } else {
        IntegrateOptions io;
        io.h_max = s.h_max;
        io.xi_fraction = s.xi_fraction;
        io.landmark_period = s.landmark_period;
        for (const auto& c : s.certificates) {
            if (c.kind == CertificateKind::ContinuousRate && io.landmark_period == 0.0) {
                // sample on a grid that divides T0 so every sample has a partner T0 later
                const double T0 = detail::continuous_certificate(net, c.A, c.a_star, c.tau0).T0;
                io.landmark_period = T0 / std::ceil(T0 / s.h_max);
            }
            if (c.kind == CertificateKind::AgreementSchedule) {
                schedule = detail::schedule_times(net, c, r.t0);
                io.landmarks.insert(io.landmarks.end(), schedule.begin(), schedule.end());
            }
        }
        result.trajectory = integrate(net, x0, r.t0, r.t_end, io);
    }

    std::visit(
        [&](const auto& traj) {
            r.samples = traj.size();
            r.initial_H = traj.metrics_at(0).H;
            r.final_H = traj.metrics_at(traj.size() - 1).H;
            r.min_H = kInf;
            for (std::size_t k = 0; k < traj.size(); ++k) r.min_H = std::min(r.min_H, traj.metrics_at(k).H);
        },
        result.trajectory);

    for (const auto& c : s.certificates) {
        try {
            r.records.push_back(detail::run_certificate(c, net, result.trajectory, r.t0, schedule));
        } catch (const Error& e) {
            r.records.push_back(detail::failed(c, e.what()));
        }
    }

    if (!opt.out_dir.empty()) {
        std::filesystem::create_directories(opt.out_dir);
        const std::string path = (std::filesystem::path(opt.out_dir) / (s.name + ".csv")).string();
        const std::size_t stride = opt.stride.value_or(s.stride);
        std::visit([&](const auto& traj) { emit_trajectory_csv(traj, path, stride); }, result.trajectory);
        r.trajectory_path = s.name + ".csv";
    }
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

/// Writes NAME.report.txt and NAME.report.json (timing excluded) into `dir`.
inline void write_report(const RunReport& r, const std::string& dir) {
    std::filesystem::create_directories(dir);
    const auto base = std::filesystem::path(dir) / r.scenario;
    std::ofstream txt(base.string() + ".report.txt");
    std::ofstream js(base.string() + ".report.json");
    if (!txt || !js) throw IoError("cannot write report files in " + dir);
    txt << to_text(r);
    js << to_json(r).dump(2) << '\n';
}

}  // namespace persist
