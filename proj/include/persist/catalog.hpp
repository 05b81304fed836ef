#pragma once

// Built-in scenarios S1-S6 and a seeded generator of random scenarios for
// property tests.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "persist/scenario.hpp"

namespace persist {

namespace detail {

inline WeightedArc arc(NodeId from, NodeId to, WeightFunction w) { return {{from, to}, std::move(w)}; }

inline CheckSpec check(CheckKind kind, bool expect_pass = true) {
    CheckSpec c;
    c.kind = kind;
    c.expect_pass = expect_pass;
    return c;
}

inline CertificateSpec certificate(CertificateKind kind) {
    CertificateSpec c;
    c.kind = kind;
    return c;
}

}  // namespace detail

/// Discrete contraction: out-star persistent graph with a vanishing arc back
/// into the center, complement self weights.
inline Scenario scenario_s1() {
    using namespace detail;
    Scenario s;
    s.name = "S1";
    s.description = "discrete out-star, constant persistent arcs, vanishing return arc; rate certificate holds";
    s.mode = TimeMode::Discrete;
    s.nodes = 5;
    for (NodeId i = 1; i < 5; ++i) s.arcs.push_back(arc(0, i, WeightFunction::constant(0.2)));
    s.arcs.push_back(arc(1, 0, WeightFunction::exponential_decay(0.5, 0.1)));
    s.x0.kind = InitialCondition::Kind::UniformRandom;
    s.x0.seed = 11;
    s.t0 = 0.0;
    s.horizon = 10000;
    auto eta = check(CheckKind::SelfConfidence);
    eta.eta = 0.2;
    auto balance = check(CheckKind::ArcBalance);
    balance.A = 1.0;
    auto window = check(CheckKind::WindowBound);
    window.a_star = 0.2;
    window.window = 1;
    s.checks = {check(CheckKind::Stochasticity), eta, balance, window, check(CheckKind::PersistentQsc)};
    auto rate = certificate(CertificateKind::DiscreteRate);
    rate.eta = 0.2;
    rate.a_star = 0.2;
    rate.T_star = 1;
    s.certificates = {rate, certificate(CertificateKind::LemmaBounds)};
    s.stride = 10;
    return s;
}

/// Discrete 3-cycle of pulses whose gaps grow geometrically: every arc stays
/// persistent, but windows of 100 steps eventually carry no weight at all.
inline Scenario scenario_s2() {
    using namespace detail;
    Scenario s;
    s.name = "S2";
    s.description = "discrete pulse cycle with growing gaps; window bound fails and the spread stalls over a window";
    s.mode = TimeMode::Discrete;
    s.nodes = 3;
    const auto pulse = WeightFunction::periodic_pulse(0.25, 2.0, 4.0, 1.5);
    s.arcs = {arc(0, 1, pulse), arc(1, 2, pulse), arc(2, 0, pulse)};
    s.x0.kind = InitialCondition::Kind::ZeroOneSplit;
    s.x0.zero_nodes = {0};
    s.t0 = 0.0;
    s.horizon = 400;
    auto window = check(CheckKind::WindowBound, false);
    window.a_star = 0.25;
    window.window = 100;
    s.checks = {check(CheckKind::Stochasticity), check(CheckKind::PersistentStronglyConnected), window};
    auto violation = certificate(CertificateKind::WindowViolation);
    violation.epsilon = 0.5;
    violation.T = 100;
    violation.A = 1.0;
    violation.search_to = 300;
    s.certificates = {violation, certificate(CertificateKind::LemmaBounds)};
    return s;
}

/// Two strongly connected blocks joined only by vanishing arcs, discrete.
inline Scenario scenario_s3() {
    using namespace detail;
    Scenario s;
    s.name = "S3";
    s.description = "discrete two-block network with vanishing cross arcs; spread stays above sigma*/2";
    s.mode = TimeMode::Discrete;
    s.nodes = 4;
    const auto inner = WeightFunction::constant(0.25);
    const auto cross = WeightFunction::exponential_decay(0.1, 0.5);
    s.arcs = {arc(0, 1, inner), arc(1, 0, inner), arc(2, 3, inner), arc(3, 2, inner), arc(1, 2, cross), arc(3, 0, cross)};
    s.x0.kind = InitialCondition::Kind::ZeroOneSplitAuto;
    s.t0 = std::nullopt;
    s.horizon = 10000;
    auto eta = check(CheckKind::SelfConfidence);
    eta.eta = 0.5;
    s.checks = {check(CheckKind::Stochasticity), eta, check(CheckKind::PersistentQsc, false)};
    s.certificates = {certificate(CertificateKind::SigmaFloor), certificate(CertificateKind::LemmaBounds)};
    s.stride = 10;
    return s;
}

/// Continuous counterpart of S3.
inline Scenario scenario_s3_continuous() {
    using namespace detail;
    Scenario s;
    s.name = "S3-continuous";
    s.description = "continuous two-block network with vanishing cross arcs; spread stays above 2exp(-int theta)-1";
    s.mode = TimeMode::Continuous;
    s.nodes = 4;
    const auto inner = WeightFunction::constant(1.0);
    const auto cross = WeightFunction::exponential_decay(0.1, 0.5);
    s.arcs = {arc(0, 1, inner), arc(1, 0, inner), arc(2, 3, inner), arc(3, 2, inner), arc(1, 2, cross), arc(3, 0, cross)};
    s.x0.kind = InitialCondition::Kind::ZeroOneSplitAuto;
    s.t0 = std::nullopt;
    s.horizon = 100;
    auto balance = check(CheckKind::ArcBalance);
    balance.A = 1.0;
    s.checks = {balance, check(CheckKind::PersistentQsc, false)};
    auto lemma = certificate(CertificateKind::LemmaBounds);
    lemma.start_stride = 10000;
    lemma.window = 2000;
    s.certificates = {certificate(CertificateKind::ThetaFloor), lemma};
    s.stride = 100;
    return s;
}

/// Continuous out-star with harmonic weights: persistent, balanced, centered,
/// but no window of fixed length carries a uniform amount of weight.
inline Scenario scenario_s4() {
    using namespace detail;
    Scenario s;
    s.name = "S4";
    s.description = "continuous out-star with 1/(1+t) weights; agreement along the round schedule without a window bound";
    s.mode = TimeMode::Continuous;
    s.nodes = 3;
    const auto harmonic = WeightFunction::power_decay(1.0, 1.0);
    s.arcs = {arc(0, 1, harmonic), arc(0, 2, harmonic)};
    s.x0.values = {1.0, 0.0, 0.5};
    s.t0 = 0.0;
    s.horizon = 5e21;
    s.h_max = 1e30;
    s.xi_fraction = 0.05;
    auto balance = check(CheckKind::ArcBalance);
    balance.A = 1.0;
    auto window = check(CheckKind::WindowBound, false);
    window.a_star = 0.1;
    window.window = 1.0;
    s.checks = {balance, check(CheckKind::PersistentQsc), window};
    auto schedule = certificate(CertificateKind::AgreementSchedule);
    schedule.A = 1.0;
    schedule.target_ratio = 0.01;
    auto lemma = certificate(CertificateKind::LemmaBounds);
    lemma.start_stride = 50;
    lemma.window = 200;
    s.certificates = {schedule, lemma};
    return s;
}

/// Continuous complete digraph on three nodes with unit rates.
inline Scenario scenario_s5() {
    using namespace detail;
    Scenario s;
    s.name = "S5";
    s.description = "continuous complete digraph, unit rates; rate certificate 15/16 over ln 2";
    s.mode = TimeMode::Continuous;
    s.nodes = 3;
    for (NodeId i = 0; i < 3; ++i)
        for (NodeId j = 0; j < 3; ++j)
            if (i != j) s.arcs.push_back(arc(i, j, WeightFunction::constant(1.0)));
    s.x0.values = {0.0, 0.3, 1.0};
    s.t0 = 0.0;
    s.horizon = 50;
    auto balance = check(CheckKind::ArcBalance);
    balance.A = 1.0;
    auto window = check(CheckKind::WindowBound);
    window.a_star = std::numbers::ln2;
    window.window = std::numbers::ln2;
    s.checks = {balance, window, check(CheckKind::PersistentStronglyConnected)};
    auto rate = certificate(CertificateKind::ContinuousRate);
    rate.A = 1.0;
    rate.a_star = std::numbers::ln2;
    rate.tau0 = std::numbers::ln2;
    auto lemma = certificate(CertificateKind::LemmaBounds);
    lemma.start_stride = 2500;
    lemma.window = 2000;
    s.certificates = {rate, lemma};
    s.stride = 50;
    return s;
}

/// Continuous out-star: arc balance holds, cut balance cannot (nothing flows
/// back into the center), agreement still follows.
inline Scenario scenario_s6() {
    using namespace detail;
    Scenario s;
    s.name = "S6";
    s.description = "continuous out-star; arc balance holds while cut balance fails for any K";
    s.mode = TimeMode::Continuous;
    s.nodes = 4;
    for (NodeId i = 1; i < 4; ++i) s.arcs.push_back(arc(0, i, WeightFunction::constant(1.0)));
    s.x0.values = {1.0, 0.0, 0.25, 0.5};
    s.t0 = 0.0;
    s.horizon = 20;
    auto balance = check(CheckKind::ArcBalance);
    balance.A = 1.0;
    auto cut = check(CheckKind::CutBalance, false);
    cut.K = 1e6;
    s.checks = {balance, check(CheckKind::PersistentQsc), cut};
    auto rate = certificate(CertificateKind::ContinuousRate);
    rate.A = 1.0;
    rate.a_star = 1.0;
    rate.tau0 = 1.0;
    auto lemma = certificate(CertificateKind::LemmaBounds);
    lemma.start_stride = 1000;
    lemma.window = 1000;
    s.certificates = {rate, lemma};
    s.stride = 20;
    return s;
}

inline std::vector<Scenario> catalog() {
    return {scenario_s1(), scenario_s2(), scenario_s3(), scenario_s3_continuous(),
            scenario_s4(), scenario_s5(), scenario_s6()};
}

inline std::optional<Scenario> find_in_catalog(const std::string& name) {
    for (auto& s : catalog())
        if (s.name == name) return s;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Random scenarios

/// Weight function of a random family with supremum at most `cap`. Discrete
/// pulses are at least one step wide.
inline WeightFunction random_weight(std::mt19937_64& rng, TimeMode mode, double cap) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto in = [&](double lo, double hi) { return lo + (hi - lo) * u(rng); };
    const double c = cap * in(0.1, 1.0);
    switch (std::uniform_int_distribution<int>(0, 5)(rng)) {
        case 0: return WeightFunction::zero();
        case 1: return WeightFunction::constant(c);
        case 2: return WeightFunction::power_decay(c, in(0.2, 2.5));
        case 3: return WeightFunction::exponential_decay(c, in(0.02, 1.0));
        case 4: {
            const double width = mode == TimeMode::Discrete ? in(1.0, 3.0) : in(0.1, 1.0);
            const double growth = u(rng) < 0.5 ? 1.0 : in(1.0, 1.5);
            return WeightFunction::periodic_pulse(c, width, width + in(0.0, 4.0), growth);
        }
        default: {
            std::vector<double> bp{0.0}, vals;
            const int pieces = std::uniform_int_distribution<int>(1, 4)(rng);
            for (int k = 1; k < pieces; ++k) bp.push_back(bp.back() + in(0.5, 3.0));
            for (int k = 0; k < pieces; ++k) vals.push_back(cap * u(rng));
            if (u(rng) < 0.5) vals.back() = 0.0;
            const auto declared = vals.back() > 0.0 ? Persistence::Persistent : Persistence::Vanishing;
            return WeightFunction::tabulated(std::move(bp), std::move(vals), declared);
        }
    }
}

/// Random network on 2-6 nodes with uniform random beliefs. Discrete incoming
/// weights are scaled so every row stays stochastic with complement self weights.
inline Scenario random_scenario(std::uint64_t seed, TimeMode mode) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Scenario s;
    s.name = "random-" + std::to_string(seed);
    s.description = "seeded random network";
    s.mode = mode;
    s.nodes = static_cast<std::size_t>(std::uniform_int_distribution<int>(2, 6)(rng));
    std::vector<Arc> arcs;
    for (NodeId j = 0; j < s.nodes; ++j)
        for (NodeId i = 0; i < s.nodes; ++i)
            if (i != j && u(rng) < 0.45) arcs.push_back({j, i});
    std::vector<std::size_t> indegree(s.nodes, 0);
    for (const Arc& a : arcs) ++indegree[a.head];
    for (const Arc& a : arcs) {
        const double cap = mode == TimeMode::Discrete ? 1.0 / static_cast<double>(indegree[a.head]) : 3.0;
        s.arcs.push_back({a, random_weight(rng, mode, cap)});
    }
    s.x0.kind = InitialCondition::Kind::UniformRandom;
    s.seed = seed;
    s.t0 = 0.0;
    s.horizon = mode == TimeMode::Discrete ? 200 : 5;
    if (mode == TimeMode::Discrete) s.checks = {detail::check(CheckKind::Stochasticity)};
    else s.h_max = 1e-2;
    return s;
}

}  // namespace persist
