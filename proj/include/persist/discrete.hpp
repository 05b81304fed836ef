#pragma once

// Discrete-time belief update x_i(t+1) = sum_{j in N_i} W_ij(t) x_j(t).

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "persist/checks.hpp"
#include "persist/metrics.hpp"
#include "persist/network.hpp"

namespace persist {

struct BeliefVector {
    std::vector<double> values;
    std::int64_t time = 0;
};

/// Dense record of every step of a discrete simulation; states[k] is the
/// belief vector at time t0 + k.
struct Trajectory {
    std::int64_t t0 = 0;
    std::vector<std::vector<double>> states;

    std::size_t size() const noexcept { return states.size(); }
    std::int64_t time(std::size_t k) const noexcept { return t0 + static_cast<std::int64_t>(k); }
    AgreementMetrics metrics_at(std::size_t k) const { return metrics(states.at(k)); }
};

inline BeliefVector step(const TimeVaryingNetwork& net, const BeliefVector& x) {
    require_discrete(net, "discrete step");
    const std::size_t n = net.node_count();
    if (x.values.size() != n) throw DomainError("belief vector length does not match network");
    const double t = static_cast<double>(x.time);
    BeliefVector next{std::vector<double>(n), x.time + 1};
    for (NodeId i = 0; i < n; ++i) {
        double xi = 0.0, acc = 0.0;
        for (std::size_t k : net.in_arcs(i)) {
            const WeightedArc& a = net.arcs()[k];
            double w = eval(a.weight, t);
            xi += w;
            acc += w * x.values[a.arc.tail];
        }
        const SelfWeight& sw = net.self_weights()[i];
        double self = sw.kind == SelfWeight::Kind::Complement ? 1.0 - xi : eval(sw.fn, t);
        if (self < 0.0) throw DomainError("negative self weight at node " + std::to_string(i) + ", t=" + std::to_string(t));
        if (double res = std::abs(self + xi - 1.0); res > kRowSumTolerance) throw RowSumViolation(i, t, res);
        next.values[i] = self * x.values[i] + acc;
    }
    return next;
}

/// Iterates `step` for `horizon` steps; the trajectory holds horizon + 1 states.
inline Trajectory simulate(const TimeVaryingNetwork& net, const BeliefVector& x0, std::int64_t horizon) {
    if (horizon < 0) throw DomainError("horizon must be >= 0");
    for (double v : x0.values)
        if (!std::isfinite(v)) throw DomainError("initial beliefs must be finite");
    Trajectory traj{x0.time, {}};
    traj.states.reserve(static_cast<std::size_t>(horizon) + 1);
    traj.states.push_back(x0.values);
    BeliefVector x = x0;
    for (std::int64_t k = 0; k < horizon; ++k) {
        x = step(net, x);
        traj.states.push_back(x.values);
    }
    return traj;
}

}  // namespace persist
