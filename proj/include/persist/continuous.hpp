#pragma once

// Continuous-time belief dynamics x_i' = sum_{j in N_i} W_ij(t) (x_j - x_i).
//
// The integrator is a two-stage strong-stability-preserving Runge-Kutta scheme
// (Heun form): the new state is the average of the old state and two chained
// forward-Euler steps. Each Euler step with h * xi+(t; i) <= 1 is a convex
// combination of the current beliefs, so every accepted step keeps the belief
// hull, and Psi / psi stay monotone up to rounding. Steps never straddle a
// weight discontinuity: weight breakpoints are step boundaries, and the second
// stage reads left limits, which gives Caratheodory solutions for piecewise
// continuous weights.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "persist/metrics.hpp"
#include "persist/network.hpp"

namespace persist {

struct StepRecord {
    double h;
    double max_xi;  ///< largest xi+ seen at either stage of the step
};

struct ContinuousTrajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> values;
    std::vector<StepRecord> steps;  ///< steps[k] produced sample k + 1

    std::size_t size() const noexcept { return times.size(); }
    AgreementMetrics metrics_at(std::size_t k) const { return metrics(values.at(k)); }
};

struct IntegrateOptions {
    double h_max = 1e-3;
    /// Stage bound h * xi+ <= xi_fraction. Must lie in (0, 1]; 1/2 by default.
    double xi_fraction = 0.5;
    /// Extra times the integrator must land on exactly.
    std::vector<double> landmarks;
    /// If > 0, t0 + k * landmark_period are landmarks as well.
    double landmark_period = 0.0;
};

inline constexpr double kMinStep = 1e-12;

namespace detail {

template <class Eval>
void rhs(const TimeVaryingNetwork& net, std::span<const double> x, Eval&& weight_at, std::vector<double>& out,
         std::vector<double>& xi) {
    const std::size_t n = net.node_count();
    out.assign(n, 0.0);
    xi.assign(n, 0.0);
    for (const WeightedArc& a : net.arcs()) {
        double w = weight_at(a.weight);
        out[a.arc.head] += w * x[a.arc.tail];
        xi[a.arc.head] += w;
    }
}

/// One forward-Euler step in convex form: (1 - h xi_i) x_i + h sum_j W_ij x_j.
template <class Eval>
std::vector<double> euler(const TimeVaryingNetwork& net, std::span<const double> x, double h, Eval&& weight_at) {
    std::vector<double> inflow, xi;
    rhs(net, x, weight_at, inflow, xi);
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = (1.0 - h * xi[i]) * x[i] + h * inflow[i];
    return y;
}

inline double max_xi(const TimeVaryingNetwork& net, double t, bool left) {
    std::vector<double> xi(net.node_count(), 0.0);
    for (const WeightedArc& a : net.arcs()) xi[a.arc.head] += left ? eval_left(a.weight, t) : eval(a.weight, t);
    return xi.empty() ? 0.0 : *std::max_element(xi.begin(), xi.end());
}

}  // namespace detail

/// Exact right-hand side at t (right-continuous weights).
inline std::vector<double> derivative(const TimeVaryingNetwork& net, std::span<const double> x, double t) {
    if (x.size() != net.node_count()) throw DomainError("belief vector length does not match network");
    std::vector<double> inflow, xi;
    detail::rhs(net, x, [&](const WeightFunction& w) { return eval(w, t); }, inflow, xi);
    for (std::size_t i = 0; i < x.size(); ++i) inflow[i] -= xi[i] * x[i];
    return inflow;
}

inline ContinuousTrajectory integrate(const TimeVaryingNetwork& net, std::span<const double> x0, double t0,
                                      double t_end, const IntegrateOptions& opt) {
    if (net.mode() != TimeMode::Continuous) throw DomainError("integrate needs a continuous-time network");
    if (x0.size() != net.node_count()) throw DomainError("belief vector length does not match network");
    if (!(t0 >= 0.0) || !(t_end > t0)) throw DomainError("integrate needs t_end > t0 >= 0");
    if (!(opt.h_max > 0.0)) throw DomainError("h_max must be > 0");
    if (!(opt.xi_fraction > 0.0 && opt.xi_fraction <= 1.0)) throw DomainError("xi_fraction must lie in (0, 1]");

    std::vector<double> stops;
    for (const WeightedArc& a : net.arcs())
        for (double b : breakpoints(a.weight, t0, t_end)) stops.push_back(b);
    for (double l : opt.landmarks)
        if (l > t0 && l < t_end) stops.push_back(l);
    if (opt.landmark_period > 0.0)
        for (std::int64_t k = 1;; ++k) {
            double l = t0 + static_cast<double>(k) * opt.landmark_period;
            if (l >= t_end) break;
            stops.push_back(l);
        }
    stops.push_back(t_end);
    std::sort(stops.begin(), stops.end());
    stops.erase(std::unique(stops.begin(), stops.end()), stops.end());

    ContinuousTrajectory traj;
    traj.times.push_back(t0);
    traj.values.emplace_back(x0.begin(), x0.end());
    double t = t0;
    std::vector<double> x(x0.begin(), x0.end());
    auto next_stop = std::upper_bound(stops.begin(), stops.end(), t);
    while (t < t_end) {
        while (*next_stop <= t) ++next_stop;
        const double room = *next_stop - t;
        double h = std::min(opt.h_max, room);
        const double xi0 = detail::max_xi(net, t, false);
        if (xi0 > 0.0) h = std::min(h, opt.xi_fraction / xi0);
        double xi1 = detail::max_xi(net, t + h, true);
        while (h * xi1 > opt.xi_fraction) {
            h = std::min(h * 0.5, opt.xi_fraction / xi1);
            if (h < kMinStep) break;
            xi1 = detail::max_xi(net, t + h, true);
        }
        if (h < kMinStep && h < room)
            throw StepUnderflow("step size underflow at t=" + std::to_string(t) + " (weights too large)");
        if (h < room && room <= h * (1.0 + 1e-6)) {
            // a stop just past the allowed step: take it exactly rather than leave a sliver,
            // provided both stages stay convex combinations
            const double xi_stop = detail::max_xi(net, *next_stop, true);
            if (room * std::max(xi0, xi_stop) <= 1.0) {
                h = room;
                xi1 = xi_stop;
            } else {
                h = 0.5 * room;
                xi1 = detail::max_xi(net, t + h, true);
            }
        }
        const bool to_stop = h >= room;
        const double t_next = to_stop ? *next_stop : t + h;
        h = t_next - t;

        auto y1 = detail::euler(net, x, h, [&](const WeightFunction& w) { return eval(w, t); });
        auto y2 = detail::euler(net, y1, h, [&](const WeightFunction& w) { return eval_left(w, t_next); });
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = 0.5 * x[i] + 0.5 * y2[i];

        t = t_next;
        traj.times.push_back(t);
        traj.values.push_back(x);
        traj.steps.push_back({h, std::max(xi0, xi1)});
    }
    return traj;
}

/// Convenience overload with default options apart from h_max.
inline ContinuousTrajectory integrate(const TimeVaryingNetwork& net, std::span<const double> x0, double t0,
                                      double t_end, double h_max) {
    IntegrateOptions opt;
    opt.h_max = h_max;
    return integrate(net, x0, t0, t_end, opt);
}

}  // namespace persist
