#pragma once

// Agreement metrics on trajectories, rate certificates and their verification,
// disagreement floors for networks whose persistent graph has no center, and
// pointwise checks of the comparison bounds the rate proofs are built from.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "persist/checks.hpp"
#include "persist/continuous.hpp"
#include "persist/discrete.hpp"
#include "persist/metrics.hpp"
#include "persist/network.hpp"

namespace persist {

// ---------------------------------------------------------------------------
// Rate certificates

struct DiscreteProvenance {
    double eta;
    double a_star;
    std::int64_t T_star;
    std::size_t d0;
};

struct ContinuousProvenance {
    double A;
    std::size_t n;
    double theta_integral;
    double omega0;
    double m0;
    double a_star;
    double tau0;
    std::size_t d0;
};

/// H(t + T0) <= epsilon * H(t) for every t. A trivial certificate (single node)
/// carries epsilon = 0: the spread is identically zero.
struct RateCertificate {
    double epsilon;
    double T0;
    bool trivial = false;
    std::variant<DiscreteProvenance, ContinuousProvenance> provenance;
};

/// Contraction factor for discrete dynamics under stochasticity, self-confidence
/// eta, a centered persistent graph of diameter d0 and window bound (a*, T*):
/// epsilon = 1 - eta^(d0 T*) / 2 * (a*/T*)^d0, T0 = d0 T*.
inline RateCertificate discrete_rate_bound(double eta, double a_star, std::int64_t T_star, std::size_t d0) {
    if (!(eta > 0.0 && eta < 1.0)) throw DomainError("eta must lie in (0, 1)");
    if (!(a_star > 0.0)) throw DomainError("a* must be > 0");
    if (T_star < 1) throw DomainError("T* must be >= 1");
    const double rate = a_star / static_cast<double>(T_star);
    if (rate > 1.0) throw DomainError("a*/T* > 1 lies outside the convex-combination regime of the bound");
    DiscreteProvenance prov{eta, a_star, T_star, d0};
    if (d0 == 0) return {0.0, 1.0, true, prov};
    const double d = static_cast<double>(d0);
    double eps = 1.0 - std::pow(eta, d * static_cast<double>(T_star)) / 2.0 * std::pow(rate, d);
    return {eps, d * static_cast<double>(T_star), false, prov};
}

/// Continuous-time contraction under arc balance A, diameter d0 and window
/// bound (a*, tau0): omega0 = exp(-int theta), m0 = (omega0/2)^2 / ((n-1) A),
/// epsilon = 1 - m0^d0 / 2, T0 = tau0 * ceil(d0 ln 2 / a*).
/// A = 1 is accepted (all persistent weights equal); the bound's derivation
/// holds verbatim for A >= 1.
inline RateCertificate continuous_rate_bound(double A, std::size_t n, double theta_integral, double a_star, double tau0,
                                             std::size_t d0) {
    if (!(A >= 1.0)) throw DomainError("A must be >= 1");
    if (n < 2) throw DomainError("continuous certificate needs n >= 2");
    if (!(theta_integral >= 0.0)) throw DomainError("theta integral must be >= 0");
    if (!(a_star > 0.0) || !(tau0 > 0.0)) throw DomainError("a* and tau0 must be > 0");
    if (d0 == 0) throw DomainError("diameter 0 with n >= 2 has no center");
    const double omega0 = std::exp(-theta_integral);
    const double m0 = (omega0 / 2.0) * (omega0 / 2.0) / (static_cast<double>(n - 1) * A);
    const double d = static_cast<double>(d0);
    const double eps = 1.0 - std::pow(m0, d) / 2.0;
    const double T0 = tau0 * std::ceil(d * std::numbers::ln2 / a_star);
    return {eps, T0, false, ContinuousProvenance{A, n, theta_integral, omega0, m0, a_star, tau0, d0}};
}

/// Integral of theta over [0, infinity), exact per family.
inline double theta_total_integral(const ThetaFunction& theta) { return theta.integral(0.0, kInf); }

struct ContractionReport {
    Verdict verdict = Verdict::Pass;
    double worst_margin = -kInf;  ///< max over windows of H(t+T0) - epsilon H(t)
    double witness_t = 0.0;
    std::size_t windows = 0;
};

inline constexpr double kDiscreteContractionTol = 1e-12;
inline constexpr double kContinuousContractionTol = 1e-8;

namespace detail {

inline void record_window(ContractionReport& r, double margin, double t, double tol) {
    ++r.windows;
    if (margin > r.worst_margin) {
        r.worst_margin = margin;
        r.witness_t = t;
    }
    if (margin > tol) r.verdict = Verdict::Fail;
}

/// Index pairs (i, j) with times[j] == times[i] + T0 up to rounding.
inline std::vector<std::pair<std::size_t, std::size_t>> matched_pairs(std::span<const double> times, double T0) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    std::size_t j = 0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double target = times[i] + T0;
        const double tol = 1e-9 * std::max(1.0, std::abs(target));
        while (j < times.size() && times[j] < target - tol) ++j;
        if (j == times.size()) break;
        if (std::abs(times[j] - target) <= tol) out.emplace_back(i, j);
    }
    return out;
}

}  // namespace detail

inline ContractionReport verify_contraction(const Trajectory& traj, const RateCertificate& cert) {
    const double steps = std::round(cert.T0);
    if (steps != cert.T0 || steps < 1) throw DomainError("discrete certificate needs an integer window");
    const auto T0 = static_cast<std::size_t>(steps);
    if (traj.size() <= T0) throw TrajectoryTooShort("trajectory shorter than one certificate window");
    ContractionReport r;
    std::vector<double> H(traj.size());
    for (std::size_t k = 0; k < traj.size(); ++k) H[k] = traj.metrics_at(k).H;
    for (std::size_t k = 0; k + T0 < traj.size(); ++k)
        detail::record_window(r, H[k + T0] - cert.epsilon * H[k], static_cast<double>(traj.time(k)),
                              kDiscreteContractionTol);
    return r;
}

/// Checks every pair of samples exactly T0 apart (integrate with a landmark
/// period dividing T0 to make every sample part of a pair).
inline ContractionReport verify_contraction(const ContinuousTrajectory& traj, const RateCertificate& cert) {
    auto pairs = detail::matched_pairs(traj.times, cert.T0);
    if (pairs.empty()) throw TrajectoryTooShort("no sample pair spans one certificate window");
    ContractionReport r;
    for (auto [i, j] : pairs)
        detail::record_window(r, traj.metrics_at(j).H - cert.epsilon * traj.metrics_at(i).H, traj.times[i],
                              kContinuousContractionTol);
    return r;
}

/// Contraction between explicit sample indices: H(at[k+1]) <= epsilon H(at[k]).
inline ContractionReport verify_contraction_at(const ContinuousTrajectory& traj, std::span<const std::size_t> at,
                                               double epsilon) {
    if (at.size() < 2) throw TrajectoryTooShort("need at least two checkpoints");
    ContractionReport r;
    for (std::size_t k = 0; k + 1 < at.size(); ++k)
        detail::record_window(r, traj.metrics_at(at[k + 1]).H - epsilon * traj.metrics_at(at[k]).H,
                              traj.times[at[k]], kContinuousContractionTol);
    return r;
}

struct EpsilonEstimate {
    bool contraction = false;  ///< false: sup ratio >= 1, no contraction over T0
    double epsilon = 0.0;      ///< sup over windows of H(t+T0) / H(t)
    bool trivial = false;      ///< spread identically zero
    double witness_t = 0.0;
};

namespace detail {

template <class SpreadAt, class TimeAt>
EpsilonEstimate sup_ratio(std::span<const std::pair<std::size_t, std::size_t>> pairs, SpreadAt H, TimeAt time) {
    EpsilonEstimate e;
    bool any = false;
    for (auto [i, j] : pairs) {
        double h = H(i);
        if (h == 0.0) continue;
        double ratio = H(j) / h;
        if (!any || ratio > e.epsilon) {
            e.epsilon = ratio;
            e.witness_t = time(i);
        }
        any = true;
    }
    if (!any) {
        e.trivial = true;
        e.contraction = true;
        e.epsilon = 0.0;
        return e;
    }
    e.contraction = e.epsilon < 1.0;
    return e;
}

}  // namespace detail

/// Best epsilon observed over windows of T0 steps; windows starting at H = 0 are skipped.
inline EpsilonEstimate detect_epsilon_agreement(const Trajectory& traj, std::int64_t T0) {
    if (T0 < 1) throw DomainError("T0 must be >= 1");
    const auto w = static_cast<std::size_t>(T0);
    if (traj.size() <= w) throw TrajectoryTooShort("trajectory shorter than T0");
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t k = 0; k + w < traj.size(); ++k) pairs.emplace_back(k, k + w);
    return detail::sup_ratio(
        pairs, [&](std::size_t k) { return traj.metrics_at(k).H; },
        [&](std::size_t k) { return static_cast<double>(traj.time(k)); });
}

inline EpsilonEstimate detect_epsilon_agreement(const ContinuousTrajectory& traj, double T0) {
    auto pairs = detail::matched_pairs(traj.times, T0);
    if (pairs.empty()) throw TrajectoryTooShort("no sample pair spans T0");
    return detail::sup_ratio(
        pairs, [&](std::size_t k) { return traj.metrics_at(k).H; }, [&](std::size_t k) { return traj.times[k]; });
}

// ---------------------------------------------------------------------------
// Comparison bounds on individual nodes

struct BoundReport {
    Verdict verdict = Verdict::Pass;
    double worst_violation = -kInf;  ///< max of (value - upper) and (lower - value); <= tol means pass
    double witness_t = 0.0;
    std::optional<NodeId> witness_node;
    std::size_t checked = 0;
};

inline constexpr double kDiscreteBoundTol = 1e-12;
inline constexpr double kContinuousBoundTol = 1e-6;

namespace detail {

inline void record_bound(BoundReport& r, double violation, double t, NodeId m, double tol) {
    ++r.checked;
    if (violation > r.worst_violation) {
        r.worst_violation = violation;
        r.witness_t = t;
        r.witness_node = m;
    }
    if (violation > tol) r.verdict = Verdict::Fail;
}

inline void merge(BoundReport& into, const BoundReport& from) {
    if (from.checked == 0) return;
    into.checked += from.checked;
    if (from.worst_violation > into.worst_violation) {
        into.worst_violation = from.worst_violation;
        into.witness_t = from.witness_t;
        into.witness_node = from.witness_node;
    }
    if (from.verdict == Verdict::Fail) into.verdict = Verdict::Fail;
}

/// Upper and lower envelopes of a node that starts as the convex point
/// x = mu psi + (1 - mu) Psi and retains a fraction `keep` of its own value:
/// upper = mu keep psi + (1 - mu keep) Psi, lower symmetric with the dual mu.
inline double violation(double x, double x_start, double psi, double Psi, double keep) {
    const double H = Psi - psi;
    const double mu = (Psi - x_start) / H;
    const double mu_dual = (x_start - psi) / H;
    const double upper = mu * keep * psi + (1.0 - mu * keep) * Psi;
    const double lower = mu_dual * keep * Psi + (1.0 - mu_dual * keep) * psi;
    return std::max(x - upper, lower - x);
}

inline double scaled_tol(double tol, double psi, double Psi) {
    return tol * std::max({1.0, std::abs(psi), std::abs(Psi)});
}

}  // namespace detail

/// Discrete convexity bounds for node m over steps t .. t+T: with
/// x_m(t) = mu psi(t) + (1 - mu) Psi(t) and P = prod (1 - xi+(s; m)),
/// x_m(t+T) <= mu P psi(t) + (1 - mu P) Psi(t), plus the mirrored lower bound.
/// `t_index` indexes the trajectory. Vacuous when H(t) = 0.
inline BoundReport verify_convexity_bound(const Trajectory& traj, const TimeVaryingNetwork& net, NodeId m,
                                          std::size_t t_index, std::size_t T) {
    net.graph().require_node(m);
    if (t_index + T >= traj.size()) throw TrajectoryTooShort("window runs past the trajectory");
    BoundReport r;
    const auto mt = traj.metrics_at(t_index);
    if (mt.H == 0.0) {
        r.verdict = Verdict::Vacuous;
        return r;
    }
    double keep = 1.0;
    for (std::size_t s = 0; s < T; ++s) keep *= 1.0 - xi_plus(net, static_cast<double>(traj.time(t_index + s)), m);
    const double x_start = traj.states[t_index][m];
    const double x_end = traj.states[t_index + T][m];
    detail::record_bound(r, detail::violation(x_end, x_start, mt.psi, mt.Psi, keep),
                         static_cast<double>(traj.time(t_index)), m,
                         detail::scaled_tol(kDiscreteBoundTol, mt.psi, mt.Psi));
    return r;
}

/// Sweep of verify_convexity_bound over every node, every start, and every
/// window length 1..max_T that fits.
inline BoundReport verify_convexity_bounds(const Trajectory& traj, const TimeVaryingNetwork& net, std::size_t max_T) {
    BoundReport total;
    const std::size_t n = net.node_count();
    std::vector<std::vector<double>> xi(traj.size(), std::vector<double>(n));
    for (std::size_t k = 0; k < traj.size(); ++k)
        for (NodeId m = 0; m < n; ++m) xi[k][m] = xi_plus(net, static_cast<double>(traj.time(k)), m);
    for (std::size_t t = 0; t + 1 < traj.size(); ++t) {
        const auto mt = traj.metrics_at(t);
        if (mt.H == 0.0) continue;
        const double tol = detail::scaled_tol(kDiscreteBoundTol, mt.psi, mt.Psi);
        for (NodeId m = 0; m < n; ++m) {
            double keep = 1.0;
            for (std::size_t T = 1; T <= max_T && t + T < traj.size(); ++T) {
                keep *= 1.0 - xi[t + T - 1][m];
                detail::record_bound(total, detail::violation(traj.states[t + T][m], traj.states[t][m], mt.psi, mt.Psi, keep),
                                     static_cast<double>(traj.time(t)), m, tol);
            }
        }
    }
    return total;
}

namespace detail {

/// X_m(t_k) = integral of xi+(.; m) over [t_0, t_k] at every sample, exact per family.
inline std::vector<std::vector<double>> cumulative_xi(const ContinuousTrajectory& traj, const TimeVaryingNetwork& net) {
    const std::size_t n = net.node_count();
    std::vector<std::vector<double>> X(traj.size(), std::vector<double>(n, 0.0));
    for (std::size_t k = 1; k < traj.size(); ++k)
        for (NodeId m = 0; m < n; ++m)
            X[k][m] = X[k - 1][m] + xi_plus_integral(net, m, traj.times[k - 1], traj.times[k]);
    return X;
}

}  // namespace detail

/// Continuous exponential bound: from sample s, node m keeps at least the
/// fraction exp(-int_s^t xi+(.; m)) of its convex position, for every later
/// sample t (upper bound and its mirror). Starts every `start_stride` samples.
inline BoundReport verify_exponential_bounds(const ContinuousTrajectory& traj, const TimeVaryingNetwork& net,
                                             std::size_t start_stride = 1) {
    BoundReport total;
    if (start_stride == 0) start_stride = 1;
    const auto X = detail::cumulative_xi(traj, net);
    for (std::size_t s = 0; s + 1 < traj.size(); s += start_stride) {
        const auto ms = traj.metrics_at(s);
        if (ms.H == 0.0) continue;
        const double tol = detail::scaled_tol(kContinuousBoundTol, ms.psi, ms.Psi);
        for (NodeId m = 0; m < net.node_count(); ++m)
            for (std::size_t t = s + 1; t < traj.size(); ++t) {
                const double keep = std::exp(-(X[t][m] - X[s][m]));
                detail::record_bound(total, detail::violation(traj.values[t][m], traj.values[s][m], ms.psi, ms.Psi, keep),
                                     traj.times[t], m, tol);
            }
    }
    return total;
}

namespace detail {

/// 5-point Gauss-Legendre on [a, b].
template <class F>
double gauss5(F&& f, double a, double b) {
    static constexpr double x[5] = {0.0, 0.5384693101056831, -0.5384693101056831, 0.9061798459386640,
                                    -0.9061798459386640};
    static constexpr double w[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665, 0.2369268850561891,
                                    0.2369268850561891};
    const double c = 0.5 * (a + b), r = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < 5; ++i) s += w[i] * f(c + r * x[i]);
    return r * s;
}

}  // namespace detail

/// Two-node influence bound along arc (l -> m). Over the window of samples
/// [s0, s_end], node l stays below mu psi(s0) + (1 - mu) Psi(s0) with mu the
/// largest value the samples allow; then node m satisfies
///   x_m(t) <= mu I(t) psi(s0) + (1 - mu I(t)) Psi(s0),
///   I(t) = int_{s0}^t exp(-int_u^t xi+(.; m)) W_ml(u) du,
/// and symmetrically from below. I is accumulated panel by panel between
/// samples (weights are smooth inside each panel) with Gauss-Legendre.
inline BoundReport verify_influence_bound(const ContinuousTrajectory& traj, const TimeVaryingNetwork& net,
                                          std::size_t arc_index, std::size_t s0, std::size_t s_end) {
    if (s_end >= traj.size() || s0 >= s_end) throw DomainError("influence window must satisfy s0 < s_end < samples");
    const WeightedArc& arc = net.arcs()[arc_index];
    const NodeId l = arc.arc.tail, m = arc.arc.head;
    BoundReport r;
    const auto ms = traj.metrics_at(s0);
    if (ms.H == 0.0) {
        r.verdict = Verdict::Vacuous;
        return r;
    }
    double mu_up = 1.0, mu_down = 1.0;
    for (std::size_t k = s0; k <= s_end; ++k) {
        mu_up = std::min(mu_up, (ms.Psi - traj.values[k][l]) / ms.H);
        mu_down = std::min(mu_down, (traj.values[k][l] - ms.psi) / ms.H);
    }
    mu_up = std::max(mu_up, 0.0);
    mu_down = std::max(mu_down, 0.0);
    const double tol = detail::scaled_tol(kContinuousBoundTol, ms.psi, ms.Psi);
    double I = 0.0;
    for (std::size_t k = s0 + 1; k <= s_end; ++k) {
        const double a = traj.times[k - 1], b = traj.times[k];
        // I(b) = exp(-int_a^b xi) I(a) + int_a^b exp(-int_u^b xi) W_ml(u) du
        const double panel = detail::gauss5(
            [&](double u) { return std::exp(-xi_plus_integral(net, m, u, b)) * eval(arc.weight, u); }, a, b);
        I = std::exp(-xi_plus_integral(net, m, a, b)) * I + panel;
        const double x = traj.values[k][m];
        const double upper = mu_up * I * ms.psi + (1.0 - mu_up * I) * ms.Psi;
        const double lower = mu_down * I * ms.Psi + (1.0 - mu_down * I) * ms.psi;
        detail::record_bound(r, std::max(x - upper, lower - x), b, m, tol);
    }
    return r;
}

/// verify_influence_bound over every arc, windows of `window` samples starting
/// every `start_stride` samples.
inline BoundReport verify_influence_bounds(const ContinuousTrajectory& traj, const TimeVaryingNetwork& net,
                                           std::size_t window, std::size_t start_stride) {
    BoundReport total;
    if (start_stride == 0) start_stride = 1;
    for (std::size_t k = 0; k < net.arcs().size(); ++k)
        for (std::size_t s0 = 0; s0 + 1 < traj.size(); s0 += start_stride)
            detail::merge(total, verify_influence_bound(traj, net, k, s0, std::min(s0 + window, traj.size() - 1)));
    return total;
}

// ---------------------------------------------------------------------------
// Disagreement floors when the persistent graph has no center

struct LowerBoundCertificate {
    enum class Kind { DiscreteSigma, ContinuousTheta };

    Kind kind;
    double sigma_star = 0.0;   ///< DiscreteSigma: lower bound on prod_{t >= t0} (1 - theta(t))
    double theta_tail = 0.0;   ///< sum (discrete, upper bound) or integral (continuous) of theta from t0
    double floor = 0.0;        ///< certified lower bound on H(t) for t >= t0
    double required_t0 = 0.0;
};

inline constexpr std::int64_t kProductHorizon = 1'000'000;

/// Floor sigma*/2 for discrete dynamics started at t0 with the zero-one split:
/// sigma* lower-bounds prod_{t >= t0} (1 - theta(t)), taken exactly up to
/// 10^6 and bounded beyond it through log(1 - x) >= -2x (x <= 1/2), and the
/// certificate needs sum_{t >= t0} theta <= sigma*/2. Returns the smallest such
/// t0 at or after `t0_min`.
inline LowerBoundCertificate sigma_star_certificate(const ThetaFunction& theta, std::int64_t t0_min) {
    if (t0_min < 0) throw DomainError("t0 must be >= 0");
    const std::int64_t N = std::max(kProductHorizon, t0_min + 1);
    const double tail = theta.tail_sum_bound(N);
    if (!std::isfinite(tail)) throw NotSummable("theta is not summable");
    if (tail > 0.5) throw DomainError("theta tail beyond the product horizon exceeds 1/2");
    const auto len = static_cast<std::size_t>(N - t0_min);
    // suffix accumulations, smallest terms first
    std::vector<double> log_keep(len + 1), mass(len + 1);
    log_keep[len] = -2.0 * tail;
    mass[len] = tail;
    for (std::size_t k = len; k-- > 0;) {
        const double th = theta(static_cast<double>(t0_min + static_cast<std::int64_t>(k)));
        log_keep[k] = (th >= 1.0) ? -kInf : log_keep[k + 1] + std::log1p(-th);
        mass[k] = mass[k + 1] + th;
    }
    for (std::size_t k = 0; k <= len; ++k) {
        const double sigma = std::exp(log_keep[k]);
        if (sigma > 0.0 && mass[k] <= sigma / 2.0)
            return {LowerBoundCertificate::Kind::DiscreteSigma, sigma, mass[k], sigma / 2.0,
                    static_cast<double>(t0_min + static_cast<std::int64_t>(k))};
    }
    throw DomainError("no start time up to the product horizon certifies a floor");
}

/// Floor 2 exp(-int_{t0}^inf theta) - 1 for continuous dynamics started at t0
/// with the zero-one split. With `require_third`, t0 is first advanced to the
/// smallest time where exp(-int theta) >= 2/3 (floor >= 1/3).
inline LowerBoundCertificate continuous_floor_certificate(const ThetaFunction& theta, double t0,
                                                          bool require_third = false) {
    if (!(t0 >= 0.0)) throw DomainError("t0 must be >= 0");
    auto tail = [&](double t) { return theta.integral(t, kInf); };
    if (!std::isfinite(tail(t0))) throw NotSummable("theta is not integrable");
    if (require_third) {
        const double target = std::log(1.5);
        if (tail(t0) > target) {
            double lo = t0, step = std::max(1.0, t0 * 0x1p-20), hi = t0 + step;
            while (tail(hi) > target) {
                lo = hi;
                step *= 2.0;
                hi = t0 + step;
                if (hi > 1e300) throw DomainError("theta tail never drops below ln(3/2)");
            }
            for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, hi); ++it) {
                double mid = 0.5 * (lo + hi);
                (tail(mid) > target ? lo : hi) = mid;
            }
            t0 = hi;
        }
    }
    const double I = tail(t0);
    const double keep = std::exp(-I);
    if (!(keep > 0.5)) throw DomainError("theta integral from t0 is too large for a positive floor");
    return {LowerBoundCertificate::Kind::ContinuousTheta, 0.0, I, 2.0 * keep - 1.0, t0};
}

struct ComponentExtremes {
    double ell;   ///< max belief over V_u
    double hbar;  ///< min belief over V_w
    double L;     ///< hbar - ell
};

inline std::vector<ComponentExtremes> component_extremes(std::span<const std::vector<double>> states,
                                                         std::span<const NodeId> Vu, std::span<const NodeId> Vw) {
    if (Vu.empty() || Vw.empty()) throw DomainError("component node sets must be nonempty");
    for (NodeId u : Vu)
        if (std::find(Vw.begin(), Vw.end(), u) != Vw.end()) throw DomainError("component node sets must be disjoint");
    std::vector<ComponentExtremes> out;
    out.reserve(states.size());
    for (const auto& x : states) {
        double ell = -kInf, hbar = kInf;
        for (NodeId u : Vu) ell = std::max(ell, x.at(u));
        for (NodeId w : Vw) hbar = std::min(hbar, x.at(w));
        out.push_back({ell, hbar, hbar - ell});
    }
    return out;
}

/// Two nodes of a center-less graph whose ancestor sets are disjoint, with those
/// ancestor sets (no arc of `g` enters either). nullopt if `g` has a center.
struct SplitComponents {
    std::vector<NodeId> Vu;
    std::vector<NodeId> Vw;
};

inline std::optional<SplitComponents> find_split_components(const Digraph& g) {
    if (is_quasi_strongly_connected(g)) return std::nullopt;
    const std::size_t n = g.node_count();
    std::vector<std::vector<NodeId>> anc(n);
    for (NodeId v = 0; v < n; ++v) anc[v] = ancestors(g, v);
    for (NodeId u = 0; u < n; ++u)
        for (NodeId w = u + 1; w < n; ++w) {
            std::vector<NodeId> common;
            std::set_intersection(anc[u].begin(), anc[u].end(), anc[w].begin(), anc[w].end(), std::back_inserter(common));
            if (common.empty()) return SplitComponents{anc[u], anc[w]};
        }
    return std::nullopt;  // unreachable for a center-less graph
}

/// Beliefs 0 on V_u and 1 everywhere else.
inline std::vector<double> zero_one_split(std::size_t n, std::span<const NodeId> Vu) {
    std::vector<double> x(n, 1.0);
    for (NodeId u : Vu) x.at(u) = 0.0;
    return x;
}

// ---------------------------------------------------------------------------
// Window-bound necessity

/// Window mass below which the spread over that window cannot shrink by the
/// factor epsilon: 1/2 * A^-1 * (n-1)^-1 * ln(2 / (1 + epsilon)).
inline double window_violation_threshold(double A, std::size_t n, double epsilon) {
    if (!(A >= 1.0)) throw DomainError("A must be >= 1");
    if (n < 2) throw DomainError("n must be >= 2");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0, 1)");
    return 0.5 / A / static_cast<double>(n - 1) * std::log(2.0 / (1.0 + epsilon));
}

/// First integer t* in [t_from, t_to] where every arc's window sum over
/// t*, ..., t*+T-1 is below `threshold` and xi+(s; i) <= 1/2 throughout the window.
inline std::optional<std::int64_t> find_window_violation(const TimeVaryingNetwork& net, std::int64_t T,
                                                         double threshold, std::int64_t t_from, std::int64_t t_to) {
    if (T < 1) throw DomainError("T must be >= 1");
    for (std::int64_t t = t_from; t <= t_to; ++t) {
        bool ok = true;
        for (const WeightedArc& a : net.arcs())
            if (window_sum(a.weight, t, T) >= threshold) {
                ok = false;
                break;
            }
        for (std::int64_t s = t; ok && s < t + T; ++s)
            for (NodeId i = 0; ok && i < net.node_count(); ++i)
                ok = xi_plus(net, static_cast<double>(s), i) <= 0.5;
        if (ok) return t;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Agreement schedule without a window bound

namespace detail {

/// Adaptive Simpson in log time u = ln(1 + t), which keeps polynomially
/// decaying integrands well resolved over long horizons.
template <class F>
double log_time_integral(F&& f, double a, double b) {
    auto g = [&](double u) {
        const double t = std::expm1(u);
        return f(t) * (1.0 + t);
    };
    auto simpson = [&](double lo, double hi, double flo, double fmid, double fhi) {
        return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    };
    auto recurse = [&](auto&& self, double lo, double hi, double flo, double fmid, double fhi, double whole,
                       int depth) -> double {
        const double mid = 0.5 * (lo + hi);
        const double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
        const double flm = g(lm), frm = g(rm);
        const double left = simpson(lo, mid, flo, flm, fmid), right = simpson(mid, hi, fmid, frm, fhi);
        if (depth <= 0 || std::abs(left + right - whole) <= 1e-12 * std::max(1.0, std::abs(left + right)))
            return left + right + (left + right - whole) / 15.0;
        return self(self, lo, mid, flo, flm, fmid, left, depth - 1) + self(self, mid, hi, fmid, frm, fhi, right, depth - 1);
    };
    const double lo = std::log1p(a), hi = std::log1p(b);
    const double flo = g(lo), fmid = g(0.5 * (lo + hi)), fhi = g(hi);
    return recurse(recurse, lo, hi, flo, fmid, fhi, simpson(lo, hi, flo, fmid, fhi), 40);
}

}  // namespace detail

/// Integral over [a, b] of b0(t) = min over persistent arcs of W(t). Exact when
/// all persistent arcs share one weight function; otherwise adaptive quadrature
/// split at every breakpoint.
inline double min_persistent_weight_integral(const TimeVaryingNetwork& net, double a, double b) {
    std::vector<const WeightFunction*> pers;
    for (std::size_t k = 0; k < net.arcs().size(); ++k)
        if (net.is_persistent(k)) pers.push_back(&net.arcs()[k].weight);
    if (pers.empty()) return 0.0;
    if (std::all_of(pers.begin(), pers.end(), [&](const WeightFunction* w) { return *w == *pers.front(); }))
        return window_integral(*pers.front(), a, b);
    std::vector<double> cuts{a, b};
    for (const auto* w : pers)
        for (double c : breakpoints(*w, a, b)) cuts.push_back(c);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    auto b0 = [&](double t) {
        double v = kInf;
        for (const auto* w : pers) v = std::min(v, eval(*w, t));
        return v;
    };
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        // evaluate strictly inside the segment so edge values do not leak across jumps
        const double lo = cuts[k], hi = cuts[k + 1];
        total += detail::log_time_integral([&](double t) { return b0(std::clamp(t, lo, hi) == hi ? std::nextafter(hi, lo) : t); },
                                           lo, hi);
    }
    return total;
}

/// Checkpoints t_0 < t_1 < ... where each round accumulates
/// int_{t_k}^{t_{k+1}} b0 = d0 ln 2, so the spread contracts by at least
/// (1 - m0^d0 / 2) per round.
inline std::vector<double> agreement_schedule(const TimeVaryingNetwork& net, double t0, std::size_t d0,
                                              std::size_t rounds) {
    if (d0 == 0) throw DomainError("d0 must be >= 1");
    const double target = static_cast<double>(d0) * std::numbers::ln2;
    std::vector<double> out{t0};
    for (std::size_t r = 0; r < rounds; ++r) {
        const double start = out.back();
        // initial step scaled to `start` so start + step != start at large times
        double lo = start, step = std::max(1.0, start * 0x1p-20), hi = start + step;
        while (min_persistent_weight_integral(net, start, hi) < target) {
            lo = hi;
            step *= 2.0;
            hi = start + step;
            if (hi > 1e300) throw DomainError("persistent weights never accumulate d0 ln 2");
        }
        for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, hi); ++it) {
            const double mid = 0.5 * (lo + hi);
            (min_persistent_weight_integral(net, start, mid) < target ? lo : hi) = mid;
        }
        out.push_back(hi);
    }
    return out;
}

/// Rounds of contraction by epsilon needed to bring the spread ratio below `target`.
inline std::size_t rounds_for_ratio(double epsilon, double target) {
    if (!(epsilon > 0.0 && epsilon < 1.0) || !(target > 0.0 && target < 1.0))
        throw DomainError("rounds_for_ratio needs epsilon and target in (0, 1)");
    return static_cast<std::size_t>(std::ceil(std::log(target) / std::log(epsilon)));
}

}  // namespace persist
