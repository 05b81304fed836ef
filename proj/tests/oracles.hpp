#pragma once

// Independent reference computations for the test suites. None of these call
// into the library's closed forms; they recompute from definitions.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "persist/network.hpp"

namespace oracle {

using persist::NodeId;

// ---------------------------------------------------------------------------
// Graphs: Floyd-Warshall on an adjacency matrix.

struct AllPairs {
    std::size_t n;
    std::vector<std::vector<std::size_t>> dist;  ///< kUnreachable when no path
};

inline constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max();

inline AllPairs all_pairs(std::size_t n, const std::vector<persist::Arc>& arcs) {
    AllPairs ap{n, std::vector<std::vector<std::size_t>>(n, std::vector<std::size_t>(n, kUnreachable))};
    for (std::size_t i = 0; i < n; ++i) ap.dist[i][i] = 0;
    for (const auto& a : arcs) ap.dist[a.tail][a.head] = std::min<std::size_t>(ap.dist[a.tail][a.head], 1);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (ap.dist[i][k] != kUnreachable && ap.dist[k][j] != kUnreachable)
                    ap.dist[i][j] = std::min(ap.dist[i][j], ap.dist[i][k] + ap.dist[k][j]);
    return ap;
}

inline std::vector<NodeId> reachable(const AllPairs& ap, NodeId i) {
    std::vector<NodeId> out;
    for (NodeId j = 0; j < ap.n; ++j)
        if (ap.dist[i][j] != kUnreachable) out.push_back(j);
    return out;
}

inline std::vector<NodeId> centers(const AllPairs& ap) {
    std::vector<NodeId> out;
    for (NodeId i = 0; i < ap.n; ++i)
        if (reachable(ap, i).size() == ap.n) out.push_back(i);
    return out;
}

inline std::size_t diameter(const AllPairs& ap) {
    std::size_t d = 0;
    for (const auto& row : ap.dist)
        for (std::size_t v : row)
            if (v != kUnreachable) d = std::max(d, v);
    return d;
}

inline std::vector<persist::Arc> random_arcs(std::mt19937_64& rng, std::size_t n, double p) {
    std::bernoulli_distribution coin(p);
    std::vector<persist::Arc> arcs;
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = 0; j < n; ++j)
            if (i != j && coin(rng)) arcs.push_back({i, j});
    return arcs;
}

// ---------------------------------------------------------------------------
// Weight functions from their definitions.

/// Pulse starts by the gap recursion s_{k+1} = s_k + period * growth^k.
inline std::vector<double> pulse_starts(const persist::family::PeriodicPulse& f, double until) {
    std::vector<double> s{0.0};
    double gap = f.period;
    while (s.back() <= until) {
        s.push_back(s.back() + gap);
        gap *= f.growth;
    }
    return s;
}

/// Integral of a pulse train over [a, b] by summing every pulse's overlap.
inline double pulse_integral(const persist::family::PeriodicPulse& f, double a, double b) {
    double total = 0.0;
    for (double s : pulse_starts(f, b)) {
        const double lo = std::max(a, s), hi = std::min(b, s + f.width);
        if (hi > lo) total += f.height * (hi - lo);
    }
    return total;
}

inline double pulse_value(const persist::family::PeriodicPulse& f, double t) {
    for (double s : pulse_starts(f, t))
        if (s <= t && t < s + f.width) return f.height;
    return 0.0;
}

/// Composite 8-point Gauss-Legendre over `panels` equal panels.
template <class F>
double gauss_legendre(F&& f, double a, double b, int panels) {
    static constexpr double x[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267, 0.9602898564975363};
    static constexpr double w[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
    double total = 0.0;
    const double width = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double c = a + (p + 0.5) * width, r = 0.5 * width;
        double s = 0.0;
        for (int k = 0; k < 4; ++k) s += w[k] * (f(c - r * x[k]) + f(c + r * x[k]));
        total += r * s;
    }
    return total;
}

/// Smooth-family integral by quadrature on geometrically growing panels.
template <class F>
double smooth_integral(F&& f, double a, double b) {
    double total = 0.0;
    double lo = a;
    while (lo < b) {
        const double hi = std::min(b, std::max(lo + 1.0, 2.0 * lo + 1.0));
        total += gauss_legendre(f, lo, hi, 64);
        lo = hi;
    }
    return total;
}

/// Direct evaluation of each family from its defining formula.
inline double value(const persist::WeightFunction& w, double t) {
    using namespace persist::family;
    if (w.as<Zero>()) return 0.0;
    if (auto* f = w.as<Constant>()) return f->c;
    if (auto* f = w.as<PowerDecay>()) return f->c / std::pow(1.0 + t, f->p);
    if (auto* f = w.as<ExponentialDecay>()) return f->c * std::exp(-f->lambda * t);
    if (auto* f = w.as<PeriodicPulse>()) return pulse_value(*f, t);
    const auto* f = w.as<Tabulated>();
    double v = f->values.front();
    for (std::size_t k = 0; k < f->breakpoints.size(); ++k)
        if (t >= f->breakpoints[k]) v = f->values[k];
    return v;
}

inline double integral(const persist::WeightFunction& w, double a, double b) {
    using namespace persist::family;
    if (auto* f = w.as<PeriodicPulse>()) return pulse_integral(*f, a, b);
    if (auto* f = w.as<Tabulated>()) {
        double total = 0.0;
        for (std::size_t k = 0; k < f->breakpoints.size(); ++k) {
            const double lo = std::max(a, f->breakpoints[k]);
            const double hi = k + 1 < f->breakpoints.size() ? std::min(b, f->breakpoints[k + 1]) : b;
            if (hi > lo) total += f->values[k] * (hi - lo);
        }
        return total;
    }
    return smooth_integral([&](double t) { return value(w, t); }, a, b);
}

// ---------------------------------------------------------------------------
// Numeric divergence: partial sums / integrals at horizons 10^3 .. 10^6.

enum class Divergence { Persistent, Vanishing, Undecided };

struct PartialTotals {
    std::vector<double> at;  ///< totals at 1e3, 1e4, 1e5, 1e6
};

inline PartialTotals partial_totals(const persist::WeightFunction& w, persist::TimeMode mode) {
    PartialTotals p;
    const double horizons[4] = {1e3, 1e4, 1e5, 1e6};
    if (mode == persist::TimeMode::Discrete) {
        // pulses are evaluated from the recursion, so walk the starts once
        double total = 0.0;
        std::int64_t t = 0;
        std::vector<double> starts;
        const auto* pulse = w.as<persist::family::PeriodicPulse>();
        if (pulse) starts = pulse_starts(*pulse, 1e6);
        std::size_t k = 0;
        for (double h : horizons) {
            for (; t < static_cast<std::int64_t>(h); ++t) {
                if (pulse) {
                    const double tt = static_cast<double>(t);
                    while (k + 1 < starts.size() && starts[k + 1] <= tt) ++k;
                    if (starts[k] <= tt && tt < starts[k] + pulse->width) total += pulse->height;
                } else {
                    total += value(w, static_cast<double>(t));
                }
            }
            p.at.push_back(total);
        }
    } else {
        double total = 0.0, prev = 0.0;
        for (double h : horizons) {
            total += integral(w, prev, h);
            prev = h;
            p.at.push_back(total);
        }
    }
    return p;
}

/// Vanishing when the last decade adds less than 1e-6; persistent when every
/// decade adds at least 1e-6 and totals are nondecreasing.
inline Divergence divergence(const persist::WeightFunction& w, persist::TimeMode mode) {
    auto p = partial_totals(w, mode);
    for (std::size_t k = 1; k < p.at.size(); ++k)
        if (p.at[k] < p.at[k - 1]) return Divergence::Undecided;
    const double last = p.at[3] - p.at[2];
    if (last < 1e-6) return Divergence::Vanishing;
    for (std::size_t k = 1; k < p.at.size(); ++k)
        if (p.at[k] - p.at[k - 1] < 1e-6) return Divergence::Undecided;
    return Divergence::Persistent;
}

inline constexpr int kFamilyCount = 6;
inline const char* kFamilyNames[kFamilyCount] = {"zero", "constant", "power_decay", "exponential_decay",
                                                 "periodic_pulse", "tabulated"};

/// Parameter draw for one family. Power-law exponents avoid (1, 2.5): there
/// the series converges so slowly that no horizon up to 10^6 separates the two
/// classes. Gap growth stays at or below 1.8 so every decade holds a pulse.
inline persist::WeightFunction draw(std::mt19937_64& rng, int family, persist::TimeMode mode) {
    using persist::WeightFunction;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto in = [&](double lo, double hi) { return lo + (hi - lo) * u(rng); };
    switch (family) {
        case 0: return WeightFunction::zero();
        case 1: return WeightFunction::constant(u(rng) < 0.1 ? 0.0 : in(0.01, 1.0));
        case 2: return WeightFunction::power_decay(in(0.05, 1.0), u(rng) < 0.5 ? in(0.0, 1.0) : in(2.5, 4.0));
        case 3: return WeightFunction::exponential_decay(in(0.05, 1.0), u(rng) < 0.1 ? 0.0 : in(0.01, 2.0));
        case 4: {
            const double width = mode == persist::TimeMode::Discrete ? in(1.0, 3.0) : in(0.05, 1.0);
            const double growth = u(rng) < 0.5 ? 1.0 : in(1.0, 1.8);
            return WeightFunction::periodic_pulse(in(0.05, 1.0), width, width + in(0.0, 5.0), growth);
        }
        default: {
            std::vector<double> bp{0.0}, vals{in(0.0, 1.0)};
            const int pieces = std::uniform_int_distribution<int>(1, 5)(rng);
            for (int k = 1; k < pieces; ++k) {
                bp.push_back(bp.back() + in(0.5, 50.0));
                vals.push_back(in(0.0, 1.0));
            }
            if (u(rng) < 0.5) vals.back() = 0.0;
            else vals.back() = in(0.01, 1.0);
            const auto declared =
                vals.back() > 0.0 ? persist::Persistence::Persistent : persist::Persistence::Vanishing;
            return WeightFunction::tabulated(std::move(bp), std::move(vals), declared);
        }
    }
}

inline Divergence expected(persist::Persistence p) {
    return p == persist::Persistence::Persistent ? Divergence::Persistent : Divergence::Vanishing;
}

// ---------------------------------------------------------------------------
// Dense matrices for discrete dynamics.

using Matrix = std::vector<std::vector<double>>;

/// Row-stochastic update matrix at step t assembled from the network definition.
inline Matrix update_matrix(const persist::TimeVaryingNetwork& net, double t) {
    const std::size_t n = net.node_count();
    Matrix m(n, std::vector<double>(n, 0.0));
    for (const auto& a : net.arcs()) m[a.arc.head][a.arc.tail] += value(a.weight, t);
    for (NodeId i = 0; i < n; ++i) {
        const auto& sw = net.self_weights()[i];
        if (sw.kind == persist::SelfWeight::Kind::Complement) {
            double off = 0.0;
            for (NodeId j = 0; j < n; ++j) off += m[i][j];
            m[i][i] = 1.0 - off;
        } else {
            m[i][i] = value(sw.fn, t);
        }
    }
    return m;
}

inline std::vector<double> multiply(const Matrix& m, const std::vector<double>& x) {
    std::vector<double> y(x.size(), 0.0);
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j) y[i] += m[i][j] * x[j];
    return y;
}

inline double spread(const std::vector<double>& x) {
    double lo = x.front(), hi = x.front();
    for (double v : x) lo = std::min(lo, v), hi = std::max(hi, v);
    return hi - lo;
}

/// States x(t0), ..., x(t0 + horizon) by dense matrix-vector products.
inline std::vector<std::vector<double>> iterate(const persist::TimeVaryingNetwork& net, std::vector<double> x,
                                                std::int64_t t0, std::int64_t horizon) {
    std::vector<std::vector<double>> out{x};
    for (std::int64_t k = 0; k < horizon; ++k) {
        x = multiply(update_matrix(net, static_cast<double>(t0 + k)), x);
        out.push_back(x);
    }
    return out;
}

}  // namespace oracle
