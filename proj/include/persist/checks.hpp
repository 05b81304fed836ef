#pragma once

// Assumption checkers. Each one reports; none of them modifies or normalizes
// the network.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "persist/network.hpp"

namespace persist {

enum class Verdict { Pass, Fail, Vacuous };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::Vacuous: return "vacuous";
    }
    return "?";
}

struct Witness {
    std::optional<NodeId> node;
    std::optional<Arc> arc;
    std::optional<Arc> other_arc;
    double t = 0.0;
    double value = 0.0;
    std::string note;
};

struct CheckReport {
    std::string check;
    Verdict verdict = Verdict::Pass;
    double worst = 0.0;  ///< the extreme quantity the verdict was decided on
    std::optional<Witness> witness;
    std::string detail;

    bool ok() const noexcept { return verdict != Verdict::Fail; }
};

inline constexpr double kRowSumTolerance = 1e-12;

inline void require_discrete(const TimeVaryingNetwork& net, const char* what) {
    if (net.mode() != TimeMode::Discrete) throw DomainError(std::string(what) + " applies to discrete-time networks only");
}

/// |W_ii(t) + xi+(t; i) - 1|
inline double row_residual(const TimeVaryingNetwork& net, NodeId i, double t) {
    return std::abs(self_weight(net, i, t) + xi_plus(net, t, i) - 1.0);
}

/// Stochasticity: each row of the update matrix sums to one at every sampled step.
inline CheckReport check_stochasticity(const TimeVaryingNetwork& net, std::span<const std::int64_t> times) {
    require_discrete(net, "stochasticity check");
    CheckReport r{"stochasticity", Verdict::Pass, 0.0, std::nullopt, {}};
    for (std::int64_t t : times)
        for (NodeId i = 0; i < net.node_count(); ++i) {
            double res = row_residual(net, i, static_cast<double>(t));
            if (!r.witness || res > r.worst) {
                r.worst = res;
                r.witness = Witness{i, {}, {}, static_cast<double>(t), res, "row residual"};
            }
        }
    r.verdict = r.worst <= kRowSumTolerance ? Verdict::Pass : Verdict::Fail;
    r.detail = "max |row sum - 1| = " + std::to_string(r.worst);
    return r;
}

/// Self-confidence: W_ii(t) >= eta at every sampled (i, t).
inline CheckReport check_self_confidence(const TimeVaryingNetwork& net, double eta, std::span<const std::int64_t> times) {
    require_discrete(net, "self-confidence check");
    if (!(eta > 0.0 && eta < 1.0)) throw DomainError("eta must lie in (0, 1)");
    CheckReport r{"self_confidence", Verdict::Pass, 0.0, std::nullopt, {}};
    r.worst = kInf;
    for (std::int64_t t : times)
        for (NodeId i = 0; i < net.node_count(); ++i) {
            double w = self_weight(net, i, static_cast<double>(t));
            if (w < r.worst) {
                r.worst = w;
                r.witness = Witness{i, {}, {}, static_cast<double>(t), w, "minimum self weight"};
            }
        }
    r.verdict = r.worst >= eta ? Verdict::Pass : Verdict::Fail;
    r.detail = "min self weight " + std::to_string(r.worst) + " vs eta " + std::to_string(eta);
    return r;
}

namespace detail {

/// Shared core of pointwise and integral arc balance: `measure(k, sample)` is the
/// quantity compared across persistent arcs at one sample.
template <class Measure>
CheckReport arc_balance(const TimeVaryingNetwork& net, double A, std::size_t samples, Measure measure,
                        std::span<const double> sample_times, const char* name) {
    if (!(A >= 1.0)) throw DomainError("arc balance constant A must be >= 1");
    CheckReport r{name, Verdict::Pass, 0.0, std::nullopt, {}};
    std::vector<std::size_t> pers;
    for (std::size_t k = 0; k < net.arcs().size(); ++k)
        if (net.is_persistent(k)) pers.push_back(k);
    if (pers.empty()) {
        r.verdict = Verdict::Vacuous;
        r.detail = "no persistent arcs";
        return r;
    }
    r.worst = 1.0;
    for (std::size_t s = 0; s < samples; ++s) {
        std::size_t lo = pers.front(), hi = pers.front();
        double vlo = measure(lo, s), vhi = vlo;
        for (std::size_t k : pers) {
            double v = measure(k, s);
            if (v < vlo) vlo = v, lo = k;
            if (v > vhi) vhi = v, hi = k;
        }
        double ratio = vhi == 0.0 ? 1.0 : (vlo == 0.0 ? kInf : vhi / vlo);
        if (!r.witness || ratio > r.worst) {
            r.worst = ratio;
            r.witness = Witness{{}, net.arcs()[hi].arc, net.arcs()[lo].arc, sample_times[s], ratio, "max/min ratio"};
        }
    }
    r.verdict = r.worst <= A * (1.0 + 1e-12) ? Verdict::Pass : Verdict::Fail;
    r.detail = "worst persistent-arc ratio " + std::to_string(r.worst) + " vs A " + std::to_string(A);
    return r;
}

}  // namespace detail

/// Pointwise arc balance over all ordered pairs of persistent arcs. A zero
/// weight paired with a positive one fails.
inline CheckReport check_arc_balance(const TimeVaryingNetwork& net, double A, std::span<const double> times) {
    return detail::arc_balance(
        net, A, times.size(), [&](std::size_t k, std::size_t s) { return eval(net.arcs()[k].weight, times[s]); }, times,
        "arc_balance");
}

/// Integral arc balance over each supplied interval [a, b].
inline CheckReport check_integral_arc_balance(const TimeVaryingNetwork& net, double A,
                                              std::span<const std::pair<double, double>> intervals) {
    std::vector<double> starts;
    for (const auto& iv : intervals) starts.push_back(iv.first);
    return detail::arc_balance(
        net, A, intervals.size(),
        [&](std::size_t k, std::size_t s) {
            return window_integral(net.arcs()[k].weight, intervals[s].first, intervals[s].second);
        },
        starts, "integral_arc_balance");
}

/// Uniform window lower bound on every persistent arc: sum of `window` samples
/// (discrete) or integral over [t, t + window] (continuous) at least a_star.
/// Sampled starts are complemented by the analytic infimum where one exists.
inline CheckReport check_window_bound(const TimeVaryingNetwork& net, double a_star, double window,
                                      std::span<const double> starts) {
    if (!(a_star > 0.0) || !(window > 0.0)) throw DomainError("window bound needs a_star > 0 and window > 0");
    const bool discrete = net.mode() == TimeMode::Discrete;
    if (discrete && window != std::floor(window)) throw DomainError("discrete window length must be an integer");
    CheckReport r{"window_bound", Verdict::Pass, 0.0, std::nullopt, {}};
    r.worst = kInf;
    bool any = false;
    for (std::size_t k = 0; k < net.arcs().size(); ++k) {
        if (!net.is_persistent(k)) continue;
        any = true;
        const auto& w = net.arcs()[k].weight;
        for (double t : starts) {
            double v = discrete ? window_sum(w, static_cast<std::int64_t>(t), static_cast<std::int64_t>(window))
                                : window_integral(w, t, t + window);
            if (v < r.worst) {
                r.worst = v;
                r.witness = Witness{{}, net.arcs()[k].arc, {}, t, v, "sampled window"};
            }
        }
        if (auto inf = window_infimum(w, net.mode(), window); inf && *inf < r.worst) {
            r.worst = *inf;
            r.witness = Witness{{}, net.arcs()[k].arc, {}, kInf, *inf, "analytic infimum over all window starts"};
        }
    }
    if (!any) {
        r.verdict = Verdict::Vacuous;
        r.detail = "no persistent arcs";
        return r;
    }
    r.verdict = r.worst >= a_star * (1.0 - 1e-12) ? Verdict::Pass : Verdict::Fail;
    r.detail = "minimum window mass " + std::to_string(r.worst) + " vs a* " + std::to_string(a_star);
    return r;
}

enum class ArcScope { Underlying, Persistent };

struct CutBalanceOptions {
    ArcScope scope = ArcScope::Underlying;
    std::size_t exhaustive_limit = 12;  ///< enumerate all subsets up to this many nodes
    std::size_t random_subsets = 4096;  ///< subsets drawn above the limit
    std::uint64_t seed = 0;
};

/// Cut balance: for every nonempty proper subset S, the weight entering S and
/// the weight leaving S are within a factor K of each other.
inline CheckReport check_cut_balance(const TimeVaryingNetwork& net, double K, std::span<const double> times,
                                     const CutBalanceOptions& opt = {}) {
    if (!(K >= 1.0)) throw DomainError("cut balance constant K must be >= 1");
    const std::size_t n = net.node_count();
    CheckReport r{"cut_balance", Verdict::Pass, 0.0, std::nullopt, {}};
    if (n < 2) {
        r.verdict = Verdict::Vacuous;
        r.detail = "no proper subsets";
        return r;
    }
    std::vector<std::vector<bool>> subsets;
    if (n <= opt.exhaustive_limit) {
        for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << n); ++mask) {
            std::vector<bool> s(n);
            for (std::size_t i = 0; i < n; ++i) s[i] = (mask >> i) & 1u;
            subsets.push_back(std::move(s));
        }
    } else {
        std::mt19937_64 rng(opt.seed);
        std::bernoulli_distribution coin(0.5);
        while (subsets.size() < opt.random_subsets) {
            std::vector<bool> s(n);
            std::size_t count = 0;
            for (std::size_t i = 0; i < n; ++i) count += (s[i] = coin(rng));
            if (count > 0 && count < n) subsets.push_back(std::move(s));
        }
    }
    r.worst = 1.0;
    std::vector<double> w(net.arcs().size());
    for (double t : times) {
        for (std::size_t k = 0; k < w.size(); ++k)
            w[k] = (opt.scope == ArcScope::Persistent && !net.is_persistent(k)) ? 0.0 : eval(net.arcs()[k].weight, t);
        for (const auto& s : subsets) {
            double in = 0.0, out = 0.0;
            for (std::size_t k = 0; k < w.size(); ++k) {
                const Arc& a = net.arcs()[k].arc;
                if (s[a.head] && !s[a.tail]) in += w[k];
                if (s[a.tail] && !s[a.head]) out += w[k];
            }
            double ratio = (in == 0.0 && out == 0.0) ? 1.0
                           : (in == 0.0 || out == 0.0) ? kInf
                                                       : std::max(in / out, out / in);
            if (!r.witness || ratio > r.worst) {
                r.worst = ratio;
                std::string members;
                for (std::size_t i = 0; i < n; ++i)
                    if (s[i]) members += (members.empty() ? "" : ",") + std::to_string(i);
                r.witness = Witness{{}, {}, {}, t, ratio, "subset {" + members + "} in/out ratio"};
            }
        }
    }
    r.verdict = r.worst <= K * (1.0 + 1e-12) ? Verdict::Pass : Verdict::Fail;
    r.detail = "worst cut ratio " + std::to_string(r.worst) + " vs K " + std::to_string(K) + " over " +
               std::to_string(subsets.size()) + " subsets";
    return r;
}

}  // namespace persist
