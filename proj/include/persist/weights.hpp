#pragma once

// Time-dependent arc weights.
//
// Every family is nonnegative on t >= 0, right-continuous, and has finitely
// many discontinuities on any bounded interval. The same function serves both
// time modes: in discrete mode it is sampled at integer steps (weight per
// step), in continuous mode it is a weight rate per unit time.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "persist/error.hpp"

namespace persist {

enum class TimeMode { Discrete, Continuous };
enum class Persistence { Persistent, Vanishing };

inline const char* to_string(TimeMode m) { return m == TimeMode::Discrete ? "discrete" : "continuous"; }
inline const char* to_string(Persistence p) { return p == Persistence::Persistent ? "persistent" : "vanishing"; }

inline constexpr double kInf = std::numeric_limits<double>::infinity();

namespace family {

struct Zero {
    friend bool operator==(const Zero&, const Zero&) = default;
};

struct Constant {
    double c;
    friend bool operator==(const Constant&, const Constant&) = default;
};

/// c / (1 + t)^p
struct PowerDecay {
    double c;
    double p;
    friend bool operator==(const PowerDecay&, const PowerDecay&) = default;
};

/// c * exp(-lambda t)
struct ExponentialDecay {
    double c;
    double lambda;
    friend bool operator==(const ExponentialDecay&, const ExponentialDecay&) = default;
};

/// Rectangular pulses of `height` on [s_k, s_k + width). Pulse k+1 starts
/// period * growth^k after pulse k, so growth > 1 stretches the gaps
/// geometrically while every pulse keeps the same mass.
struct PeriodicPulse {
    double height;
    double width;
    double period;
    double growth = 1.0;
    friend bool operator==(const PeriodicPulse&, const PeriodicPulse&) = default;
};

/// Piecewise constant: values[k] on [breakpoints[k], breakpoints[k+1]), the last
/// value extends to infinity. breakpoints[0] must be 0. Persistence of a table
/// cannot be inferred from finite data and must be declared.
struct Tabulated {
    std::vector<double> breakpoints;
    std::vector<double> values;
    std::optional<Persistence> declared;
    friend bool operator==(const Tabulated&, const Tabulated&) = default;
};

}  // namespace family

class WeightFunction {
public:
    using Variant = std::variant<family::Zero, family::Constant, family::PowerDecay, family::ExponentialDecay,
                                 family::PeriodicPulse, family::Tabulated>;

    WeightFunction() : f_(family::Zero{}) {}
    WeightFunction(Variant f) : f_(std::move(f)) { validate(); }

    static WeightFunction zero() { return {family::Zero{}}; }
    static WeightFunction constant(double c) { return {family::Constant{c}}; }
    static WeightFunction power_decay(double c, double p) { return {family::PowerDecay{c, p}}; }
    static WeightFunction exponential_decay(double c, double lambda) { return {family::ExponentialDecay{c, lambda}}; }
    static WeightFunction periodic_pulse(double height, double width, double period, double growth = 1.0) {
        return {family::PeriodicPulse{height, width, period, growth}};
    }
    static WeightFunction tabulated(std::vector<double> breakpoints, std::vector<double> values,
                                    std::optional<Persistence> declared) {
        return {family::Tabulated{std::move(breakpoints), std::move(values), declared}};
    }

    const Variant& variant() const noexcept { return f_; }

    template <class F>
    const F* as() const noexcept {
        return std::get_if<F>(&f_);
    }

    std::string family_name() const {
        return std::visit(
            [](const auto& f) -> std::string {
                using F = std::decay_t<decltype(f)>;
                if constexpr (std::is_same_v<F, family::Zero>) return "zero";
                else if constexpr (std::is_same_v<F, family::Constant>) return "constant";
                else if constexpr (std::is_same_v<F, family::PowerDecay>) return "power_decay";
                else if constexpr (std::is_same_v<F, family::ExponentialDecay>) return "exponential_decay";
                else if constexpr (std::is_same_v<F, family::PeriodicPulse>) return "periodic_pulse";
                else return "tabulated";
            },
            f_);
    }

    friend bool operator==(const WeightFunction&, const WeightFunction&) = default;

private:
    void validate() const;

    Variant f_;
};

// ---------------------------------------------------------------------------
// Pulse-train geometry

namespace detail {

inline double pulse_start(const family::PeriodicPulse& f, std::int64_t k) {
    if (f.growth == 1.0) return static_cast<double>(k) * f.period;
    return f.period * (std::pow(f.growth, static_cast<double>(k)) - 1.0) / (f.growth - 1.0);
}

/// Largest k with pulse_start(k) <= t (t >= 0).
inline std::int64_t pulse_index(const family::PeriodicPulse& f, double t) {
    std::int64_t k;
    if (f.growth == 1.0) {
        k = static_cast<std::int64_t>(std::floor(t / f.period));
    } else {
        k = static_cast<std::int64_t>(std::floor(std::log1p(t * (f.growth - 1.0) / f.period) / std::log(f.growth)));
    }
    k = std::max<std::int64_t>(k, 0);
    while (k > 0 && pulse_start(f, k) > t) --k;
    while (pulse_start(f, k + 1) <= t) ++k;
    return k;
}

/// Integral of the pulse train over [0, t].
inline double pulse_cumulative(const family::PeriodicPulse& f, double t) {
    if (t <= 0.0) return 0.0;
    std::int64_t k = pulse_index(f, t);
    double inside = std::clamp(t - pulse_start(f, k), 0.0, f.width);
    return f.height * (static_cast<double>(k) * f.width + inside);
}

inline double table_eval(const family::Tabulated& f, double t) {
    auto it = std::upper_bound(f.breakpoints.begin(), f.breakpoints.end(), t);
    if (it == f.breakpoints.begin()) return f.values.front();
    return f.values[static_cast<std::size_t>(it - f.breakpoints.begin()) - 1];
}

inline double table_integral(const family::Tabulated& f, double a, double b) {
    double total = 0.0;
    const std::size_t m = f.breakpoints.size();
    for (std::size_t k = 0; k < m; ++k) {
        double lo = std::max(a, f.breakpoints[k]);
        double hi = (k + 1 < m) ? std::min(b, f.breakpoints[k + 1]) : b;
        if (hi > lo) total += f.values[k] * (hi - lo);
    }
    return total;
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace detail

inline void WeightFunction::validate() const {
    auto nonneg = [](double v, const char* what) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be finite and >= 0");
    };
    std::visit(detail::overloaded{
                   [](const family::Zero&) {},
                   [&](const family::Constant& f) { nonneg(f.c, "constant c"); },
                   [&](const family::PowerDecay& f) {
                       nonneg(f.c, "power_decay c");
                       nonneg(f.p, "power_decay p");
                   },
                   [&](const family::ExponentialDecay& f) {
                       nonneg(f.c, "exponential_decay c");
                       nonneg(f.lambda, "exponential_decay lambda");
                   },
                   [&](const family::PeriodicPulse& f) {
                       nonneg(f.height, "periodic_pulse height");
                       nonneg(f.width, "periodic_pulse width");
                       if (!(f.period > 0.0) || !std::isfinite(f.period))
                           throw DomainError("periodic_pulse period must be > 0");
                       if (f.width > f.period) throw DomainError("periodic_pulse width must not exceed period");
                       if (!(f.growth >= 1.0) || !std::isfinite(f.growth))
                           throw DomainError("periodic_pulse growth must be >= 1");
                   },
                   [&](const family::Tabulated& f) {
                       if (f.breakpoints.empty() || f.breakpoints.size() != f.values.size())
                           throw DomainError("tabulated needs matching, nonempty breakpoints and values");
                       if (f.breakpoints.front() != 0.0) throw DomainError("tabulated breakpoints must start at 0");
                       for (std::size_t k = 1; k < f.breakpoints.size(); ++k)
                           if (!(f.breakpoints[k] > f.breakpoints[k - 1]) || !std::isfinite(f.breakpoints[k]))
                               throw DomainError("tabulated breakpoints must be strictly increasing");
                       for (double v : f.values) nonneg(v, "tabulated value");
                   },
               },
               f_);
}

// ---------------------------------------------------------------------------
// Evaluation

/// Right-continuous value at t >= 0.
inline double eval(const WeightFunction& w, double t) {
    return std::visit(detail::overloaded{
                          [](const family::Zero&) { return 0.0; },
                          [](const family::Constant& f) { return f.c; },
                          [&](const family::PowerDecay& f) { return f.c / std::pow(1.0 + t, f.p); },
                          [&](const family::ExponentialDecay& f) { return f.c * std::exp(-f.lambda * t); },
                          [&](const family::PeriodicPulse& f) {
                              std::int64_t k = detail::pulse_index(f, t);
                              // compare against start + width, the expression breakpoints() reports
                              return (t < detail::pulse_start(f, k) + f.width) ? f.height : 0.0;
                          },
                          [&](const family::Tabulated& f) { return detail::table_eval(f, t); },
                      },
                      w.variant());
}

/// Left limit at t (equals eval wherever w is continuous; eval(0) at t = 0).
inline double eval_left(const WeightFunction& w, double t) {
    if (t <= 0.0) return eval(w, 0.0);
    return std::visit(detail::overloaded{
                          [&](const family::PeriodicPulse& f) {
                              std::int64_t k = detail::pulse_index(f, t);
                              if (detail::pulse_start(f, k) >= t) --k;
                              if (k < 0) return eval(w, 0.0);
                              return (t <= detail::pulse_start(f, k) + f.width) ? f.height : 0.0;
                          },
                          [&](const family::Tabulated& f) {
                              auto it = std::lower_bound(f.breakpoints.begin(), f.breakpoints.end(), t);
                              return f.values[static_cast<std::size_t>(it - f.breakpoints.begin()) - 1];
                          },
                          [&](const auto&) { return eval(w, t); },
                      },
                      w.variant());
}

/// Sum of T consecutive samples w(t), ..., w(t+T-1).
inline double window_sum(const WeightFunction& w, std::int64_t t, std::int64_t T) {
    if (t < 0 || T < 0) throw DomainError("window_sum needs t >= 0 and T >= 0");
    if (const auto* f = w.as<family::Zero>(); f) return 0.0;
    if (const auto* f = w.as<family::Constant>(); f) return f->c * static_cast<double>(T);
    double total = 0.0;
    for (std::int64_t s = t; s < t + T; ++s) total += eval(w, static_cast<double>(s));
    return total;
}

/// Exact integral over [a, b]; b may be +infinity.
inline double window_integral(const WeightFunction& w, double a, double b) {
    if (!(a >= 0.0)) throw DomainError("window_integral needs a >= 0");
    if (a > b) throw DomainError("window_integral needs a <= b");
    if (a == b) return 0.0;
    const bool infinite = std::isinf(b);
    return std::visit(
        detail::overloaded{
            [](const family::Zero&) { return 0.0; },
            [&](const family::Constant& f) { return f.c == 0.0 ? 0.0 : f.c * (b - a); },
            [&](const family::PowerDecay& f) {
                if (f.c == 0.0) return 0.0;
                if (f.p == 1.0) return infinite ? kInf : f.c * std::log((1.0 + b) / (1.0 + a));
                if (infinite) return f.p < 1.0 ? kInf : f.c * std::pow(1.0 + a, 1.0 - f.p) / (f.p - 1.0);
                return f.c * (std::pow(1.0 + b, 1.0 - f.p) - std::pow(1.0 + a, 1.0 - f.p)) / (1.0 - f.p);
            },
            [&](const family::ExponentialDecay& f) {
                if (f.c == 0.0) return 0.0;
                if (f.lambda == 0.0) return f.c * (b - a);
                double eb = infinite ? 0.0 : std::exp(-f.lambda * b);
                return f.c / f.lambda * (std::exp(-f.lambda * a) - eb);
            },
            [&](const family::PeriodicPulse& f) {
                if (f.height == 0.0 || f.width == 0.0) return 0.0;
                if (infinite) return kInf;
                return detail::pulse_cumulative(f, b) - detail::pulse_cumulative(f, a);
            },
            [&](const family::Tabulated& f) {
                if (infinite && f.values.back() > 0.0) return kInf;
                return detail::table_integral(f, a, b);
            },
        },
        w.variant());
}

/// Discontinuity points of w inside [a, b], ascending.
inline std::vector<double> breakpoints(const WeightFunction& w, double a, double b) {
    std::vector<double> out;
    if (const auto* f = w.as<family::PeriodicPulse>(); f && f->height > 0.0 && f->width > 0.0) {
        for (std::int64_t k = detail::pulse_index(*f, std::max(a, 0.0));; ++k) {
            double s = detail::pulse_start(*f, k);
            if (s > b) break;
            if (s >= a) out.push_back(s);
            double e = s + f->width;
            if (e >= a && e <= b && f->width < detail::pulse_start(*f, k + 1) - s) out.push_back(e);
        }
    } else if (const auto* f = w.as<family::Tabulated>(); f) {
        for (std::size_t k = 1; k < f->breakpoints.size(); ++k) {
            double s = f->breakpoints[k];
            if (s >= a && s <= b && f->values[k] != f->values[k - 1]) out.push_back(s);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Persistence

/// Analytic persistence rule per family. Discrete and continuous persistence
/// both reduce to divergence of the total mass for nonnegative functions.
inline Persistence classify_arc(const WeightFunction& w, TimeMode mode) {
    using P = Persistence;
    return std::visit(
        detail::overloaded{
            [](const family::Zero&) { return P::Vanishing; },
            [](const family::Constant& f) { return f.c > 0.0 ? P::Persistent : P::Vanishing; },
            [](const family::PowerDecay& f) { return (f.c > 0.0 && f.p <= 1.0) ? P::Persistent : P::Vanishing; },
            [](const family::ExponentialDecay& f) {
                return (f.c > 0.0 && f.lambda == 0.0) ? P::Persistent : P::Vanishing;
            },
            [&](const family::PeriodicPulse& f) {
                if (f.height == 0.0 || f.width == 0.0) return P::Vanishing;
                // Every pulse carries the same mass, so infinitely many of them diverge,
                // whatever the gap growth. In discrete mode a pulse narrower than one
                // step may fall between integer samples.
                if (mode == TimeMode::Discrete && f.width < 1.0)
                    throw ClassificationError("periodic_pulse narrower than one step has undetermined sampled mass");
                return P::Persistent;
            },
            [](const family::Tabulated& f) {
                if (!f.declared) throw ClassificationError("tabulated weight has no declared persistence");
                if (*f.declared == P::Vanishing && f.values.back() > 0.0)
                    throw ClassificationError("tabulated weight declared vanishing but its final value is positive");
                return *f.declared;
            },
        },
        w.variant());
}

/// inf over t >= 0 of the window mass (discrete: integer t, T samples;
/// continuous: integral over [t, t + window]). nullopt when no closed form.
inline std::optional<double> window_infimum(const WeightFunction& w, TimeMode mode, double window) {
    const bool discrete = mode == TimeMode::Discrete;
    return std::visit(
        detail::overloaded{
            [](const family::Zero&) -> std::optional<double> { return 0.0; },
            [&](const family::Constant& f) -> std::optional<double> { return f.c * window; },
            [&](const family::PowerDecay& f) -> std::optional<double> { return f.p == 0.0 ? f.c * window : 0.0; },
            [&](const family::ExponentialDecay& f) -> std::optional<double> {
                return f.lambda == 0.0 ? f.c * window : 0.0;
            },
            [&](const family::PeriodicPulse& f) -> std::optional<double> {
                if (f.height == 0.0 || f.width == 0.0) return 0.0;
                if (f.growth > 1.0) return 0.0;  // gaps eventually exceed any window
                if (discrete) {
                    if (f.period != std::floor(f.period)) return std::nullopt;
                    double best = kInf;
                    for (std::int64_t t = 0; t < static_cast<std::int64_t>(f.period); ++t)
                        best = std::min(best, window_sum(w, t, static_cast<std::int64_t>(window)));
                    return best;
                }
                // Window integral is piecewise linear in the start offset with kinks where
                // either window end crosses a pulse edge.
                auto wrap = [&](double o) {
                    double r = std::fmod(o, f.period);
                    return r < 0.0 ? r + f.period : r;
                };
                double best = kInf;
                for (double o : {0.0, f.width, wrap(-window), wrap(f.width - window)})
                    best = std::min(best, window_integral(w, o, o + window));
                return best;
            },
            [&](const family::Tabulated& f) -> std::optional<double> {
                double best = kInf;
                if (discrete) {
                    auto last = static_cast<std::int64_t>(std::ceil(f.breakpoints.back()));
                    for (std::int64_t t = 0; t <= last; ++t)
                        best = std::min(best, window_sum(w, t, static_cast<std::int64_t>(window)));
                    return best;
                }
                for (double b : f.breakpoints)
                    for (double o : {b, b - window})
                        if (o >= 0.0) best = std::min(best, window_integral(w, o, o + window));
                return best;
            },
        },
        w.variant());
}

/// Upper bound on sum_{t >= N} w(t) over integer t (exact where a closed form
/// exists). +infinity for non-summable functions.
inline double tail_sum_bound(const WeightFunction& w, std::int64_t N) {
    const double n = static_cast<double>(N);
    return std::visit(
        detail::overloaded{
            [](const family::Zero&) { return 0.0; },
            [](const family::Constant& f) { return f.c > 0.0 ? kInf : 0.0; },
            [&](const family::PowerDecay& f) {
                if (f.c == 0.0) return 0.0;
                if (f.p <= 1.0) return kInf;
                // first term plus integral comparison for the decreasing remainder
                return f.c * std::pow(1.0 + n, -f.p) + f.c * std::pow(1.0 + n, 1.0 - f.p) / (f.p - 1.0);
            },
            [&](const family::ExponentialDecay& f) {
                if (f.c == 0.0) return 0.0;
                if (f.lambda == 0.0) return kInf;
                return f.c * std::exp(-f.lambda * n) / (-std::expm1(-f.lambda));
            },
            [](const family::PeriodicPulse& f) { return (f.height > 0.0 && f.width > 0.0) ? kInf : 0.0; },
            [&](const family::Tabulated& f) {
                if (f.values.back() > 0.0) return kInf;
                double total = 0.0;
                auto last = static_cast<std::int64_t>(std::ceil(f.breakpoints.back()));
                for (std::int64_t t = N; t <= last; ++t) total += detail::table_eval(f, static_cast<double>(t));
                return total;
            },
        },
        w.variant());
}

}  // namespace persist
