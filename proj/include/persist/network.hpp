#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "persist/error.hpp"
#include "persist/graph.hpp"
#include "persist/weights.hpp"

namespace persist {

struct WeightedArc {
    Arc arc;
    WeightFunction weight;

    friend bool operator==(const WeightedArc&, const WeightedArc&) = default;
};

/// Discrete-mode self weight W_ii. Either an explicit function, or the
/// complement 1 - xi+(t; i) which satisfies stochasticity by construction.
struct SelfWeight {
    enum class Kind { Explicit, Complement };

    Kind kind = Kind::Complement;
    WeightFunction fn;

    static SelfWeight complement() { return {}; }
    static SelfWeight of(WeightFunction f) { return {Kind::Explicit, std::move(f)}; }

    friend bool operator==(const SelfWeight&, const SelfWeight&) = default;
};

struct PersistenceReport {
    std::vector<Arc> persistent_arcs;
    std::vector<Arc> vanishing_arcs;
    Digraph persistent_graph;
};

/// Underlying graph G* with one weight function per arc. Classification of
/// every arc happens at construction, so a network always has a persistent graph.
class TimeVaryingNetwork {
public:
    TimeVaryingNetwork(std::size_t n, std::vector<WeightedArc> arcs, TimeMode mode,
                       std::vector<SelfWeight> self_weights = {})
        : mode_(mode), arcs_(std::move(arcs)), graph_(n, arc_list(arcs_)), self_(std::move(self_weights)),
          report_{{}, {}, Digraph(n)} {
        if (graph_.arcs().size() != arcs_.size()) throw DomainError("duplicate arc in network");
        if (mode_ == TimeMode::Discrete) {
            if (self_.empty()) self_.assign(n, SelfWeight::complement());
            if (self_.size() != n) throw DomainError("need one self weight per node");
        } else if (!self_.empty()) {
            throw DomainError("self weights do not enter continuous-time dynamics");
        }
        in_arcs_.resize(n);
        persistent_.resize(arcs_.size());
        std::vector<Arc> pers;
        for (std::size_t k = 0; k < arcs_.size(); ++k) {
            in_arcs_[arcs_[k].arc.head].push_back(k);
            Persistence p;
            try {
                p = classify_arc(arcs_[k].weight, mode_);
            } catch (const ClassificationError& e) {
                throw ClassificationError("arc " + to_string(arcs_[k].arc) + ": " + e.what());
            }
            persistent_[k] = p == Persistence::Persistent;
            (persistent_[k] ? report_.persistent_arcs : report_.vanishing_arcs).push_back(arcs_[k].arc);
            if (persistent_[k]) pers.push_back(arcs_[k].arc);
        }
        report_.persistent_graph = Digraph(n, std::move(pers));
    }

    std::size_t node_count() const noexcept { return graph_.node_count(); }
    TimeMode mode() const noexcept { return mode_; }
    const Digraph& graph() const noexcept { return graph_; }
    std::span<const WeightedArc> arcs() const noexcept { return arcs_; }
    std::span<const SelfWeight> self_weights() const noexcept { return self_; }
    /// Indices into arcs() of the arcs whose head is `i`.
    std::span<const std::size_t> in_arcs(NodeId i) const { return in_arcs_.at(i); }
    bool is_persistent(std::size_t arc_index) const { return persistent_.at(arc_index); }
    const PersistenceReport& persistence() const noexcept { return report_; }

    friend bool operator==(const TimeVaryingNetwork& a, const TimeVaryingNetwork& b) {
        return a.mode_ == b.mode_ && a.node_count() == b.node_count() && a.arcs_ == b.arcs_ && a.self_ == b.self_;
    }

private:
    static std::vector<Arc> arc_list(const std::vector<WeightedArc>& arcs) {
        std::vector<Arc> out;
        out.reserve(arcs.size());
        for (const auto& a : arcs) out.push_back(a.arc);
        return out;
    }

    TimeMode mode_;
    std::vector<WeightedArc> arcs_;
    Digraph graph_;
    std::vector<SelfWeight> self_;
    std::vector<std::vector<std::size_t>> in_arcs_;
    std::vector<bool> persistent_;
    PersistenceReport report_;
};

inline PersistenceReport persistent_graph(const TimeVaryingNetwork& net) { return net.persistence(); }

/// Total weight of vanishing arcs at t.
inline double theta(const TimeVaryingNetwork& net, double t) {
    double total = 0.0;
    for (std::size_t k = 0; k < net.arcs().size(); ++k)
        if (!net.is_persistent(k)) total += eval(net.arcs()[k].weight, t);
    return total;
}

/// Total incoming non-self weight at node m.
inline double xi_plus(const TimeVaryingNetwork& net, double t, NodeId m) {
    net.graph().require_node(m);
    double total = 0.0;
    for (std::size_t k : net.in_arcs(m)) total += eval(net.arcs()[k].weight, t);
    return total;
}

/// Incoming weight at node m restricted to persistent arcs.
inline double xi0_plus(const TimeVaryingNetwork& net, double t, NodeId m) {
    net.graph().require_node(m);
    double total = 0.0;
    for (std::size_t k : net.in_arcs(m))
        if (net.is_persistent(k)) total += eval(net.arcs()[k].weight, t);
    return total;
}

/// Integral of xi+(.; m) over [a, b], exact per family.
inline double xi_plus_integral(const TimeVaryingNetwork& net, NodeId m, double a, double b) {
    double total = 0.0;
    for (std::size_t k : net.in_arcs(m)) total += window_integral(net.arcs()[k].weight, a, b);
    return total;
}

/// W_ii(t) in discrete mode.
inline double self_weight(const TimeVaryingNetwork& net, NodeId i, double t) {
    if (net.mode() != TimeMode::Discrete) throw DomainError("self weights exist only in discrete mode");
    const SelfWeight& s = net.self_weights()[i];
    return s.kind == SelfWeight::Kind::Complement ? 1.0 - xi_plus(net, t, i) : eval(s.fn, t);
}

/// Builds a discrete network whose self weights are 1 - xi+, so every row sums
/// to one. Rejects the network if xi+ exceeds 1 at any of `sample_times`.
inline TimeVaryingNetwork make_stochastic_network(std::size_t n, std::vector<WeightedArc> arcs,
                                                  std::span<const double> sample_times) {
    TimeVaryingNetwork net(n, std::move(arcs), TimeMode::Discrete);
    for (double t : sample_times)
        for (NodeId i = 0; i < n; ++i)
            if (double xi = xi_plus(net, t, i); xi > 1.0)
                throw DomainError("incoming weight " + std::to_string(xi) + " > 1 at node " + std::to_string(i) +
                                  ", t=" + std::to_string(t));
    return net;
}

/// theta(t) viewed as a function: the sum of a network's vanishing-arc weights.
class ThetaFunction {
public:
    ThetaFunction() = default;
    explicit ThetaFunction(std::vector<WeightFunction> terms) : terms_(std::move(terms)) {}

    static ThetaFunction of(const TimeVaryingNetwork& net) {
        std::vector<WeightFunction> terms;
        for (std::size_t k = 0; k < net.arcs().size(); ++k)
            if (!net.is_persistent(k)) terms.push_back(net.arcs()[k].weight);
        return ThetaFunction(std::move(terms));
    }

    std::span<const WeightFunction> terms() const noexcept { return terms_; }

    double operator()(double t) const {
        double total = 0.0;
        for (const auto& w : terms_) total += eval(w, t);
        return total;
    }

    double integral(double a, double b) const {
        double total = 0.0;
        for (const auto& w : terms_) total += window_integral(w, a, b);
        return total;
    }

    /// Upper bound on sum_{t >= N} theta(t).
    double tail_sum_bound(std::int64_t N) const {
        double total = 0.0;
        for (const auto& w : terms_) total += persist::tail_sum_bound(w, N);
        return total;
    }

private:
    std::vector<WeightFunction> terms_;
};

}  // namespace persist
