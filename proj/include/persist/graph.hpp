#pragma once

// Static directed graphs and the connectivity queries the agreement results
// are conditioned on.
//
// Direction convention, used by every API in the library: an arc stored as
// (tail = j, head = i) means node j influences node i. Its weight is W_ij.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "persist/error.hpp"

namespace persist {

using NodeId = std::size_t;

struct Arc {
    NodeId tail;  ///< influencing node j
    NodeId head;  ///< influenced node i

    friend auto operator<=>(const Arc&, const Arc&) = default;
};

inline std::string to_string(const Arc& a) {
    return "(" + std::to_string(a.tail) + "->" + std::to_string(a.head) + ")";
}

/// Simple digraph on nodes {0, ..., n-1}. No self-loops; duplicate arcs are
/// collapsed. Immutable after construction.
class Digraph {
public:
    explicit Digraph(std::size_t n, std::vector<Arc> arcs = {}) : n_(n), arcs_(std::move(arcs)) {
        if (n_ == 0) throw DomainError("digraph needs at least one node");
        for (const Arc& a : arcs_) {
            if (a.tail >= n_ || a.head >= n_)
                throw InvalidNode("arc " + to_string(a) + " references a node outside [0, " + std::to_string(n_) + ")");
            if (a.tail == a.head)
                throw DomainError("self-loop " + to_string(a) + " is not an arc; self-influence belongs to the dynamics");
        }
        std::sort(arcs_.begin(), arcs_.end());
        arcs_.erase(std::unique(arcs_.begin(), arcs_.end()), arcs_.end());
        out_.resize(n_);
        in_.resize(n_);
        for (const Arc& a : arcs_) {
            out_[a.tail].push_back(a.head);
            in_[a.head].push_back(a.tail);
        }
    }

    std::size_t node_count() const noexcept { return n_; }
    std::span<const Arc> arcs() const noexcept { return arcs_; }
    std::span<const NodeId> successors(NodeId i) const { return out_.at(i); }
    std::span<const NodeId> predecessors(NodeId i) const { return in_.at(i); }

    bool has_arc(const Arc& a) const { return std::binary_search(arcs_.begin(), arcs_.end(), a); }

    void require_node(NodeId i) const {
        if (i >= n_) throw InvalidNode("node " + std::to_string(i) + " outside [0, " + std::to_string(n_) + ")");
    }

    friend bool operator==(const Digraph& a, const Digraph& b) { return a.n_ == b.n_ && a.arcs_ == b.arcs_; }

private:
    std::size_t n_;
    std::vector<Arc> arcs_;
    std::vector<std::vector<NodeId>> out_;
    std::vector<std::vector<NodeId>> in_;
};

/// BFS hop counts from `source`; nullopt for unreachable nodes.
inline std::vector<std::optional<std::size_t>> distances_from(const Digraph& g, NodeId source) {
    g.require_node(source);
    std::vector<std::optional<std::size_t>> dist(g.node_count());
    std::deque<NodeId> queue{source};
    dist[source] = 0;
    while (!queue.empty()) {
        NodeId u = queue.front();
        queue.pop_front();
        for (NodeId v : g.successors(u)) {
            if (!dist[v]) {
                dist[v] = *dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    return dist;
}

/// Every node reachable from `i` along directed paths, `i` included. Sorted.
inline std::vector<NodeId> reachable_set(const Digraph& g, NodeId i) {
    auto dist = distances_from(g, i);
    std::vector<NodeId> out;
    for (NodeId v = 0; v < dist.size(); ++v)
        if (dist[v]) out.push_back(v);
    return out;
}

/// Nodes from which `i` is reachable (including `i`). Sorted.
inline std::vector<NodeId> ancestors(const Digraph& g, NodeId i) {
    g.require_node(i);
    std::vector<bool> seen(g.node_count(), false);
    std::vector<NodeId> stack{i};
    seen[i] = true;
    while (!stack.empty()) {
        NodeId u = stack.back();
        stack.pop_back();
        for (NodeId p : g.predecessors(u))
            if (!seen[p]) {
                seen[p] = true;
                stack.push_back(p);
            }
    }
    std::vector<NodeId> out;
    for (NodeId v = 0; v < seen.size(); ++v)
        if (seen[v]) out.push_back(v);
    return out;
}

/// Centers (roots): nodes that reach every node. Empty iff not quasi-strongly connected.
inline std::vector<NodeId> centers(const Digraph& g) {
    std::vector<NodeId> out;
    for (NodeId i = 0; i < g.node_count(); ++i)
        if (reachable_set(g, i).size() == g.node_count()) out.push_back(i);
    return out;
}

inline bool is_quasi_strongly_connected(const Digraph& g) { return !centers(g).empty(); }

inline bool is_strongly_connected(const Digraph& g) {
    // Strongly connected iff node 0 reaches everything and everything reaches node 0.
    return reachable_set(g, 0).size() == g.node_count() && ancestors(g, 0).size() == g.node_count();
}

/// Longest shortest path over ordered pairs (i, j) with j reachable from i.
/// Unreachable pairs are ignored; an arcless graph has diameter 0.
inline std::size_t diameter(const Digraph& g) {
    std::size_t d = 0;
    for (NodeId i = 0; i < g.node_count(); ++i)
        for (const auto& dist : distances_from(g, i))
            if (dist) d = std::max(d, *dist);
    return d;
}

}  // namespace persist
