#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "sps/common.hpp"

namespace sps {

struct Edge {
    Vertex u;
    Vertex v;
    double w;

    /// Resistive length 1/w.
    double length() const { return 1.0 / w; }

    friend bool operator==(const Edge&, const Edge&) = default;
};

enum class Duplicates { reject, merge };

/// Undirected simple graph with positive edge weights. Edges are kept in
/// canonical form (u < v) sorted by (u, v). Immutable after construction.
class WeightedGraph {
public:
    /// The edgeless graph on n vertices.
    explicit WeightedGraph(std::size_t n = 1);

    /// Canonicalizes endpoint order and sorts. Self-loops, non-positive or
    /// non-finite weights, and out-of-range ids throw. Duplicate pairs
    /// either throw or are merged by summing weights.
    static WeightedGraph from_edges(std::size_t n, std::vector<Edge> edges,
                                    Duplicates policy = Duplicates::reject);

    std::size_t num_vertices() const { return n_; }
    std::size_t num_edges() const { return edges_.size(); }
    bool empty() const { return edges_.empty(); }
    std::span<const Edge> edges() const { return edges_; }

    /// Index of edge {u, v} in edges(), if present.
    std::optional<std::size_t> find(Vertex u, Vertex v) const;
    bool contains(Vertex u, Vertex v) const { return find(u, v).has_value(); }
    /// Weight of {u, v}, or 0 when absent.
    double weight(Vertex u, Vertex v) const;

    friend bool operator==(const WeightedGraph&, const WeightedGraph&) = default;

private:
    std::size_t n_;
    std::vector<Edge> edges_;
};

/// G1 + G2: union of edge sets, weights of shared pairs add.
WeightedGraph add(const WeightedGraph& g1, const WeightedGraph& g2);

/// a * G for a > 0.
WeightedGraph scale(double a, const WeightedGraph& g);

/// Edge-set removal G - H. Every edge of H must be present in G with
/// exactly the same weight.
WeightedGraph subtract(const WeightedGraph& g, const WeightedGraph& h);

/// True when every edge of h appears in g with identical weight.
bool is_subgraph(const WeightedGraph& h, const WeightedGraph& g);

/// Union of pairwise edge-disjoint graphs (throws on a shared pair).
WeightedGraph disjoint_union(std::span<const WeightedGraph> parts, std::size_t n);

/// Compressed adjacency: for each vertex the incident (neighbor, edge index)
/// pairs, neighbors ascending.
class Adjacency {
public:
    struct Entry {
        Vertex neighbor;
        std::size_t edge;
    };

    explicit Adjacency(const WeightedGraph& g);

    std::span<const Entry> neighbors(Vertex v) const {
        return {entries_.data() + offsets_[v], entries_.data() + offsets_[v + 1]};
    }
    std::size_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }

private:
    std::vector<std::size_t> offsets_;
    std::vector<Entry> entries_;
};

/// Component label per vertex (labels are 0..count-1 in order of the
/// smallest vertex of each component).
struct Components {
    std::vector<std::size_t> label;
    std::size_t count = 0;
};

Components connected_components(const WeightedGraph& g);

}  // namespace sps
