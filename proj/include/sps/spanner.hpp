#pragma once

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "sps/graph.hpp"

namespace sps {

/// Total order on edges used for every "lightest edge" choice: resistive
/// length 1/w first, then the canonical endpoint pair.
struct LengthKey {
    double length;
    Vertex u;
    Vertex v;

    friend auto operator<=>(const LengthKey&, const LengthKey&) = default;
};

inline LengthKey length_key(const Edge& e) { return {e.length(), e.u, e.v}; }

/// Single-source shortest paths in h under lengths 1/w. Unreachable
/// vertices get +infinity. The search stops once every vertex in `targets`
/// is settled (all vertices when targets is empty).
std::vector<double> shortest_distances(const WeightedGraph& h, const Adjacency& adj,
                                       Vertex source, std::span<const Vertex> targets = {});

struct PathResult {
    double length = 0.0;
    std::vector<Vertex> vertices;  // source first, target last
};

/// Shortest u-v path in h under lengths 1/w, or nullopt when disconnected.
std::optional<PathResult> shortest_path(const WeightedGraph& h, const Adjacency& adj, Vertex u,
                                        Vertex v);

/// st_H(e) = w_e * dist_H(u, v). Throws DisconnectedError ("unstretchable")
/// when H has no u-v path.
double stretch(const WeightedGraph& g, const WeightedGraph& h, const Edge& e);

/// Maximum stretch over all edges of g (one Dijkstra per source vertex).
double max_stretch(const WeightedGraph& g, const WeightedGraph& h, unsigned threads = 1);

/// Relative slack when certifying computed stretches against 2k-1; path
/// lengths are float sums of up to 2k-1 terms.
inline constexpr double kStretchSlack = 1e-9;

inline bool stretch_within(double measured, unsigned k) {
    return measured <= (2.0 * k - 1.0) * (1.0 + kStretchSlack);
}

/// Classical greedy (2k-1)-spanner: scan edges by LengthKey, keep an edge
/// iff the current spanner distance exceeds (2k-1) times its length.
WeightedGraph greedy_spanner(const WeightedGraph& g, unsigned k);

/// Probability that a cluster is sampled in a Baswana-Sen iteration: n^(-1/k).
double cluster_sample_probability(std::size_t n, unsigned k);

/// Whether cluster `cluster` (named by its center vertex) is sampled in
/// iteration `iteration`. A pure function of its arguments, shared by the
/// shared-memory and distributed builders.
bool cluster_sampled(Seed seed, unsigned iteration, Vertex cluster, double probability);

/// Randomized Baswana-Sen clustering (2k-1)-spanner. Per-vertex work within
/// an iteration runs on `threads` workers; the output does not depend on
/// the thread count.
WeightedGraph baswana_sen_spanner(const WeightedGraph& g, unsigned k, Seed seed,
                                  unsigned threads = 1);

enum class SpannerAlgo { greedy, baswana_sen };

SpannerAlgo parse_spanner_algo(const std::string& name);
std::string to_string(SpannerAlgo algo);

WeightedGraph build_spanner(SpannerAlgo algo, const WeightedGraph& g, unsigned k, Seed seed,
                            unsigned threads = 1);

}  // namespace sps
