#include "sps/spanner.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>

#include "sps/parallel.hpp"
#include "sps/random.hpp"

namespace sps {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using HeapItem = std::pair<double, Vertex>;
using MinHeap = std::priority_queue<HeapItem, std::vector<HeapItem>, std::greater<>>;

}  // namespace

std::vector<double> shortest_distances(const WeightedGraph& h, const Adjacency& adj,
                                       Vertex source, std::span<const Vertex> targets) {
    const std::size_t n = h.num_vertices();
    std::vector<double> dist(n, kInf);
    std::vector<char> want(targets.empty() ? 0 : n, 0);
    std::size_t remaining = targets.size();
    for (Vertex t : targets)
        if (!want[t]) want[t] = 1;
        else --remaining;
    std::vector<char> done(n, 0);
    MinHeap heap;
    dist[source] = 0.0;
    heap.emplace(0.0, source);
    const auto edges = h.edges();
    while (!heap.empty()) {
        auto [d, x] = heap.top();
        heap.pop();
        if (done[x]) continue;
        done[x] = 1;
        if (!want.empty() && want[x] && --remaining == 0) break;
        for (const auto& [y, idx] : adj.neighbors(x)) {
            const double nd = d + edges[idx].length();
            if (nd < dist[y]) {
                dist[y] = nd;
                heap.emplace(nd, y);
            }
        }
    }
    return dist;
}

std::optional<PathResult> shortest_path(const WeightedGraph& h, const Adjacency& adj, Vertex u,
                                        Vertex v) {
    const std::size_t n = h.num_vertices();
    std::vector<double> dist(n, kInf);
    std::vector<Vertex> pred(n, static_cast<Vertex>(-1));
    std::vector<char> done(n, 0);
    MinHeap heap;
    dist[u] = 0.0;
    heap.emplace(0.0, u);
    const auto edges = h.edges();
    while (!heap.empty()) {
        auto [d, x] = heap.top();
        heap.pop();
        if (done[x]) continue;
        done[x] = 1;
        if (x == v) break;
        for (const auto& [y, idx] : adj.neighbors(x)) {
            const double nd = d + edges[idx].length();
            if (nd < dist[y]) {
                dist[y] = nd;
                pred[y] = x;
                heap.emplace(nd, y);
            }
        }
    }
    if (!done[v]) return std::nullopt;
    PathResult path;
    for (Vertex x = v; x != u; x = pred[x]) path.vertices.push_back(x);
    path.vertices.push_back(u);
    std::reverse(path.vertices.begin(), path.vertices.end());
    // Re-sum along the path so the length is exactly the series resistance.
    for (std::size_t i = 0; i + 1 < path.vertices.size(); ++i)
        path.length += 1.0 / h.weight(path.vertices[i], path.vertices[i + 1]);
    return path;
}

double stretch(const WeightedGraph& g, const WeightedGraph& h, const Edge& e) {
    auto idx = g.find(e.u, e.v);
    if (!idx) throw Error("stretch: edge is not in G");
    const Edge& ge = g.edges()[*idx];
    Adjacency adj(h);
    const Vertex target[] = {ge.v};
    auto dist = shortest_distances(h, adj, ge.u, target);
    if (!std::isfinite(dist[ge.v]))
        throw DisconnectedError("unstretchable: no path in H between " + std::to_string(ge.u) +
                                " and " + std::to_string(ge.v));
    return ge.w * dist[ge.v];
}

double max_stretch(const WeightedGraph& g, const WeightedGraph& h, unsigned threads) {
    if (g.num_vertices() != h.num_vertices()) throw Error("max_stretch: vertex counts differ");
    const std::size_t n = g.num_vertices();
    Adjacency hadj(h);
    // Edges grouped by lower endpoint (edges are sorted by u).
    std::vector<std::size_t> first(n + 1, 0);
    for (const Edge& e : g.edges()) ++first[e.u + 1];
    for (std::size_t i = 0; i < n; ++i) first[i + 1] += first[i];
    const auto edges = g.edges();
    std::vector<double> worst(n, 0.0);
    std::vector<char> broken(n, 0);
    parallel_for(n, threads, [&](std::size_t u) {
        if (first[u] == first[u + 1]) return;
        std::vector<Vertex> targets;
        for (std::size_t i = first[u]; i < first[u + 1]; ++i) targets.push_back(edges[i].v);
        auto dist = shortest_distances(h, hadj, static_cast<Vertex>(u), targets);
        for (std::size_t i = first[u]; i < first[u + 1]; ++i) {
            if (!std::isfinite(dist[edges[i].v])) {
                broken[u] = 1;
                return;
            }
            worst[u] = std::max(worst[u], edges[i].w * dist[edges[i].v]);
        }
    });
    for (std::size_t u = 0; u < n; ++u)
        if (broken[u])
            throw DisconnectedError("unstretchable: an edge at vertex " + std::to_string(u) +
                                    " has no path in H");
    return n == 0 ? 0.0 : *std::max_element(worst.begin(), worst.end());
}

WeightedGraph greedy_spanner(const WeightedGraph& g, unsigned k) {
    if (k == 0) throw Error("greedy_spanner: k must be positive");
    const std::size_t n = g.num_vertices();
    std::vector<Edge> order(g.edges().begin(), g.edges().end());
    std::sort(order.begin(), order.end(),
              [](const Edge& a, const Edge& b) { return length_key(a) < length_key(b); });
    const double factor = 2.0 * k - 1.0;
    std::vector<std::vector<std::pair<Vertex, double>>> adj(n);
    std::vector<double> dist(n, kInf);
    std::vector<Vertex> touched;
    std::vector<Edge> kept;
    for (const Edge& e : order) {
        const double bound = factor * e.length();
        // Dijkstra from e.u pruned at `bound`.
        MinHeap heap;
        dist[e.u] = 0.0;
        touched.assign(1, e.u);
        heap.emplace(0.0, e.u);
        bool reached = false;
        while (!heap.empty()) {
            auto [d, x] = heap.top();
            heap.pop();
            if (d > dist[x]) continue;
            if (x == e.v) {
                reached = true;
                break;
            }
            for (auto [y, len] : adj[x]) {
                const double nd = d + len;
                if (nd <= bound && nd < dist[y]) {
                    if (dist[y] == kInf) touched.push_back(y);
                    dist[y] = nd;
                    heap.emplace(nd, y);
                }
            }
        }
        for (Vertex x : touched) dist[x] = kInf;
        if (!reached) {
            kept.push_back(e);
            adj[e.u].emplace_back(e.v, e.length());
            adj[e.v].emplace_back(e.u, e.length());
        }
    }
    return WeightedGraph::from_edges(n, std::move(kept));
}

double cluster_sample_probability(std::size_t n, unsigned k) {
    return std::pow(static_cast<double>(n), -1.0 / static_cast<double>(k));
}

bool cluster_sampled(Seed seed, unsigned iteration, Vertex cluster, double probability) {
    return coin({seed, 0x62735f636c7573ULL, iteration, cluster}) < probability;
}

namespace {

constexpr std::int64_t kNoCluster = -1;

struct VertexDecision {
    std::int64_t new_cluster = kNoCluster;
    std::vector<std::size_t> add;
    std::vector<std::size_t> remove;
};

/// Lightest active edge from v into each neighboring cluster, ordered by
/// cluster id. Entries are (cluster, edge index).
std::vector<std::pair<std::int64_t, std::size_t>> lightest_per_cluster(
    Vertex v, const Adjacency& adj, std::span<const Edge> edges, const std::vector<char>& active,
    const std::vector<std::int64_t>& cluster) {
    std::vector<std::pair<std::int64_t, std::size_t>> best;
    for (const auto& [x, idx] : adj.neighbors(v))
        if (active[idx]) best.emplace_back(cluster[x], idx);
    std::sort(best.begin(), best.end(), [&](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return length_key(edges[a.second]) < length_key(edges[b.second]);
    });
    auto last = std::unique(best.begin(), best.end(),
                            [](const auto& a, const auto& b) { return a.first == b.first; });
    best.erase(last, best.end());
    return best;
}

}  // namespace

WeightedGraph baswana_sen_spanner(const WeightedGraph& g, unsigned k, Seed seed,
                                  unsigned threads) {
    if (k == 0) throw Error("baswana_sen_spanner: k must be positive");
    const std::size_t n = g.num_vertices();
    const auto edges = g.edges();
    const std::size_t m = edges.size();
    Adjacency adj(g);
    std::vector<char> active(m, 1), chosen(m, 0);
    std::vector<std::int64_t> cluster(n);
    for (std::size_t v = 0; v < n; ++v) cluster[v] = static_cast<std::int64_t>(v);
    const double p = cluster_sample_probability(n, k);
    std::vector<VertexDecision> decisions(n);

    for (unsigned iter = 1; iter < k; ++iter) {
        auto sampled = [&](std::int64_t c) {
            return cluster_sampled(seed, iter, static_cast<Vertex>(c), p);
        };
        parallel_for(n, threads, [&](std::size_t vi) {
            const Vertex v = static_cast<Vertex>(vi);
            VertexDecision& d = decisions[v];
            d.add.clear();
            d.remove.clear();
            d.new_cluster = cluster[v];
            if (cluster[v] == kNoCluster || sampled(cluster[v])) return;
            auto best = lightest_per_cluster(v, adj, edges, active, cluster);
            const std::pair<std::int64_t, std::size_t>* star = nullptr;
            for (const auto& b : best)
                if (sampled(b.first) &&
                    (!star || length_key(edges[b.second]) < length_key(edges[star->second])))
                    star = &b;
            std::vector<std::int64_t> dropped;
            if (!star) {
                d.new_cluster = kNoCluster;
                for (const auto& b : best) {
                    d.add.push_back(b.second);
                    dropped.push_back(b.first);
                }
            } else {
                d.new_cluster = star->first;
                d.add.push_back(star->second);
                dropped.push_back(star->first);
                const LengthKey star_key = length_key(edges[star->second]);
                for (const auto& b : best)
                    if (length_key(edges[b.second]) < star_key) {
                        d.add.push_back(b.second);
                        dropped.push_back(b.first);
                    }
            }
            std::sort(dropped.begin(), dropped.end());
            for (const auto& [x, idx] : adj.neighbors(v))
                if (active[idx] && std::binary_search(dropped.begin(), dropped.end(), cluster[x]))
                    d.remove.push_back(idx);
        });
        for (std::size_t v = 0; v < n; ++v) {
            cluster[v] = decisions[v].new_cluster;
            for (auto idx : decisions[v].add) chosen[idx] = 1;
            for (auto idx : decisions[v].remove) active[idx] = 0;
        }
        for (std::size_t i = 0; i < m; ++i)
            if (active[i] && cluster[edges[i].u] != kNoCluster &&
                cluster[edges[i].u] == cluster[edges[i].v])
                active[i] = 0;
    }

    // Phase 2: every vertex keeps its lightest edge into each adjacent cluster.
    parallel_for(n, threads, [&](std::size_t vi) {
        VertexDecision& d = decisions[vi];
        d.add.clear();
        for (const auto& b : lightest_per_cluster(static_cast<Vertex>(vi), adj, edges, active, cluster))
            d.add.push_back(b.second);
    });
    for (std::size_t v = 0; v < n; ++v)
        for (auto idx : decisions[v].add) chosen[idx] = 1;

    std::vector<Edge> kept;
    for (std::size_t i = 0; i < m; ++i)
        if (chosen[i]) kept.push_back(edges[i]);
    return WeightedGraph::from_edges(n, std::move(kept));
}

SpannerAlgo parse_spanner_algo(const std::string& name) {
    if (name == "greedy") return SpannerAlgo::greedy;
    if (name == "baswana-sen") return SpannerAlgo::baswana_sen;
    throw Error("unknown spanner algorithm \"" + name + "\"");
}

std::string to_string(SpannerAlgo algo) {
    return algo == SpannerAlgo::greedy ? "greedy" : "baswana-sen";
}

WeightedGraph build_spanner(SpannerAlgo algo, const WeightedGraph& g, unsigned k, Seed seed,
                            unsigned threads) {
    return algo == SpannerAlgo::greedy ? greedy_spanner(g, k)
                                       : baswana_sen_spanner(g, k, seed, threads);
}

}  // namespace sps
