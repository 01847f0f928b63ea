#include "sps/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace sps {

namespace {

bool pair_less(const Edge& a, const Edge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
}

std::string pair_name(const Edge& e) {
    return "(" + std::to_string(e.u) + ", " + std::to_string(e.v) + ")";
}

}  // namespace

WeightedGraph::WeightedGraph(std::size_t n) : n_(n) {
    if (n == 0) throw Error("graph must have at least one vertex");
}

WeightedGraph WeightedGraph::from_edges(std::size_t n, std::vector<Edge> edges,
                                        Duplicates policy) {
    WeightedGraph g(n);
    for (Edge& e : edges) {
        if (e.u >= n || e.v >= n)
            throw Error("edge " + pair_name(e) + " out of range for n = " + std::to_string(n));
        if (e.u == e.v) throw Error("self-loop at vertex " + std::to_string(e.u));
        if (!(e.w > 0.0) || !std::isfinite(e.w))
            throw Error("edge " + pair_name(e) + " has non-positive weight");
        if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::stable_sort(edges.begin(), edges.end(), pair_less);
    std::vector<Edge> out;
    out.reserve(edges.size());
    for (const Edge& e : edges) {
        if (!out.empty() && out.back().u == e.u && out.back().v == e.v) {
            if (policy == Duplicates::reject) throw Error("duplicate edge " + pair_name(e));
            out.back().w += e.w;
        } else {
            out.push_back(e);
        }
    }
    g.edges_ = std::move(out);
    return g;
}

std::optional<std::size_t> WeightedGraph::find(Vertex u, Vertex v) const {
    if (u > v) std::swap(u, v);
    Edge key{u, v, 0.0};
    auto it = std::lower_bound(edges_.begin(), edges_.end(), key, pair_less);
    if (it == edges_.end() || it->u != u || it->v != v) return std::nullopt;
    return static_cast<std::size_t>(it - edges_.begin());
}

double WeightedGraph::weight(Vertex u, Vertex v) const {
    auto idx = find(u, v);
    return idx ? edges_[*idx].w : 0.0;
}

WeightedGraph add(const WeightedGraph& g1, const WeightedGraph& g2) {
    if (g1.num_vertices() != g2.num_vertices())
        throw Error("add: vertex counts differ");
    std::vector<Edge> all(g1.edges().begin(), g1.edges().end());
    all.insert(all.end(), g2.edges().begin(), g2.edges().end());
    return WeightedGraph::from_edges(g1.num_vertices(), std::move(all), Duplicates::merge);
}

WeightedGraph scale(double a, const WeightedGraph& g) {
    if (!(a > 0.0)) throw Error("scale factor must be positive");
    std::vector<Edge> edges(g.edges().begin(), g.edges().end());
    for (Edge& e : edges) e.w *= a;
    return WeightedGraph::from_edges(g.num_vertices(), std::move(edges));
}

WeightedGraph subtract(const WeightedGraph& g, const WeightedGraph& h) {
    if (g.num_vertices() != h.num_vertices())
        throw Error("subtract: vertex counts differ");
    std::vector<Edge> out;
    out.reserve(g.num_edges() >= h.num_edges() ? g.num_edges() - h.num_edges() : 0);
    auto gi = g.edges().begin();
    for (const Edge& e : h.edges()) {
        while (gi != g.edges().end() && pair_less(*gi, e)) out.push_back(*gi++);
        if (gi == g.edges().end() || gi->u != e.u || gi->v != e.v)
            throw Error("subtract: edge " + pair_name(e) + " is not in the minuend");
        if (gi->w != e.w)
            throw Error("subtract: weight mismatch on edge " + pair_name(e));
        ++gi;
    }
    out.insert(out.end(), gi, g.edges().end());
    return WeightedGraph::from_edges(g.num_vertices(), std::move(out));
}

bool is_subgraph(const WeightedGraph& h, const WeightedGraph& g) {
    if (h.num_vertices() != g.num_vertices()) return false;
    for (const Edge& e : h.edges()) {
        auto idx = g.find(e.u, e.v);
        if (!idx || g.edges()[*idx].w != e.w) return false;
    }
    return true;
}

WeightedGraph disjoint_union(std::span<const WeightedGraph> parts, std::size_t n) {
    std::vector<Edge> all;
    for (const auto& p : parts) {
        if (p.num_vertices() != n) throw Error("disjoint_union: vertex counts differ");
        all.insert(all.end(), p.edges().begin(), p.edges().end());
    }
    return WeightedGraph::from_edges(n, std::move(all), Duplicates::reject);
}

Adjacency::Adjacency(const WeightedGraph& g) : offsets_(g.num_vertices() + 1, 0) {
    for (const Edge& e : g.edges()) {
        ++offsets_[e.u + 1];
        ++offsets_[e.v + 1];
    }
    std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
    entries_.resize(offsets_.back());
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    auto edges = g.edges();
    for (std::size_t i = 0; i < edges.size(); ++i) {
        entries_[fill[edges[i].u]++] = {edges[i].v, i};
        entries_[fill[edges[i].v]++] = {edges[i].u, i};
    }
    for (std::size_t v = 0; v + 1 < offsets_.size(); ++v)
        std::sort(entries_.begin() + offsets_[v], entries_.begin() + offsets_[v + 1],
                  [](const Entry& a, const Entry& b) { return a.neighbor < b.neighbor; });
}

Components connected_components(const WeightedGraph& g) {
    const std::size_t n = g.num_vertices();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto root = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const Edge& e : g.edges()) {
        auto a = root(e.u), b = root(e.v);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
    Components c;
    c.label.assign(n, 0);
    std::vector<std::size_t> id(n, static_cast<std::size_t>(-1));
    for (std::size_t v = 0; v < n; ++v) {
        auto r = root(v);
        if (id[r] == static_cast<std::size_t>(-1)) id[r] = c.count++;
        c.label[v] = id[r];
    }
    return c;
}

}  // namespace sps
