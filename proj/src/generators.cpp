#include "sps/generators.hpp"

#include <cmath>
#include <sstream>

#include "sps/graph_io.hpp"
#include "sps/random.hpp"

namespace sps {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const char* what) {
    if (!ok) throw Error(std::string("invalid generator parameters: ") + what);
}

struct Topology {
    std::size_t n = 1;
    std::vector<std::pair<Vertex, Vertex>> pairs;
};

void add_clique(Topology& t, Vertex first, std::size_t size) {
    for (std::size_t i = 0; i < size; ++i)
        for (std::size_t j = i + 1; j < size; ++j)
            t.pairs.emplace_back(first + i, first + j);
}

Topology build(const GraphModel& model, Rng& rng) {
    Topology t;
    std::visit(overloaded{
                   [&](const ErdosRenyi& m) {
                       require(m.n >= 1, "n >= 1");
                       require(m.p > 0.0 && m.p <= 1.0, "p in (0, 1]");
                       t.n = m.n;
                       for (std::size_t u = 0; u < m.n; ++u)
                           for (std::size_t v = u + 1; v < m.n; ++v)
                               if (rng.uniform() < m.p) t.pairs.emplace_back(u, v);
                   },
                   [&](const Grid2d& m) {
                       require(m.rows >= 1 && m.cols >= 1, "rows, cols >= 1");
                       t.n = m.rows * m.cols;
                       for (std::size_t r = 0; r < m.rows; ++r)
                           for (std::size_t c = 0; c < m.cols; ++c) {
                               Vertex id = r * m.cols + c;
                               if (c + 1 < m.cols) t.pairs.emplace_back(id, id + 1);
                               if (r + 1 < m.rows) t.pairs.emplace_back(id, id + m.cols);
                           }
                   },
                   [&](const Complete& m) {
                       require(m.n >= 1, "n >= 1");
                       t.n = m.n;
                       add_clique(t, 0, m.n);
                   },
                   [&](const Path& m) {
                       require(m.n >= 1, "n >= 1");
                       t.n = m.n;
                       for (std::size_t i = 0; i + 1 < m.n; ++i) t.pairs.emplace_back(i, i + 1);
                   },
                   [&](const Cycle& m) {
                       require(m.n >= 3, "cycle needs n >= 3");
                       t.n = m.n;
                       for (std::size_t i = 0; i + 1 < m.n; ++i) t.pairs.emplace_back(i, i + 1);
                       t.pairs.emplace_back(0, m.n - 1);
                   },
                   [&](const Dumbbell& m) {
                       require(m.clique_size >= 1 && m.path_len >= 1,
                               "clique_size, path_len >= 1");
                       const std::size_t s = m.clique_size;
                       t.n = 2 * s + m.path_len - 1;
                       add_clique(t, 0, s);
                       add_clique(t, s, s);
                       // Path from s-1 through the extra vertices 2s.. to s.
                       Vertex prev = s - 1;
                       for (std::size_t i = 0; i + 1 < m.path_len; ++i) {
                           Vertex next = 2 * s + i;
                           t.pairs.emplace_back(prev, next);
                           prev = next;
                       }
                       t.pairs.emplace_back(prev, s);
                   },
               },
               model);
    return t;
}

}  // namespace

WeightedGraph generate(const GeneratorSpec& spec) {
    Rng rng(derive_seed(spec.seed, 0x67656e));
    Topology topo = build(spec.model, rng);
    Rng wrng(derive_seed(spec.seed, 0x77676874));
    auto draw = [&]() {
        return std::visit(overloaded{
                              [](const UnitWeights&) { return 1.0; },
                              [&](const UniformWeights& d) {
                                  require(d.lo > 0.0 && d.lo <= d.hi, "0 < lo <= hi");
                                  return wrng.uniform(d.lo, d.hi);
                              },
                              [&](const LogUniformWeights& d) {
                                  require(d.lo > 0.0 && d.lo <= d.hi, "0 < lo <= hi");
                                  return std::exp(wrng.uniform(std::log(d.lo), std::log(d.hi)));
                              },
                          },
                          spec.weights);
    };
    std::vector<Edge> edges;
    edges.reserve(topo.pairs.size());
    for (auto [u, v] : topo.pairs) edges.push_back({u, v, draw()});
    return WeightedGraph::from_edges(topo.n, std::move(edges));
}

std::string describe(const GraphModel& model) {
    std::ostringstream ss;
    std::visit(overloaded{
                   [&](const ErdosRenyi& m) {
                       ss << "erdos-renyi(" << m.n << ", " << format_double(m.p) << ")";
                   },
                   [&](const Grid2d& m) { ss << "grid2d(" << m.rows << ", " << m.cols << ")"; },
                   [&](const Complete& m) { ss << "complete(" << m.n << ")"; },
                   [&](const Path& m) { ss << "path(" << m.n << ")"; },
                   [&](const Cycle& m) { ss << "cycle(" << m.n << ")"; },
                   [&](const Dumbbell& m) {
                       ss << "dumbbell(" << m.clique_size << ", " << m.path_len << ")";
                   },
               },
               model);
    return ss.str();
}

}  // namespace sps
