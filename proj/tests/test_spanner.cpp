#include <doctest.h>

#include "oracles.hpp"
#include "sps/generators.hpp"
#include "sps/random.hpp"
#include "sps/spanner.hpp"

using namespace sps;

namespace {

WeightedGraph random_tree(std::size_t n, Seed seed) {
    Rng rng(seed);
    std::vector<Edge> edges;
    for (Vertex v = 1; v < n; ++v) {
        const auto parent = static_cast<Vertex>(rng.next() % v);
        edges.push_back({parent, v, rng.uniform(0.1, 10.0)});
    }
    return WeightedGraph::from_edges(n, edges);
}

}  // namespace

TEST_SUITE("spanner") {

TEST_CASE("stretch by hand") {
    auto g = WeightedGraph::from_edges(3, {{0, 1, 1}, {0, 2, 1}, {1, 2, 2}});
    auto h = WeightedGraph::from_edges(3, {{0, 1, 1}, {0, 2, 1}});
    CHECK(stretch(g, h, {1, 2, 2}) == doctest::Approx(4.0));
    CHECK(stretch(g, g, {1, 2, 2}) <= 1.0);
    auto path = generate({Path{6}});
    for (const Edge& e : path.edges()) CHECK(stretch(path, path, e) == 1.0);
    CHECK_THROWS_AS(stretch(path, WeightedGraph(6), path.edges()[0]), DisconnectedError);
}

TEST_CASE("max stretch") {
    auto c8 = generate({Cycle{8}});
    CHECK(max_stretch(c8, subtract(c8, WeightedGraph::from_edges(8, {{0, 7, 1}}))) == doctest::Approx(7.0));
    auto g = generate({ErdosRenyi{50, 0.2}, UniformWeights{1, 5}, 3});
    CHECK(max_stretch(g, g) <= 1.0);
    auto h = greedy_spanner(g, 2);
    CHECK(max_stretch(g, h) == doctest::Approx(oracle::max_stretch(g, h)).epsilon(1e-12));
    CHECK(max_stretch(g, h, 3) == max_stretch(g, h, 1));
}

TEST_CASE("greedy examples") {
    auto tree = random_tree(40, 2);
    CHECK(greedy_spanner(tree, 3) == tree);
    auto k6 = generate({Complete{6}});
    CHECK(greedy_spanner(k6, 1) == k6);
    auto c16 = generate({Cycle{16}});
    CHECK(greedy_spanner(c16, 2) == c16);
    auto k20 = generate({Complete{20}});
    CHECK(greedy_spanner(k20, 2).num_edges() < k20.num_edges());
}

TEST_CASE("Baswana-Sen examples") {
    for (Seed s = 0; s < 5; ++s) {
        auto tree = random_tree(60, s);
        CHECK(baswana_sen_spanner(tree, 3, s) == tree);
        CHECK(baswana_sen_spanner(tree, 1, s) == tree);
    }
    auto g = generate({ErdosRenyi{256, 0.1}, UnitWeights{}, 1});
    const unsigned k = log_spanner_k(256);
    CHECK(k == 8);
    auto h = baswana_sen_spanner(g, k, 42);
    CHECK(is_subgraph(h, g));
    CHECK(max_stretch(g, h) <= 15.0);
    CHECK(baswana_sen_spanner(g, k, 42) == h);
    CHECK(baswana_sen_spanner(g, 1, 42) == g);
}

TEST_CASE("stretch certificate over random cases") {
    for (Seed s = 0; s < 24; ++s) {
        const std::size_t n = 20 + 7 * s;
        auto g = generate({ErdosRenyi{n, 0.15}, LogUniformWeights{0.05, 20.0}, s});
        for (unsigned k : {1u, 2u, 3u, log_spanner_k(n)}) {
            auto bs = baswana_sen_spanner(g, k, s * 31 + k);
            auto gr = greedy_spanner(g, k);
            CHECK(is_subgraph(bs, g));
            CHECK(is_subgraph(gr, g));
            CHECK(oracle::max_stretch(g, bs) <= (2.0 * k - 1) * (1 + 1e-9));
            CHECK(oracle::max_stretch(g, gr) <= (2.0 * k - 1) * (1 + 1e-9));
        }
    }
}

TEST_CASE("disconnected inputs are spanned per component") {
    auto a = generate({ErdosRenyi{30, 0.3}, UnitWeights{}, 1});
    std::vector<Edge> edges(a.edges().begin(), a.edges().end());
    auto b = generate({Complete{10}, UniformWeights{1, 2}, 2});
    for (const Edge& e : b.edges()) edges.push_back({e.u + 30, e.v + 30, e.w});
    auto g = WeightedGraph::from_edges(40, edges);
    auto h = baswana_sen_spanner(g, 3, 5);
    CHECK(max_stretch(g, h) <= 5.0 + 1e-9);
}

TEST_CASE("order independence under threads") {
    auto g = generate({ErdosRenyi{300, 0.05}, UniformWeights{0.5, 2}, 8});
    auto one = baswana_sen_spanner(g, 4, 77, 1);
    CHECK(baswana_sen_spanner(g, 4, 77, 2) == one);
    CHECK(baswana_sen_spanner(g, 4, 77, 4) == one);
}

TEST_CASE("size sanity") {
    const std::size_t n = 512;
    const unsigned k = log_spanner_k(n);
    double total = 0.0;
    for (Seed s = 0; s < 20; ++s) {
        auto g = generate({ErdosRenyi{n, 0.05}, UnitWeights{}, 1000 + s});
        total += static_cast<double>(baswana_sen_spanner(g, k, s).num_edges());
    }
    CHECK(total / 20.0 <= 4.0 * n * k);
}

TEST_CASE("cluster sampling") {
    CHECK(cluster_sample_probability(256, 8) == doctest::Approx(0.5));
    CHECK(cluster_sample_probability(100, 1) == doctest::Approx(0.01));
    CHECK(cluster_sampled(1, 2, 3, 0.5) == cluster_sampled(1, 2, 3, 0.5));
    int hits = 0;
    for (Vertex c = 0; c < 10000; ++c) hits += cluster_sampled(9, 1, c, 0.3);
    CHECK(hits == doctest::Approx(3000).epsilon(0.05));
}

TEST_CASE("algorithm names") {
    CHECK(parse_spanner_algo("greedy") == SpannerAlgo::greedy);
    CHECK(parse_spanner_algo("baswana-sen") == SpannerAlgo::baswana_sen);
    CHECK(to_string(SpannerAlgo::baswana_sen) == "baswana-sen");
    CHECK_THROWS_AS(parse_spanner_algo("bs"), Error);
}

}  // TEST_SUITE
