#include <doctest.h>

#include "oracles.hpp"
#include "sps/generators.hpp"
#include "sps/laplacian.hpp"
#include "sps/random.hpp"

using namespace sps;

TEST_SUITE("laplacian") {

TEST_CASE("small Laplacians") {
    Eigen::MatrixXd one(2, 2);
    one << 3, -3, -3, 3;
    CHECK(LaplacianMatrix(WeightedGraph::from_edges(2, {{0, 1, 3}})).dense() == one);
    CHECK(LaplacianMatrix(WeightedGraph(2)).dense() == Eigen::MatrixXd::Zero(2, 2));
    auto tri = LaplacianMatrix(generate({Complete{3}})).dense();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(tri(i, j) == (i == j ? 2.0 : -1.0));
}

TEST_CASE("quadratic form matches the dense matrix") {
    auto g = generate({ErdosRenyi{50, 0.2}, LogUniformWeights{0.1, 10}, 3});
    LaplacianMatrix l(g);
    CHECK((l.dense() - oracle::laplacian(g)).norm() == 0.0);
    CHECK(l.dense().rowwise().sum().cwiseAbs().maxCoeff() < 1e-12 * l.dense().cwiseAbs().maxCoeff());
    Rng rng(1);
    for (int rep = 0; rep < 5; ++rep) {
        std::vector<double> x(50);
        for (auto& xi : x) xi = rng.normal();
        Eigen::Map<Eigen::VectorXd> v(x.data(), 50);
        const double dense = v.dot(l.dense() * v);
        CHECK(l.quadratic_form(x) == doctest::Approx(dense).epsilon(1e-10));
    }
}

TEST_CASE("effective resistance closed forms") {
    CHECK(effective_resistance(generate({Path{4}}), 0, 3) == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(effective_resistance(WeightedGraph::from_edges(2, {{0, 1, 4}}), 0, 1) ==
          doctest::Approx(0.25).epsilon(1e-10));
    for (std::size_t n : {3, 5, 12}) {
        auto c = generate({Cycle{n}});
        const double expected = static_cast<double>(n - 1) / static_cast<double>(n);
        CHECK(effective_resistance(c, 0, 1) == doctest::Approx(expected).epsilon(1e-10));
        CHECK(oracle::resistance(oracle::pinv_connected(c), 0, 1) == doctest::Approx(expected).epsilon(1e-10));
    }
    CHECK(effective_resistance(generate({Complete{10}}), 2, 7) == doctest::Approx(0.2).epsilon(1e-10));
    CHECK(effective_resistance(generate({Path{4}}), 2, 2) == 0.0);
    CHECK_THROWS_AS(effective_resistance(WeightedGraph::from_edges(4, {{0, 1, 1}, {2, 3, 1}}), 0, 3),
                    DisconnectedError);
}

TEST_CASE("resistance matches the pseudoinverse oracle") {
    auto g = generate({ErdosRenyi{60, 0.15}, UniformWeights{0.5, 4}, 11});
    REQUIRE(oracle::connected(g));
    LaplacianSpectrum s(g);
    auto pinv = oracle::pinv_connected(g);
    for (const Edge& e : g.edges())
        CHECK(s.effective_resistance(e.u, e.v) ==
              doctest::Approx(oracle::resistance(pinv, e.u, e.v)).epsilon(1e-9));
}

TEST_CASE("edge leverage identities") {
    // Sum of w_e R_e is n minus the number of components; bridges have w_e R_e = 1.
    for (Seed seed = 0; seed < 5; ++seed) {
        auto g = generate({ErdosRenyi{40, 0.08}, LogUniformWeights{0.1, 10}, seed});
        LaplacianSpectrum s(g);
        double total = 0.0;
        for (const Edge& e : g.edges()) {
            const double lev = e.w * s.effective_resistance(e.u, e.v);
            CHECK(lev > 0.0);
            CHECK(lev <= 1.0 + 1e-9);
            total += lev;
        }
        const double expected = 40.0 - static_cast<double>(connected_components(g).count);
        CHECK(total == doctest::Approx(expected).epsilon(1e-6));
    }
    auto tree = WeightedGraph::from_edges(5, {{0, 1, 2}, {1, 2, 0.5}, {1, 3, 3}, {3, 4, 7}});
    LaplacianSpectrum ts(tree);
    for (const Edge& e : tree.edges())
        CHECK(e.w * ts.effective_resistance(e.u, e.v) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("Rayleigh monotonicity") {
    for (Seed seed = 0; seed < 5; ++seed) {
        auto g = generate({ErdosRenyi{30, 0.3}, UniformWeights{1, 3}, seed});
        std::vector<Edge> kept;
        for (const Edge& e : g.edges())
            if (coin({seed, e.u, e.v}) < 0.7) kept.push_back(e);
        auto h = WeightedGraph::from_edges(30, kept);
        LaplacianSpectrum sg(g), sh(h);
        auto hc = connected_components(h);
        for (Vertex u = 0; u < 30; ++u)
            for (Vertex v = u + 1; v < 30; ++v)
                if (hc.label[u] == hc.label[v])
                    CHECK(sg.effective_resistance(u, v) <= sh.effective_resistance(u, v) + 1e-9);
    }
}

TEST_CASE("parallel combine") {
    const double one[] = {2.5};
    const double two[] = {2, 2};
    const double three[] = {1, 2, 3};
    CHECK(parallel_combine(one) == 2.5);
    CHECK(parallel_combine(two) == doctest::Approx(1.0));
    CHECK(parallel_combine(three) == doctest::Approx(6.0 / 11.0));
    CHECK_THROWS_AS(parallel_combine(std::span<const double>{}), Error);
    const double bad[] = {1, 0};
    CHECK_THROWS_AS(parallel_combine(bad), Error);
}

TEST_CASE("spectral bounds") {
    auto g = generate({ErdosRenyi{40, 0.3}, UniformWeights{1, 2}, 4});
    REQUIRE(oracle::connected(g));
    auto id = spectral_bounds(g, g);
    CHECK(id.alpha == 1.0);
    CHECK(id.beta == 1.0);
    auto twice = spectral_bounds(g, scale(2, g));
    CHECK(twice.alpha == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(twice.beta == doctest::Approx(2.0).epsilon(1e-8));

    std::vector<Edge> half;
    for (const Edge& e : g.edges())
        if ((e.u + e.v) % 3 != 0) half.push_back(e);
    auto h = WeightedGraph::from_edges(40, half);
    auto sb = spectral_bounds(g, h);
    auto [lo, hi] = oracle::pencil(g, h);
    CHECK(sb.alpha == doctest::Approx(std::max(0.0, lo)).epsilon(1e-8).scale(1.0));
    CHECK(sb.beta == doctest::Approx(hi).epsilon(1e-8));
    CHECK(sb.beta <= 1.0 + 1e-9);

    // Adding edges never lowers alpha.
    auto more = add(h, WeightedGraph::from_edges(40, {{0, 1, 5.0}}));
    CHECK(spectral_bounds(g, more).alpha >= sb.alpha - 1e-12);

    CHECK_THROWS_AS(spectral_bounds(WeightedGraph::from_edges(4, {{0, 1, 1}, {2, 3, 1}}),
                                    WeightedGraph::from_edges(4, {{1, 2, 1}})),
                    Error);
    CHECK_THROWS_AS(spectral_bounds(g, h, 10), Error);
    CHECK(spectral_bounds(g, g, 10).alpha == 1.0);
}

TEST_CASE("disconnected H has alpha zero") {
    auto g = generate({Cycle{6}});
    auto h = WeightedGraph::from_edges(6, {{0, 1, 1}, {1, 2, 1}, {3, 4, 1}, {4, 5, 1}});
    CHECK(spectral_bounds(g, h).alpha == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("Rayleigh probe lies inside the exact bounds") {
    auto tri = generate({Complete{3}});
    auto doubled = add(tri, WeightedGraph::from_edges(3, {{0, 1, 1}, {1, 2, 2}, {0, 2, 0.5}}));
    auto sb = spectral_bounds(tri, doubled);
    auto [lo, hi] = rayleigh_probe(tri, doubled, 10000, 3);
    CHECK(lo >= sb.alpha - 1e-12);
    CHECK(hi <= sb.beta + 1e-12);

    auto g = generate({ErdosRenyi{100, 0.1}, UniformWeights{1, 2}, 9});
    auto [one_lo, one_hi] = rayleigh_probe(g, g, 50, 1);
    CHECK(one_lo == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(one_hi == doctest::Approx(1.0).epsilon(1e-12));
    auto [three_lo, three_hi] = rayleigh_probe(g, scale(3, g), 50, 1);
    CHECK(three_lo == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(three_hi == doctest::Approx(3.0).epsilon(1e-12));

    for (Seed seed = 0; seed < 3; ++seed) {
        auto big = generate({ErdosRenyi{100, 0.1}, UniformWeights{1, 2}, seed + 20});
        std::vector<Edge> some;
        for (const Edge& e : big.edges())
            if (coin({seed, e.u, e.v}) < 0.8) some.push_back(e);
        auto h = add(WeightedGraph::from_edges(100, some), scale(0.1, big));
        auto exact = spectral_bounds(big, h);
        auto [plo, phi] = rayleigh_probe(big, h, 200, seed);
        CHECK(plo >= exact.alpha - 1e-9);
        CHECK(phi <= exact.beta + 1e-9);
    }
}

}  // TEST_SUITE
