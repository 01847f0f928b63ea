#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sps/generators.hpp"
#include "sps/sparsify.hpp"

using namespace sps;

namespace {

SampleConfig with_t(unsigned t, Seed seed) {
    SampleConfig c;
    c.t_override = t;
    c.seed = seed;
    return c;
}

}  // namespace

TEST_SUITE("sparsify") {

TEST_CASE("config validation") {
    SampleConfig c;
    CHECK_NOTHROW(c.validate());
    c.epsilon = 0;
    CHECK_THROWS_AS(c.validate(), Error);
    c.epsilon = 0.5;
    c.weight_multiplier = 3;
    CHECK_THROWS_AS(c.validate(), Error);
    c.weight_multiplier = 4;
    c.t_override = 0;
    CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("bundle size and round count") {
    CHECK(bundle_size_for(256, 1.0, 24) == 24 * 64);
    CHECK(bundle_size_for(256, 0.5, 24) == 24 * 64 * 4);
    CHECK(bundle_size_for(1, 0.5, 24) == 1);
    CHECK(sparsify_rounds(1) == 0);
    CHECK(sparsify_rounds(2) == 1);
    CHECK(sparsify_rounds(3) == 2);
    CHECK(sparsify_rounds(8) == 3);
    CHECK(sparsify_rounds(9) == 4);
    CHECK_THROWS_AS(sparsify_rounds(0.5), Error);
}

TEST_CASE("degenerate regime returns G") {
    for (Seed s = 0; s < 3; ++s) {
        auto g = generate({ErdosRenyi{120, 0.2}, UniformWeights{1, 3}, s});
        SampleConfig c;
        c.seed = s;
        auto [h, rep] = parallel_sample(g, 0.5, c);
        CHECK(h == g);
        CHECK(rep.residual_edges == 0);
        auto sb = spectral_bounds(g, h);
        CHECK(sb.alpha == 1.0);
        CHECK(sb.beta == 1.0);
    }
    auto tree = generate({Path{30}});
    auto [h, rep] = parallel_sample(tree, 1.0, with_t(1, 0));
    CHECK(h == tree);
}

TEST_CASE("sampling keeps the bundle and reweights kept edges") {
    auto g = generate({ErdosRenyi{200, 0.3}, UnitWeights{}, 1});
    auto [h, rep] = parallel_sample(g, 1.0, with_t(4, 3));
    CHECK(rep.t_used == 4);
    CHECK(rep.input_edges == g.num_edges());
    CHECK(rep.output_edges == rep.bundle_edges + rep.kept_edges);
    CHECK(h.num_edges() == rep.output_edges);
    std::size_t reweighted = 0;
    for (const Edge& e : h.edges()) {
        const double w0 = g.weight(e.u, e.v);
        CHECK((e.w == w0 || e.w == 4 * w0));
        reweighted += e.w == 4 * w0;
    }
    CHECK(reweighted == rep.kept_edges);
    const double r = static_cast<double>(rep.residual_edges);
    CHECK(std::abs(static_cast<double>(rep.kept_edges) - r / 4) <= 5 * std::sqrt(r * 0.1875));
}

TEST_CASE("kept count envelope over seeds") {
    auto g = generate({ErdosRenyi{200, 0.3}, UnitWeights{}, 2});
    int inside = 0;
    for (Seed s = 0; s < 50; ++s) {
        auto [h, rep] = parallel_sample(g, 1.0, with_t(4, s));
        const double r = static_cast<double>(rep.residual_edges);
        inside += std::abs(static_cast<double>(rep.kept_edges) - r / 4) <= 5 * std::sqrt(r * 0.1875);
    }
    CHECK(inside == 50);
}

TEST_CASE("determinism and thread independence") {
    auto g = generate({ErdosRenyi{150, 0.2}, LogUniformWeights{0.1, 10}, 4});
    auto c = with_t(3, 17);
    auto [a, ra] = parallel_sample(g, 1.0, c);
    c.threads = 4;
    auto [b, rb] = parallel_sample(g, 1.0, c);
    CHECK(a == b);
    auto [x, rx] = parallel_sparsify(g, 1.0, 8, c);
    c.threads = 1;
    auto [y, ry] = parallel_sparsify(g, 1.0, 8, c);
    CHECK(x == y);
    c.seed = 18;
    auto [z, rz] = parallel_sample(g, 1.0, c);
    CHECK_FALSE(z == a);
}

TEST_CASE("iterated rounds") {
    auto g = generate({Complete{120}});
    SampleConfig c = with_t(4, 5);
    auto [same, r1] = parallel_sparsify(g, 0.5, 1, c);
    CHECK(same == g);
    CHECK(r1.rounds.empty());

    auto [one, r2] = parallel_sparsify(g, 0.5, 2, c);
    CHECK(r2.rounds.size() == 1);
    CHECK(r2.rounds[0].epsilon == 0.5);

    auto [h, rep] = parallel_sparsify(g, 0.5, 8, c, true);
    REQUIRE(rep.rounds.size() == 3);
    for (std::size_t i = 0; i + 1 < rep.rounds.size(); ++i)
        CHECK(rep.rounds[i].output_edges == rep.rounds[i + 1].input_edges);
    double lo = 1, hi = 1;
    for (const auto& r : rep.rounds) {
        CHECK(r.epsilon == doctest::Approx(0.5 / 3));
        if (r.skipped) continue;
        REQUIRE(r.bounds.has_value());
        lo *= r.bounds->alpha;
        hi *= r.bounds->beta;
    }
    REQUIRE(rep.overall.has_value());
    CHECK(rep.overall->alpha >= lo - 1e-8);
    CHECK(rep.overall->beta <= hi + 1e-8);
    CHECK(h.num_edges() < g.num_edges());
}

TEST_CASE("skipped rounds after a fixed point") {
    auto tree = generate({Path{40}});
    auto [h, rep] = parallel_sparsify(tree, 1.0, 16, with_t(1, 2));
    CHECK(h == tree);
    REQUIRE(rep.rounds.size() == 4);
    CHECK_FALSE(rep.rounds[0].skipped);
    for (std::size_t i = 1; i < 4; ++i) CHECK(rep.rounds[i].skipped);
}

TEST_CASE("unbiasedness of sampled weights") {
    auto g = generate({ErdosRenyi{40, 0.5}, UniformWeights{1, 2}, 6});
    const int seeds = 400;
    std::vector<double> mean(g.num_edges(), 0.0);
    for (int s = 0; s < seeds; ++s) {
        auto [h, rep] = parallel_sample(g, 1.0, with_t(1, s));
        for (std::size_t i = 0; i < g.num_edges(); ++i) {
            const Edge& e = g.edges()[i];
            if (h.contains(e.u, e.v)) mean[i] += h.weight(e.u, e.v) / seeds;
        }
    }
    for (std::size_t i = 0; i < g.num_edges(); ++i) {
        const double w = g.edges()[i].w;
        CHECK(std::abs(mean[i] - w) <= 5 * std::sqrt(3.0) * w / std::sqrt(double(seeds)));
    }
}

TEST_CASE("concentration table") {
    auto g = generate({ErdosRenyi{60, 0.5}, UnitWeights{}, 3});
    SampleConfig base;
    base.seed = 1;
    auto table = concentration_experiment(g, 0.5, {1, static_cast<unsigned>(g.num_edges())}, 5, base);
    REQUIRE(table.size() == 2);
    CHECK(table[1].max == 0.0);
    CHECK(table[1].median == 0.0);
    CHECK(table[0].median > 0.0);
    auto single = concentration_experiment(g, 0.5, {2}, 1, base);
    REQUIRE(single.size() == 1);
    CHECK(single[0].q10 == single[0].q90);
    CHECK(single[0].seeds == 1);
    CHECK_THROWS_AS(concentration_experiment(g, 0.5, {2}, 0, base), Error);
}

TEST_CASE("quantile") {
    CHECK(quantile({3, 1, 2}, 0.5) == 2.0);
    CHECK(quantile({1, 2, 3, 4}, 0.5) == 2.5);
    CHECK(quantile({5}, 0.9) == 5.0);
    CHECK(quantile({0, 10}, 0.1) == doctest::Approx(1.0));
}

}  // TEST_SUITE
