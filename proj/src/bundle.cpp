#include "sps/bundle.hpp"

#include <algorithm>

#include "sps/random.hpp"

namespace sps {

namespace {
constexpr std::uint64_t kBundleLabel = 0x62756e646c65ULL;
}

Seed bundle_component_seed(Seed seed, unsigned i) { return derive_seed(seed, kBundleLabel, i); }

WeightedGraph BundleDecomposition::bundle() const {
    return disjoint_union(components, residual.num_vertices());
}

BundleDecomposition t_bundle(const WeightedGraph& g, unsigned t, Seed seed, SpannerAlgo algo,
                             unsigned threads) {
    if (t == 0) throw Error("t_bundle: t must be positive");
    const unsigned k = log_spanner_k(g.num_vertices());
    BundleDecomposition b{{}, g, t};
    for (unsigned i = 0; i < t && !b.residual.empty(); ++i) {
        WeightedGraph h = build_spanner(algo, b.residual, k, bundle_component_seed(seed, i), threads);
        b.residual = subtract(b.residual, h);
        b.components.push_back(std::move(h));
    }
    return b;
}

double bundle_resistance_bound(std::size_t n, std::size_t t_eff) {
    return 2.0 * ceil_log2(n) / static_cast<double>(t_eff);
}

BundleCertificate verify_bundle(const WeightedGraph& g, const BundleDecomposition& b,
                                std::size_t dense_limit, unsigned threads) {
    BundleCertificate cert;
    const std::size_t n = g.num_vertices();
    auto fail = [&](std::string msg) { cert.failures.push_back(std::move(msg)); };

    if (b.residual.num_vertices() != n) fail("residual has a different vertex count");
    for (std::size_t i = 0; i < b.components.size(); ++i)
        if (b.components[i].num_vertices() != n)
            fail("component " + std::to_string(i + 1) + " has a different vertex count");
    if (!cert.ok()) return cert;

    // Walk the construction: H_i must be a subgraph and a spanner of the
    // graph left after removing H_1..H_{i-1}.
    const unsigned k = log_spanner_k(n);
    WeightedGraph remaining = g;
    for (std::size_t i = 0; i < b.components.size(); ++i) {
        const WeightedGraph& h = b.components[i];
        const std::string name = "component " + std::to_string(i + 1);
        if (!is_subgraph(h, remaining)) {
            fail(name + " is not an edge subset of G minus earlier components");
            return cert;
        }
        try {
            const double s = max_stretch(remaining, h, threads);
            cert.component_stretch.push_back(s);
            if (!stretch_within(s, k))
                fail(name + " has stretch " + std::to_string(s) + " > " +
                     std::to_string(2 * k - 1));
        } catch (const DisconnectedError& e) {
            cert.component_stretch.push_back(-1.0);
            fail(name + " is not a spanner: " + e.what());
        }
        remaining = subtract(remaining, h);
    }
    if (!(remaining == b.residual)) {
        for (const Edge& e : b.residual.edges()) {
            auto idx = remaining.find(e.u, e.v);
            if (!idx) {
                fail("residual edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                     ") is in a component or not in G");
                break;
            }
        }
        fail("components plus residual do not reproduce G");
    }
    if (!cert.ok()) return cert;

    if (b.residual.empty()) {
        cert.resistance_checked = true;
        return cert;  // vacuous
    }
    if (b.t_eff() == 0) {
        fail("residual is non-empty but no components were built");
        return cert;
    }
    cert.bound = bundle_resistance_bound(n, b.t_eff());
    LaplacianSpectrum spectrum(g, dense_limit);
    for (const Edge& e : b.residual.edges()) {
        const double value = e.w * spectrum.effective_resistance(e.u, e.v);
        cert.residual_values.push_back({e, value});
        cert.max_value = std::max(cert.max_value, value);
        if (value > cert.bound * (1.0 + 1e-8))
            fail("residual edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                 ") has w_e R_e = " + std::to_string(value) + " > " + std::to_string(cert.bound));
    }
    cert.resistance_checked = true;
    return cert;
}

double edge_certificate(const LaplacianSpectrum& g_spectrum, const BundleDecomposition& b,
                        const Edge& e) {
    auto idx = b.residual.find(e.u, e.v);
    if (!idx) throw Error("edge_certificate: edge is not in the residual");
    const Edge& re = b.residual.edges()[*idx];
    return re.w * g_spectrum.effective_resistance(re.u, re.v);
}

double edge_certificate(const WeightedGraph& g, const BundleDecomposition& b, const Edge& e) {
    if (!b.residual.contains(e.u, e.v)) throw Error("edge_certificate: edge is not in the residual");
    return edge_certificate(LaplacianSpectrum(g), b, e);
}

double parallel_path_bound(const BundleDecomposition& b, const Edge& e) {
    if (b.components.empty()) throw Error("parallel_path_bound: no components");
    std::vector<double> path_resistance;
    for (const WeightedGraph& h : b.components) {
        Adjacency adj(h);
        auto path = shortest_path(h, adj, e.u, e.v);
        if (!path)
            throw DisconnectedError("parallel_path_bound: a component has no path for the edge");
        path_resistance.push_back(path->length);
    }
    return parallel_combine(path_resistance);
}

}  // namespace sps
