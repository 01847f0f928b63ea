#pragma once

#include <string>
#include <vector>

#include "sps/graph.hpp"
#include "sps/laplacian.hpp"
#include "sps/spanner.hpp"

namespace sps {

/// Edge-disjoint spanners H_1..H_t of G, each built on what the earlier
/// ones left over, plus the residual R = G - sum H_j.
struct BundleDecomposition {
    std::vector<WeightedGraph> components;
    WeightedGraph residual;
    unsigned t_requested = 0;

    /// Number of components actually built (construction stops once the
    /// residual is empty).
    std::size_t t_eff() const { return components.size(); }

    /// H = sum H_j.
    WeightedGraph bundle() const;
};

/// Seed of the i-th (0-based) bundle component.
Seed bundle_component_seed(Seed seed, unsigned i);

/// Iterated spanners with k = max(1, ceil(log2 n)). Component i uses
/// bundle_component_seed(seed, i).
BundleDecomposition t_bundle(const WeightedGraph& g, unsigned t, Seed seed,
                             SpannerAlgo algo = SpannerAlgo::baswana_sen, unsigned threads = 1);

/// Residual-edge resistance bound 2 ceil(log2 n) / t_eff.
double bundle_resistance_bound(std::size_t n, std::size_t t_eff);

struct ResidualEdgeValue {
    Edge edge;
    double value;  // w_e * R_e[G]
};

struct BundleCertificate {
    std::vector<std::string> failures;
    std::vector<double> component_stretch;  // max stretch of H_i over its input graph
    std::vector<ResidualEdgeValue> residual_values;
    double bound = 0.0;
    double max_value = 0.0;
    bool resistance_checked = false;

    bool ok() const { return failures.empty(); }
};

/// Checks the structural invariants (disjointness, exact decomposition,
/// per-step spanner stretch) and, when the structure is sound, that every
/// residual edge satisfies w_e R_e[G] <= bundle_resistance_bound. The
/// resistance check needs n <= dense_limit.
BundleCertificate verify_bundle(const WeightedGraph& g, const BundleDecomposition& b,
                                std::size_t dense_limit = kDefaultDenseLimit,
                                unsigned threads = 1);

/// w_e * R_e[G] for an edge of the residual.
double edge_certificate(const WeightedGraph& g, const BundleDecomposition& b, const Edge& e);
double edge_certificate(const LaplacianSpectrum& g_spectrum, const BundleDecomposition& b,
                        const Edge& e);

/// Upper bound on R_e[G] from one shortest path per component combined in
/// parallel. The components are edge-disjoint, so splitting a unit current
/// across the paths is a valid flow and the harmonic combination bounds the
/// effective resistance.
double parallel_path_bound(const BundleDecomposition& b, const Edge& e);

}  // namespace sps
