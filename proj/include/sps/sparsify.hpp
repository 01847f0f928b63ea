#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "sps/graph.hpp"
#include "sps/laplacian.hpp"
#include "sps/spanner.hpp"

namespace sps {

struct SampleConfig {
    double epsilon = 1.0;
    double bundle_constant = 24.0;
    double keep_probability = 0.25;
    double weight_multiplier = 4.0;
    std::optional<unsigned> t_override;
    Seed seed = 0;
    SpannerAlgo spanner = SpannerAlgo::baswana_sen;
    unsigned threads = 1;

    /// Throws unless epsilon in (0, 1], keep_probability in (0, 1] and
    /// weight_multiplier == 1 / keep_probability.
    void validate() const;
};

/// ceil(bundle_constant * ceil(log2 n)^2 / eps^2), at least 1.
unsigned bundle_size_for(std::size_t n, double eps, double bundle_constant);

/// ceil(log2 rho) for rho >= 1.
unsigned sparsify_rounds(double rho);

struct RoundReport {
    unsigned round = 0;
    double epsilon = 0.0;
    unsigned t_used = 0;
    std::size_t t_eff = 0;
    std::size_t input_edges = 0;
    std::size_t bundle_edges = 0;
    std::size_t residual_edges = 0;
    std::size_t kept_edges = 0;
    std::size_t output_edges = 0;
    bool skipped = false;
    std::optional<SpectralBounds> bounds;  // output against input, when measured
};

struct SparsifyReport {
    double epsilon = 0.0;
    double rho = 1.0;
    std::vector<RoundReport> rounds;
    std::optional<SpectralBounds> overall;  // final output against G
};

/// One sampling round: keep a t-bundle spanner, keep every other edge
/// independently with probability keep_probability at weight
/// weight_multiplier * w. The coin for edge {u, v} is a pure function of
/// (seed, round, u, v). `round` also selects the bundle seed.
std::pair<WeightedGraph, RoundReport> parallel_sample(const WeightedGraph& g, double eps,
                                                      const SampleConfig& config,
                                                      unsigned round = 0);

/// ceil(log2 rho) sampling rounds at accuracy eps / ceil(log2 rho) each.
/// Once a round returns its input unchanged the remaining rounds are
/// recorded as skipped. With measure_spectral, per-round and overall
/// spectral bounds are computed densely.
std::pair<WeightedGraph, SparsifyReport> parallel_sparsify(const WeightedGraph& g, double eps,
                                                           double rho, const SampleConfig& config,
                                                           bool measure_spectral = false);

struct ConcentrationRow {
    unsigned t = 0;
    std::size_t seeds = 0;
    double q10 = 0.0;
    double median = 0.0;
    double q90 = 0.0;
    double max = 0.0;
    double failure_fraction = 0.0;  // share of seeds with deviation > eps
    double mean_alpha = 0.0;
    double mean_beta = 0.0;
};

/// Empirical distribution of max(1 - alpha, beta - 1) for one sampling
/// round at each bundle size in t_schedule, over num_seeds seeds.
std::vector<ConcentrationRow> concentration_experiment(const WeightedGraph& g, double eps,
                                                       const std::vector<unsigned>& t_schedule,
                                                       std::size_t num_seeds,
                                                       const SampleConfig& base);

/// Linear-interpolation quantile of an unsorted sample (q in [0, 1]).
double quantile(std::vector<double> values, double q);

}  // namespace sps
