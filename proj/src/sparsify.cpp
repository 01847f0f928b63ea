#include "sps/sparsify.hpp"

#include <algorithm>
#include <cmath>

#include "sps/bundle.hpp"
#include "sps/parallel.hpp"
#include "sps/random.hpp"

namespace sps {

namespace {
constexpr std::uint64_t kSampleLabel = 0x73616d706c65ULL;
constexpr std::uint64_t kRoundLabel = 0x726f756e64ULL;
constexpr std::uint64_t kExperimentLabel = 0x6578706572ULL;
}  // namespace

void SampleConfig::validate() const {
    if (!(epsilon > 0.0 && epsilon <= 1.0)) throw Error("epsilon must lie in (0, 1]");
    if (!(keep_probability > 0.0 && keep_probability <= 1.0))
        throw Error("keep probability must lie in (0, 1]");
    if (std::abs(weight_multiplier * keep_probability - 1.0) > 1e-12)
        throw Error("weight multiplier must equal 1 / keep probability");
    if (!(bundle_constant > 0.0)) throw Error("bundle constant must be positive");
    if (t_override && *t_override == 0) throw Error("t override must be positive");
}

unsigned bundle_size_for(std::size_t n, double eps, double bundle_constant) {
    const double lg = ceil_log2(n);
    const double t = std::ceil(bundle_constant * lg * lg / (eps * eps));
    return static_cast<unsigned>(std::max(1.0, std::min(t, 4.0e9)));
}

unsigned sparsify_rounds(double rho) {
    if (!(rho >= 1.0)) throw Error("rho must be at least 1");
    unsigned r = 0;
    double p = 1.0;
    while (p < rho) {
        p *= 2.0;
        ++r;
    }
    return r;
}

std::pair<WeightedGraph, RoundReport> parallel_sample(const WeightedGraph& g, double eps,
                                                      const SampleConfig& config,
                                                      unsigned round) {
    SampleConfig check = config;
    check.epsilon = eps;
    check.validate();
    RoundReport report;
    report.round = round;
    report.epsilon = eps;
    report.t_used = config.t_override ? *config.t_override
                                      : bundle_size_for(g.num_vertices(), eps,
                                                        config.bundle_constant);
    report.input_edges = g.num_edges();

    const Seed round_seed = derive_seed(config.seed, kRoundLabel, round);
    BundleDecomposition b =
        t_bundle(g, report.t_used, round_seed, config.spanner, config.threads);
    report.t_eff = b.t_eff();
    report.residual_edges = b.residual.num_edges();

    const auto residual = b.residual.edges();
    std::vector<char> keep(residual.size(), 0);
    parallel_for(residual.size(), config.threads, [&](std::size_t i) {
        const Edge& e = residual[i];
        keep[i] = coin({config.seed, kSampleLabel, round, e.u, e.v}) < config.keep_probability;
    });

    std::vector<Edge> out;
    out.reserve(g.num_edges());
    for (const auto& h : b.components) {
        report.bundle_edges += h.num_edges();
        out.insert(out.end(), h.edges().begin(), h.edges().end());
    }
    for (std::size_t i = 0; i < residual.size(); ++i)
        if (keep[i]) {
            Edge e = residual[i];
            e.w *= config.weight_multiplier;
            out.push_back(e);
            ++report.kept_edges;
        }
    WeightedGraph result = WeightedGraph::from_edges(g.num_vertices(), std::move(out));
    report.output_edges = result.num_edges();
    return {std::move(result), report};
}

std::pair<WeightedGraph, SparsifyReport> parallel_sparsify(const WeightedGraph& g, double eps,
                                                           double rho, const SampleConfig& config,
                                                           bool measure_spectral) {
    SparsifyReport report;
    report.epsilon = eps;
    report.rho = rho;
    const unsigned rounds = sparsify_rounds(rho);
    WeightedGraph current = g;
    bool settled = false;
    for (unsigned i = 1; i <= rounds; ++i) {
        const double round_eps = eps / rounds;
        if (settled) {
            RoundReport skipped;
            skipped.round = i;
            skipped.epsilon = round_eps;
            skipped.input_edges = skipped.output_edges = current.num_edges();
            skipped.skipped = true;
            report.rounds.push_back(skipped);
            continue;
        }
        auto [next, round_report] = parallel_sample(current, round_eps, config, i);
        if (measure_spectral) round_report.bounds = spectral_bounds(current, next);
        settled = next == current;
        report.rounds.push_back(round_report);
        current = std::move(next);
    }
    if (measure_spectral) report.overall = spectral_bounds(g, current);
    return {std::move(current), std::move(report)};
}

double quantile(std::vector<double> values, double q) {
    if (values.empty()) throw Error("quantile of an empty sample");
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(values.size() - 1, lo + 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::vector<ConcentrationRow> concentration_experiment(const WeightedGraph& g, double eps,
                                                       const std::vector<unsigned>& t_schedule,
                                                       std::size_t num_seeds,
                                                       const SampleConfig& base) {
    if (num_seeds == 0) throw Error("concentration_experiment: need at least one seed");
    LaplacianSpectrum spectrum(g);
    std::vector<ConcentrationRow> table;
    for (unsigned t : t_schedule) {
        ConcentrationRow row;
        row.t = t;
        row.seeds = num_seeds;
        std::vector<double> deviations;
        std::size_t failures = 0;
        for (std::size_t s = 0; s < num_seeds; ++s) {
            SampleConfig cfg = base;
            cfg.t_override = t;
            cfg.seed = derive_seed(base.seed, kExperimentLabel, s);
            auto [h, rep] = parallel_sample(g, eps, cfg);
            const SpectralBounds sb = h == g ? SpectralBounds{1.0, 1.0} : spectral_bounds(spectrum, h);
            const double dev = sb.deviation();
            deviations.push_back(dev);
            if (dev > eps) ++failures;
            row.mean_alpha += sb.alpha;
            row.mean_beta += sb.beta;
        }
        row.mean_alpha /= static_cast<double>(num_seeds);
        row.mean_beta /= static_cast<double>(num_seeds);
        row.q10 = quantile(deviations, 0.1);
        row.median = quantile(deviations, 0.5);
        row.q90 = quantile(deviations, 0.9);
        row.max = *std::max_element(deviations.begin(), deviations.end());
        row.failure_fraction = static_cast<double>(failures) / static_cast<double>(num_seeds);
        table.push_back(row);
    }
    return table;
}

}  // namespace sps
