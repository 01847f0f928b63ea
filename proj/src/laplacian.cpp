#include "sps/laplacian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sps/random.hpp"

namespace sps {

LaplacianMatrix::LaplacianMatrix(const WeightedGraph& g)
    : m_(Eigen::MatrixXd::Zero(g.num_vertices(), g.num_vertices())),
      edges_(g.edges().begin(), g.edges().end()) {
    for (const Edge& e : edges_) {
        m_(e.u, e.v) = -e.w;
        m_(e.v, e.u) = -e.w;
    }
    const auto n = m_.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
        double s = 0.0;
        for (Eigen::Index j = 0; j < n; ++j)
            if (j != i) s -= m_(i, j);
        m_(i, i) = s;
    }
}

double LaplacianMatrix::quadratic_form(std::span<const double> x) const {
    if (x.size() != size()) throw Error("quadratic_form: dimension mismatch");
    double q = 0.0;
    for (const Edge& e : edges_) {
        const double d = x[e.u] - x[e.v];
        q += e.w * d * d;
    }
    return q;
}

LaplacianSpectrum::LaplacianSpectrum(const WeightedGraph& g, std::size_t dense_limit)
    : n_(g.num_vertices()), components_(connected_components(g)) {
    if (n_ > dense_limit)
        throw Error("n = " + std::to_string(n_) + " exceeds the dense limit " +
                    std::to_string(dense_limit) + "; use rayleigh_probe for an estimate");
    LaplacianMatrix lap(g);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(lap.dense());
    if (eig.info() != Eigen::Success) throw Error("Laplacian eigendecomposition failed");
    const auto& values = eig.eigenvalues();
    lambda_max_ = std::max(0.0, values(values.size() - 1));
    const double cutoff = kNullCutoff * lambda_max_;
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < values.size(); ++i)
        if (lambda_max_ > 0.0 && values(i) > cutoff) keep.push_back(i);
    range_.resize(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(keep.size()));
    inv_sqrt_.resize(static_cast<Eigen::Index>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c) {
        range_.col(c) = eig.eigenvectors().col(keep[c]);
        inv_sqrt_(c) = 1.0 / std::sqrt(values(keep[c]));
    }
    lambda_min_nonzero_ = keep.empty() ? 0.0 : values(keep.front());
    Eigen::MatrixXd scaled = range_ * inv_sqrt_.asDiagonal();
    pinv_ = scaled * scaled.transpose();
}

double LaplacianSpectrum::effective_resistance(Vertex u, Vertex v) const {
    if (u >= n_ || v >= n_) throw Error("effective_resistance: vertex out of range");
    if (u == v) return 0.0;
    if (components_.label[u] != components_.label[v])
        throw DisconnectedError("infinite resistance: vertices " + std::to_string(u) + " and " +
                                std::to_string(v) + " are disconnected");
    return pinv_(u, u) + pinv_(v, v) - 2.0 * pinv_(u, v);
}

std::pair<double, double> LaplacianSpectrum::pencil_extremes(const Eigen::MatrixXd& lh) const {
    if (range_.cols() == 0) return {1.0, 1.0};
    Eigen::MatrixXd b = range_ * inv_sqrt_.asDiagonal();
    Eigen::MatrixXd s = b.transpose() * (lh * b);
    s = 0.5 * (s + s.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success) throw Error("pencil eigendecomposition failed");
    const auto& ev = eig.eigenvalues();
    return {ev(0), ev(ev.size() - 1)};
}

double effective_resistance(const WeightedGraph& g, Vertex u, Vertex v) {
    return LaplacianSpectrum(g).effective_resistance(u, v);
}

double parallel_combine(std::span<const double> resistances) {
    if (resistances.empty()) throw Error("parallel_combine: empty list");
    double conductance = 0.0;
    for (double r : resistances) {
        if (!(r > 0.0)) throw Error("parallel_combine: resistances must be positive");
        conductance += 1.0 / r;
    }
    return 1.0 / conductance;
}

double SpectralBounds::deviation() const { return std::max(1.0 - alpha, beta - 1.0); }

namespace {

void check_component_refinement(const Components& gc, const WeightedGraph& h) {
    for (const Edge& e : h.edges())
        if (gc.label[e.u] != gc.label[e.v])
            throw Error("spectral_bounds: H joins vertices " + std::to_string(e.u) + " and " +
                        std::to_string(e.v) + " that are disconnected in G");
}

}  // namespace

SpectralBounds spectral_bounds(const LaplacianSpectrum& g_spectrum, const WeightedGraph& h) {
    if (h.num_vertices() != g_spectrum.size()) throw Error("spectral_bounds: vertex counts differ");
    LaplacianMatrix lh(h);
    auto [lo, hi] = g_spectrum.pencil_extremes(lh.dense());
    return {std::max(0.0, lo), std::max(0.0, hi)};
}

SpectralBounds spectral_bounds(const WeightedGraph& g, const WeightedGraph& h,
                               std::size_t dense_limit) {
    if (g.num_vertices() != h.num_vertices()) throw Error("spectral_bounds: vertex counts differ");
    check_component_refinement(connected_components(g), h);
    if (g == h) return {1.0, 1.0};
    return spectral_bounds(LaplacianSpectrum(g, dense_limit), h);
}

std::pair<double, double> rayleigh_probe(const WeightedGraph& g, const WeightedGraph& h,
                                         std::size_t num_samples, Seed seed) {
    const std::size_t n = g.num_vertices();
    if (h.num_vertices() != n) throw Error("rayleigh_probe: vertex counts differ");
    if (g.empty()) throw Error("rayleigh_probe: G has no edges");
    Rng rng(derive_seed(seed, 0x7261796c));
    std::vector<double> x(n);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    auto form = [&](const WeightedGraph& graph) {
        double q = 0.0;
        for (const Edge& e : graph.edges()) {
            const double d = x[e.u] - x[e.v];
            q += e.w * d * d;
        }
        return q;
    };
    double gscale = 0.0;
    for (const Edge& e : g.edges()) gscale = std::max(gscale, e.w);
    std::size_t drawn = 0;
    const std::size_t max_draws = 100 * num_samples + 100;
    for (std::size_t s = 0; s < num_samples;) {
        if (++drawn > max_draws) throw Error("rayleigh_probe: samples keep hitting null(L_G)");
        double mean = 0.0, norm2 = 0.0;
        for (auto& xi : x) {
            xi = rng.normal();
            mean += xi;
        }
        mean /= static_cast<double>(n);
        for (auto& xi : x) {
            xi -= mean;
            norm2 += xi * xi;
        }
        const double qg = form(g);
        if (!(qg > 1e-13 * gscale * norm2)) continue;
        const double r = form(h) / qg;
        lo = std::min(lo, r);
        hi = std::max(hi, r);
        ++s;
    }
    return {lo, hi};
}

}  // namespace sps
