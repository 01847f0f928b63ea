#pragma once

#include <Eigen/Dense>
#include <span>
#include <utility>

#include "sps/graph.hpp"

namespace sps {

/// Largest n for which the dense ground-truth routines run.
inline constexpr std::size_t kDefaultDenseLimit = 2000;

/// Eigenvalues at or below this fraction of the largest are treated as zero.
inline constexpr double kNullCutoff = 1e-10;

/// Dense Laplacian of a graph: L(i, j) = -w_ij, L(i, i) = weighted degree.
/// Rows sum to zero exactly (the diagonal is the exact negated row sum).
class LaplacianMatrix {
public:
    explicit LaplacianMatrix(const WeightedGraph& g);

    std::size_t size() const { return static_cast<std::size_t>(m_.rows()); }
    const Eigen::MatrixXd& dense() const { return m_; }

    /// x^T L x computed edge-by-edge from the source graph.
    double quadratic_form(std::span<const double> x) const;

private:
    Eigen::MatrixXd m_;
    std::vector<Edge> edges_;
};

/// Eigendecomposition of L_G giving the pseudoinverse and the half
/// pseudoinverse on range(L_G). Built once and queried many times.
class LaplacianSpectrum {
public:
    explicit LaplacianSpectrum(const WeightedGraph& g,
                               std::size_t dense_limit = kDefaultDenseLimit);

    std::size_t size() const { return n_; }
    std::size_t rank() const { return static_cast<std::size_t>(range_.cols()); }
    double lambda_max() const { return lambda_max_; }
    /// Smallest eigenvalue above the null cutoff (0 for the edgeless graph).
    double lambda_min_nonzero() const { return lambda_min_nonzero_; }

    /// L^+ as a dense matrix.
    const Eigen::MatrixXd& pseudoinverse() const { return pinv_; }

    /// (chi_u - chi_v)^T L^+ (chi_u - chi_v). Throws DisconnectedError when
    /// u and v lie in different components; R(u, u) = 0.
    double effective_resistance(Vertex u, Vertex v) const;

    /// Extreme generalized eigenvalues of (L_H, L_G) on range(L_G).
    std::pair<double, double> pencil_extremes(const Eigen::MatrixXd& lh) const;

private:
    std::size_t n_;
    Components components_;
    Eigen::MatrixXd range_;      // orthonormal basis of range(L_G), n x r
    Eigen::VectorXd inv_sqrt_;   // lambda^{-1/2} for the range eigenvalues
    Eigen::MatrixXd pinv_;
    double lambda_max_ = 0.0;
    double lambda_min_nonzero_ = 0.0;
};

/// Effective resistance between u and v in G (dense pseudoinverse).
double effective_resistance(const WeightedGraph& g, Vertex u, Vertex v);

/// Resistance of resistors in parallel: (sum 1/r_i)^{-1}.
double parallel_combine(std::span<const double> resistances);

/// Tightest alpha, beta with alpha x^T L_G x <= x^T L_H x <= beta x^T L_G x
/// for x in range(L_G). An H that is disconnected where G is connected gives
/// alpha = 0.
struct SpectralBounds {
    double alpha = 0.0;
    double beta = 0.0;

    /// max(1 - alpha, beta - 1).
    double deviation() const;
};

/// Bounds of H against G. H must not join vertices that G leaves in
/// different components. Identical graphs give exactly (1, 1) with no
/// factorization; otherwise throws when n exceeds dense_limit.
SpectralBounds spectral_bounds(const WeightedGraph& g, const WeightedGraph& h,
                               std::size_t dense_limit = kDefaultDenseLimit);

/// Same, reusing a precomputed spectrum of G.
SpectralBounds spectral_bounds(const LaplacianSpectrum& g_spectrum, const WeightedGraph& h);

/// Min and max of x^T L_H x / x^T L_G x over random Gaussian vectors
/// projected orthogonal to the all-ones vector. Samples that fall in
/// null(L_G) are redrawn. Scales to large n (no factorization).
std::pair<double, double> rayleigh_probe(const WeightedGraph& g, const WeightedGraph& h,
                                         std::size_t num_samples, Seed seed);

}  // namespace sps
