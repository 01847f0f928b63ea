#pragma once

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sps/graph.hpp"
#include "sps/graph_io.hpp"
#include "sps/spanner.hpp"

namespace sps {

class SolverError : public Error {
public:
    using Error::Error;
};

class StagnationError : public SolverError {
public:
    StagnationError(const std::string& what, std::vector<double> history)
        : SolverError(what), history_(std::move(history)) {}
    const std::vector<double>& history() const noexcept { return history_; }

private:
    std::vector<double> history_;
};

/// M = D - A with D diagonal and A a nonnegative symmetric adjacency.
struct SddMatrix {
    std::vector<double> diagonal;
    WeightedGraph adjacency;

    /// Laplacian of g plus a nonnegative diagonal excess (empty = zero).
    static SddMatrix from_laplacian(const WeightedGraph& g, std::span<const double> excess = {});
    /// Diagonal entries become D, off-diagonal entries must be negative.
    static SddMatrix from_entries(const SymmetricEntries& m);
    SymmetricEntries to_entries() const;

    std::size_t size() const { return diagonal.size(); }
    std::size_t off_diagonal_edges() const { return adjacency.num_edges(); }
    std::vector<double> row_sums() const;
    /// D_i - sum_j A_ij.
    std::vector<double> excess() const;
    /// max_i sum_j A_ij / D_i (0 for a diagonal matrix).
    double dominance_ratio() const;
    std::vector<double> multiply(std::span<const double> x) const;
    Eigen::MatrixXd dense() const;
};

/// Throws unless D_i - sum_j A_ij >= -tol * D_i and D_i > 0 for every row.
void check_sdd(const SddMatrix& m, double tol = 1e-9, const std::string& where = "matrix");

/// D - A D^{-1} A split back into diagonal and (negated) off-diagonal part.
SddMatrix reduce(const SddMatrix& m);

struct SolverConfig {
    double tau = 1e-8;
    double rho = 2.0;
    std::optional<double> eps;              // per-level accuracy; default 1/(4 ceil(log2 kappa))
    std::optional<std::size_t> m_prime;     // default n ceil(log2 n)^3
    std::optional<std::size_t> presparsify_above;  // input edge count cutoff; default m_prime
    std::optional<unsigned> t_override;     // bundle size inside level sparsification
    double dominance_threshold = 0.5;
    double depth_factor = 2.0;
    std::size_t max_iterations = 500;
    std::size_t stagnation_window = 50;
    Seed seed = 0;
    SpannerAlgo spanner = SpannerAlgo::baswana_sen;
    unsigned threads = 1;

    void validate() const;
};

struct InverseChain {
    std::vector<SddMatrix> levels;
    std::vector<double> level_eps;
    std::vector<char> sparsified;
    double kappa_estimate = 1.0;
    double shift = 0.0;            // diagonal regularization on zero-excess components
    bool presparsified = false;
    std::size_t m_prime = 0;
    // Bottom level: fixed-count Jacobi when strongly dominant, dense LDL^T otherwise.
    std::size_t jacobi_iterations = 0;
    std::optional<Eigen::LDLT<Eigen::MatrixXd>> bottom_factor;

    std::size_t depth() const { return levels.size(); }
    std::vector<std::size_t> level_edges() const;
};

/// Chain M_1 .. M_d with M_{i+1} = reduce(M_i), sparsified when it has more
/// than m' off-diagonal edges, stopping when the dominance ratio drops to
/// the threshold or at depth ceil(c log2 kappa) + 2.
InverseChain build_chain(const SddMatrix& m, const SolverConfig& config = {});

/// One application of the chain preconditioner (a fixed linear operator).
std::vector<double> apply_chain(const InverseChain& chain, std::span<const double> b);

struct SolveResult {
    std::vector<double> x;
    std::size_t iterations = 0;
    std::vector<double> residual_history;  // relative residuals, index 0 = initial
    bool converged = false;
    std::size_t chain_depth = 0;
    double kappa_estimate = 0.0;
    std::size_t work = 0;  // nonzeros touched, a flop proxy
};

/// Preconditioned Richardson with the residual-minimizing step length.
/// Components of M with zero excess are Laplacians: b is projected onto
/// their range and x is returned with zero mean on each of them.
SolveResult solve(const SddMatrix& m, std::span<const double> b, const SolverConfig& config = {});
SolveResult solve(const SddMatrix& m, const InverseChain& chain, std::span<const double> b,
                  const SolverConfig& config = {});

}  // namespace sps
