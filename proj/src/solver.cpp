#include "sps/solver.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sps/laplacian.hpp"
#include "sps/random.hpp"
#include "sps/sparsify.hpp"

namespace sps {

namespace {

constexpr std::uint64_t kLevelLabel = 0x6c6576656cULL;
constexpr double kJacobiTarget = 1e-13;
constexpr double kJacobiMaxRatio = 0.9;

void adjacency_multiply(const WeightedGraph& a, std::span<const double> x, std::vector<double>& y) {
    y.assign(x.size(), 0.0);
    for (const Edge& e : a.edges()) {
        y[e.u] += e.w * x[e.v];
        y[e.v] += e.w * x[e.u];
    }
}

double dot(std::span<const double> a, std::span<const double> b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

/// Vertex sets of the components of M whose excess is zero.
std::vector<std::vector<Vertex>> zero_excess_components(const SddMatrix& m) {
    const Components comps = connected_components(m.adjacency);
    const auto excess = m.excess();
    std::vector<double> total(comps.count, 0.0), scale(comps.count, 0.0);
    for (Vertex v = 0; v < m.size(); ++v) {
        total[comps.label[v]] += std::max(0.0, excess[v]);
        scale[comps.label[v]] += m.diagonal[v];
    }
    std::vector<std::vector<Vertex>> out(comps.count);
    for (Vertex v = 0; v < m.size(); ++v)
        if (total[comps.label[v]] <= 1e-12 * scale[comps.label[v]]) out[comps.label[v]].push_back(v);
    std::erase_if(out, [](const auto& c) { return c.empty(); });
    return out;
}

void project_out_means(std::vector<double>& x, const std::vector<std::vector<Vertex>>& groups) {
    for (const auto& g : groups) {
        double mean = 0.0;
        for (Vertex v : g) mean += x[v];
        mean /= static_cast<double>(g.size());
        for (Vertex v : g) x[v] -= mean;
    }
}

std::vector<double> bottom_solve(const InverseChain& chain, std::span<const double> b) {
    const SddMatrix& m = chain.levels.back();
    const std::size_t n = m.size();
    if (chain.bottom_factor) {
        Eigen::Map<const Eigen::VectorXd> rhs(b.data(), static_cast<Eigen::Index>(n));
        Eigen::VectorXd sol = chain.bottom_factor->solve(rhs);
        return {sol.data(), sol.data() + n};
    }
    std::vector<double> x(n), ax;
    for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / m.diagonal[i];
    for (std::size_t it = 0; it < chain.jacobi_iterations; ++it) {
        adjacency_multiply(m.adjacency, x, ax);
        for (std::size_t i = 0; i < n; ++i) x[i] = (b[i] + ax[i]) / m.diagonal[i];
    }
    return x;
}

std::vector<double> apply_level(const InverseChain& chain, std::size_t level,
                                std::span<const double> b) {
    if (level + 1 == chain.levels.size()) return bottom_solve(chain, b);
    const SddMatrix& m = chain.levels[level];
    const std::size_t n = m.size();
    std::vector<double> u(n), tmp;
    for (std::size_t i = 0; i < n; ++i) u[i] = b[i] / m.diagonal[i];
    adjacency_multiply(m.adjacency, u, tmp);
    for (std::size_t i = 0; i < n; ++i) tmp[i] += b[i];
    std::vector<double> z = apply_level(chain, level + 1, tmp);
    adjacency_multiply(m.adjacency, z, tmp);
    for (std::size_t i = 0; i < n; ++i) z[i] = 0.5 * (u[i] + z[i] + tmp[i] / m.diagonal[i]);
    return z;
}

SddMatrix sparsify_level(const SddMatrix& m, double eps, std::size_t level,
                         const SolverConfig& config) {
    SampleConfig sc;
    sc.epsilon = eps;
    sc.t_override = config.t_override;
    sc.seed = derive_seed(config.seed, kLevelLabel, level);
    sc.spanner = config.spanner;
    sc.threads = config.threads;
    auto excess = m.excess();
    auto [h, report] = parallel_sparsify(m.adjacency, eps, config.rho, sc);
    SddMatrix out{std::move(excess), std::move(h)};
    const auto sums = out.row_sums();
    for (std::size_t i = 0; i < out.size(); ++i)
        out.diagonal[i] = std::max(0.0, out.diagonal[i]) + sums[i];
    return out;
}

std::size_t application_work(const InverseChain& chain) {
    std::size_t work = 0;
    for (std::size_t i = 0; i + 1 < chain.levels.size(); ++i)
        work += 4 * chain.levels[i].off_diagonal_edges() + 3 * chain.levels[i].size();
    const SddMatrix& bottom = chain.levels.back();
    if (chain.bottom_factor)
        work += bottom.size() * bottom.size();
    else
        work += (chain.jacobi_iterations + 1) * (2 * bottom.off_diagonal_edges() + bottom.size());
    return work;
}

}  // namespace

SddMatrix SddMatrix::from_laplacian(const WeightedGraph& g, std::span<const double> excess) {
    if (!excess.empty() && excess.size() != g.num_vertices())
        throw Error("from_laplacian: excess has the wrong length");
    SddMatrix m{std::vector<double>(g.num_vertices(), 0.0), g};
    for (const Edge& e : g.edges()) {
        m.diagonal[e.u] += e.w;
        m.diagonal[e.v] += e.w;
    }
    for (std::size_t i = 0; i < excess.size(); ++i) {
        if (!(excess[i] >= 0.0)) throw Error("from_laplacian: excess must be nonnegative");
        m.diagonal[i] += excess[i];
    }
    return m;
}

SddMatrix SddMatrix::from_entries(const SymmetricEntries& entries) {
    std::vector<double> d(entries.n, 0.0);
    std::vector<Edge> edges;
    for (const auto& e : entries.entries) {
        if (e.row == e.col) {
            d[e.row] += e.value;
        } else {
            if (!(e.value < 0.0))
                throw Error("matrix has a nonnegative off-diagonal entry at (" +
                            std::to_string(e.row + 1) + ", " + std::to_string(e.col + 1) +
                            "); only M = D - A with A >= 0 is supported");
            edges.push_back({static_cast<Vertex>(e.row), static_cast<Vertex>(e.col), -e.value});
        }
    }
    return {std::move(d), WeightedGraph::from_edges(entries.n, std::move(edges), Duplicates::merge)};
}

SymmetricEntries SddMatrix::to_entries() const {
    SymmetricEntries out;
    out.n = size();
    for (std::size_t i = 0; i < size(); ++i) out.entries.push_back({i, i, diagonal[i]});
    for (const Edge& e : adjacency.edges()) out.entries.push_back({e.v, e.u, -e.w});
    return out;
}

std::vector<double> SddMatrix::row_sums() const {
    std::vector<double> s(size(), 0.0);
    for (const Edge& e : adjacency.edges()) {
        s[e.u] += e.w;
        s[e.v] += e.w;
    }
    return s;
}

std::vector<double> SddMatrix::excess() const {
    auto s = row_sums();
    for (std::size_t i = 0; i < size(); ++i) s[i] = diagonal[i] - s[i];
    return s;
}

double SddMatrix::dominance_ratio() const {
    const auto s = row_sums();
    double r = 0.0;
    for (std::size_t i = 0; i < size(); ++i)
        if (s[i] > 0.0) r = std::max(r, s[i] / diagonal[i]);
    return r;
}

std::vector<double> SddMatrix::multiply(std::span<const double> x) const {
    if (x.size() != size()) throw Error("multiply: dimension mismatch");
    std::vector<double> y;
    adjacency_multiply(adjacency, x, y);
    for (std::size_t i = 0; i < size(); ++i) y[i] = diagonal[i] * x[i] - y[i];
    return y;
}

Eigen::MatrixXd SddMatrix::dense() const {
    const auto n = static_cast<Eigen::Index>(size());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) m(i, i) = diagonal[i];
    for (const Edge& e : adjacency.edges()) {
        m(e.u, e.v) -= e.w;
        m(e.v, e.u) -= e.w;
    }
    return m;
}

void check_sdd(const SddMatrix& m, double tol, const std::string& where) {
    if (m.adjacency.num_vertices() != m.size())
        throw SolverError(where + ": diagonal and adjacency sizes differ");
    const auto excess = m.excess();
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (!(m.diagonal[i] > 0.0))
            throw SolverError(where + ": diagonal entry " + std::to_string(i) + " is not positive");
        if (excess[i] < -tol * m.diagonal[i])
            throw SolverError(where + ": row " + std::to_string(i) + " is not diagonally dominant");
    }
}

SddMatrix reduce(const SddMatrix& m) {
    const std::size_t n = m.size();
    for (std::size_t i = 0; i < n; ++i)
        if (!(m.diagonal[i] > 0.0))
            throw SolverError("reduce: diagonal entry " + std::to_string(i) + " is not positive");
    Adjacency adj(m.adjacency);
    const auto edges = m.adjacency.edges();
    SddMatrix out{m.diagonal, WeightedGraph(n)};
    std::vector<double> acc(n, 0.0);
    std::vector<Vertex> touched;
    std::vector<Edge> fill;
    for (Vertex i = 0; i < n; ++i) {
        touched.clear();
        for (const auto& [k, ik] : adj.neighbors(i)) {
            const double a_ik = edges[ik].w / m.diagonal[k];
            for (const auto& [j, kj] : adj.neighbors(k)) {
                if (j < i) continue;
                if (acc[j] == 0.0) touched.push_back(j);
                acc[j] += a_ik * edges[kj].w;
            }
        }
        for (Vertex j : touched) {
            if (j == i)
                out.diagonal[i] -= acc[j];
            else
                fill.push_back({i, j, acc[j]});
            acc[j] = 0.0;
        }
    }
    out.adjacency = WeightedGraph::from_edges(n, std::move(fill));
    return out;
}

void SolverConfig::validate() const {
    if (!(tau > 0.0)) throw Error("tau must be positive");
    if (!(rho >= 1.0)) throw Error("rho must be at least 1");
    if (eps && !(*eps > 0.0 && *eps < 1.0)) throw Error("eps must lie in (0, 1)");
    if (!(dominance_threshold > 0.0 && dominance_threshold < 1.0))
        throw Error("dominance threshold must lie in (0, 1)");
    if (!(depth_factor > 0.0)) throw Error("depth factor must be positive");
    if (stagnation_window == 0) throw Error("stagnation window must be positive");
}

std::vector<std::size_t> InverseChain::level_edges() const {
    std::vector<std::size_t> out;
    for (const auto& l : levels) out.push_back(l.off_diagonal_edges());
    return out;
}

InverseChain build_chain(const SddMatrix& m, const SolverConfig& config) {
    config.validate();
    check_sdd(m, 1e-9, "input");
    const std::size_t n = m.size();
    InverseChain chain;

    const auto flat = zero_excess_components(m);
    double lambda_max = 0.0, lambda_min = 0.0;
    if (n <= kDefaultDenseLimit) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m.dense(), Eigen::EigenvaluesOnly);
        if (eig.info() != Eigen::Success) throw SolverError("eigenvalue estimate failed");
        const auto& ev = eig.eigenvalues();
        lambda_max = ev(ev.size() - 1);
        for (Eigen::Index i = 0; i < ev.size(); ++i)
            if (ev(i) > kNullCutoff * lambda_max) {
                lambda_min = ev(i);
                break;
            }
    } else {
        double wmin = std::numeric_limits<double>::infinity(), min_excess = wmin;
        for (const Edge& e : m.adjacency.edges()) wmin = std::min(wmin, e.w);
        for (double x : m.excess())
            if (x > 0.0) min_excess = std::min(min_excess, x);
        lambda_max = 2.0 * *std::max_element(m.diagonal.begin(), m.diagonal.end());
        lambda_min = std::min(min_excess, wmin / (static_cast<double>(n) * n));
    }
    chain.kappa_estimate = lambda_min > 0.0 ? std::max(2.0, lambda_max / lambda_min) : 2.0;
    if (!flat.empty()) chain.shift = 1e-2 * lambda_min;

    const unsigned lg = std::max(1u, static_cast<unsigned>(std::ceil(std::log2(chain.kappa_estimate))));
    const double eps = config.eps.value_or(1.0 / (4.0 * lg));
    const auto max_depth = static_cast<std::size_t>(
        std::ceil(config.depth_factor * std::log2(chain.kappa_estimate)) + 2);
    const unsigned lgn = std::max(1u, ceil_log2(n));
    chain.m_prime = config.m_prime.value_or(static_cast<std::size_t>(n) * lgn * lgn * lgn);

    SddMatrix first = m;
    for (const auto& group : flat)
        for (Vertex v : group) first.diagonal[v] += chain.shift;
    if (first.off_diagonal_edges() > config.presparsify_above.value_or(chain.m_prime)) {
        first = sparsify_level(first, 0.5, 0, config);
        chain.presparsified = true;
    }
    check_sdd(first, 1e-9, "level 1");
    chain.levels.push_back(std::move(first));
    chain.level_eps.push_back(0.0);
    chain.sparsified.push_back(chain.presparsified);

    while (chain.levels.back().dominance_ratio() > config.dominance_threshold &&
           chain.levels.size() < max_depth) {
        SddMatrix next = reduce(chain.levels.back());
        bool sparsified = false;
        if (next.off_diagonal_edges() > chain.m_prime) {
            next = sparsify_level(next, eps, chain.levels.size(), config);
            sparsified = true;
        }
        check_sdd(next, 1e-9, "level " + std::to_string(chain.levels.size() + 1));
        chain.levels.push_back(std::move(next));
        chain.level_eps.push_back(sparsified ? eps : 0.0);
        chain.sparsified.push_back(sparsified);
    }

    const SddMatrix& bottom = chain.levels.back();
    const double r = bottom.dominance_ratio();
    if (r <= kJacobiMaxRatio) {
        chain.jacobi_iterations =
            r > 0.0 ? static_cast<std::size_t>(std::ceil(std::log(kJacobiTarget) / std::log(r))) : 0;
    } else {
        chain.bottom_factor.emplace(bottom.dense());
        if (chain.bottom_factor->info() != Eigen::Success)
            throw SolverError("dense factorization of the last level failed");
    }
    return chain;
}

std::vector<double> apply_chain(const InverseChain& chain, std::span<const double> b) {
    if (chain.levels.empty()) throw Error("apply_chain: empty chain");
    if (b.size() != chain.levels.front().size()) throw Error("apply_chain: dimension mismatch");
    return apply_level(chain, 0, b);
}

SolveResult solve(const SddMatrix& m, std::span<const double> b, const SolverConfig& config) {
    if (b.size() != m.size()) throw Error("solve: dimension mismatch");
    return solve(m, build_chain(m, config), b, config);
}

SolveResult solve(const SddMatrix& m, const InverseChain& chain, std::span<const double> b,
                  const SolverConfig& config) {
    config.validate();
    const std::size_t n = m.size();
    if (b.size() != n || chain.levels.empty() || chain.levels.front().size() != n)
        throw Error("solve: dimension mismatch");
    SolveResult result;
    result.chain_depth = chain.depth();
    result.kappa_estimate = chain.kappa_estimate;
    result.x.assign(n, 0.0);

    const auto flat = zero_excess_components(m);
    std::vector<double> rhs(b.begin(), b.end());
    project_out_means(rhs, flat);
    const double nb = norm(rhs);
    if (nb == 0.0) {
        result.converged = true;
        return result;
    }
    std::vector<double> r = rhs;
    result.residual_history.push_back(1.0);
    if (1.0 <= config.tau) {
        result.converged = true;
        return result;
    }
    const std::size_t per_iteration = application_work(chain) + 2 * (2 * m.off_diagonal_edges() + n);
    for (std::size_t it = 1; it <= config.max_iterations; ++it) {
        std::vector<double> z = apply_chain(chain, r);
        project_out_means(z, flat);
        const std::vector<double> q = m.multiply(z);
        const double qq = dot(q, q);
        if (qq == 0.0) break;
        const double alpha = dot(r, q) / qq;
        for (std::size_t i = 0; i < n; ++i) result.x[i] += alpha * z[i];
        r = m.multiply(result.x);
        for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - r[i];
        result.iterations = it;
        result.work += per_iteration;
        const double rel = norm(r) / nb;
        result.residual_history.push_back(rel);
        if (rel <= config.tau) {
            result.converged = true;
            break;
        }
        const std::size_t w = config.stagnation_window;
        if (it >= w && rel > 0.1 * result.residual_history[it - w])
            throw StagnationError("no tenfold residual reduction in " + std::to_string(w) +
                                      " iterations (relative residual " + std::to_string(rel) + ")",
                                  result.residual_history);
    }
    project_out_means(result.x, flat);
    return result;
}

}  // namespace sps
