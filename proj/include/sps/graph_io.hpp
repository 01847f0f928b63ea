#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sps/graph.hpp"

namespace sps {

/// Shortest decimal text that parses back to exactly `x`.
std::string format_double(double x);

/// Edge-list text: one "u v w" per line, '#' starts a comment line, and an
/// optional "n <N>" line fixes the vertex count (otherwise 1 + max id).
/// Repeated pairs are merged by summing weights.
WeightedGraph load_edge_list(std::istream& in);
WeightedGraph load_edge_list_file(const std::string& path);

/// Writes edges in canonical order. The "n <N>" header is emitted only when
/// the vertex count is not implied by the edges.
void save_edge_list(std::ostream& out, const WeightedGraph& g);
std::string to_edge_list(const WeightedGraph& g);

/// Entries of a symmetric Matrix Market file, lower triangle as stored.
struct SymmetricEntries {
    std::size_t n = 0;
    struct Entry {
        std::size_t row;
        std::size_t col;
        double value;
    };
    std::vector<Entry> entries;
};

/// Reads "%%MatrixMarket matrix coordinate real symmetric" (1-based).
SymmetricEntries read_matrix_market(std::istream& in);
void write_matrix_market(std::ostream& out, const SymmetricEntries& m);

/// Graphs travel as their Laplacian: off-diagonal entry (i, j) = -w_ij and
/// diagonal = weighted degree. On read, diagonal entries are ignored and
/// every off-diagonal entry must be negative.
WeightedGraph graph_from_matrix_market(const SymmetricEntries& m);
SymmetricEntries graph_to_matrix_market(const WeightedGraph& g);

/// Whitespace-separated reals.
std::vector<double> read_vector(std::istream& in);
void write_vector(std::ostream& out, const std::vector<double>& x);

}  // namespace sps
