#include "sps/graph_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace sps {

std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

namespace {

bool blank_or_comment(const std::string& line) {
    auto pos = line.find_first_not_of(" \t\r");
    return pos == std::string::npos || line[pos] == '#';
}

}  // namespace

WeightedGraph load_edge_list(std::istream& in) {
    std::vector<Edge> edges;
    std::size_t header_n = 0;
    std::size_t max_id = 0;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (blank_or_comment(line)) continue;
        std::istringstream ss(line);
        std::string first;
        ss >> first;
        if (first == "n") {
            long long n = 0;
            if (!(ss >> n) || n < 1) throw ParseError(lineno, "malformed vertex-count header");
            header_n = static_cast<std::size_t>(n);
            continue;
        }
        long long u = 0, v = 0;
        double w = 0.0;
        std::istringstream full(line);
        if (!(full >> u >> v >> w)) throw ParseError(lineno, "expected \"u v w\"");
        std::string rest;
        if (full >> rest) throw ParseError(lineno, "trailing characters");
        if (u < 0 || v < 0) throw ParseError(lineno, "negative vertex id");
        if (u == v) throw ParseError(lineno, "self-loop");
        if (!(w > 0.0)) throw ParseError(lineno, "non-positive weight");
        edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v), w});
        max_id = std::max<std::size_t>(max_id, static_cast<std::size_t>(std::max(u, v)));
    }
    std::size_t n = edges.empty() ? 1 : max_id + 1;
    if (header_n != 0) {
        if (!edges.empty() && header_n <= max_id)
            throw ParseError(lineno, "vertex id exceeds header vertex count");
        n = header_n;
    }
    return WeightedGraph::from_edges(n, std::move(edges), Duplicates::merge);
}

WeightedGraph load_edge_list_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    return load_edge_list(in);
}

void save_edge_list(std::ostream& out, const WeightedGraph& g) {
    std::size_t implied = 1;
    for (const Edge& e : g.edges()) implied = std::max<std::size_t>(implied, e.v + 1);
    if (implied != g.num_vertices() || g.empty()) out << "n " << g.num_vertices() << '\n';
    for (const Edge& e : g.edges())
        out << e.u << ' ' << e.v << ' ' << format_double(e.w) << '\n';
}

std::string to_edge_list(const WeightedGraph& g) {
    std::ostringstream ss;
    save_edge_list(ss, g);
    return ss.str();
}

SymmetricEntries read_matrix_market(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line)) throw ParseError(1, "empty Matrix Market input");
    ++lineno;
    {
        std::istringstream ss(line);
        std::string banner, object, format, field, symmetry;
        ss >> banner >> object >> format >> field >> symmetry;
        if (banner != "%%MatrixMarket" || object != "matrix" || format != "coordinate")
            throw ParseError(lineno, "expected a coordinate Matrix Market banner");
        if (field != "real" && field != "integer")
            throw ParseError(lineno, "only real/integer fields are supported");
        if (symmetry != "symmetric") throw ParseError(lineno, "matrix must be symmetric");
    }
    SymmetricEntries m;
    std::size_t rows = 0, cols = 0, nnz = 0;
    bool have_size = false;
    while (std::getline(in, line)) {
        ++lineno;
        auto pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos || line[pos] == '%') continue;
        std::istringstream ss(line);
        if (!have_size) {
            if (!(ss >> rows >> cols >> nnz) || rows != cols || rows == 0)
                throw ParseError(lineno, "bad size line");
            m.n = rows;
            have_size = true;
            continue;
        }
        long long i = 0, j = 0;
        double val = 0.0;
        if (!(ss >> i >> j >> val)) throw ParseError(lineno, "expected \"i j value\"");
        if (i < 1 || j < 1 || static_cast<std::size_t>(i) > rows ||
            static_cast<std::size_t>(j) > cols)
            throw ParseError(lineno, "index out of range");
        if (i < j) std::swap(i, j);
        m.entries.push_back({static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1), val});
    }
    if (!have_size) throw ParseError(lineno, "missing size line");
    if (m.entries.size() != nnz) throw ParseError(lineno, "entry count does not match header");
    return m;
}

void write_matrix_market(std::ostream& out, const SymmetricEntries& m) {
    out << "%%MatrixMarket matrix coordinate real symmetric\n";
    out << m.n << ' ' << m.n << ' ' << m.entries.size() << '\n';
    for (const auto& e : m.entries)
        out << e.row + 1 << ' ' << e.col + 1 << ' ' << format_double(e.value) << '\n';
}

WeightedGraph graph_from_matrix_market(const SymmetricEntries& m) {
    std::vector<Edge> edges;
    for (const auto& e : m.entries) {
        if (e.row == e.col) continue;
        if (!(e.value < 0.0))
            throw Error("off-diagonal entry (" + std::to_string(e.row + 1) + ", " +
                        std::to_string(e.col + 1) + ") must be negative");
        edges.push_back({static_cast<Vertex>(e.col), static_cast<Vertex>(e.row), -e.value});
    }
    return WeightedGraph::from_edges(m.n, std::move(edges), Duplicates::merge);
}

SymmetricEntries graph_to_matrix_market(const WeightedGraph& g) {
    SymmetricEntries m;
    m.n = g.num_vertices();
    std::vector<double> degree(m.n, 0.0);
    for (const Edge& e : g.edges()) {
        degree[e.u] += e.w;
        degree[e.v] += e.w;
    }
    for (std::size_t i = 0; i < m.n; ++i)
        if (degree[i] != 0.0) m.entries.push_back({i, i, degree[i]});
    for (const Edge& e : g.edges()) m.entries.push_back({e.v, e.u, -e.w});
    return m;
}

std::vector<double> read_vector(std::istream& in) {
    std::vector<double> x;
    std::string tok;
    while (in >> tok) {
        double val = 0.0;
        auto res = std::from_chars(tok.data(), tok.data() + tok.size(), val);
        if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
            throw ParseError(x.size() + 1, "bad real \"" + tok + "\"");
        x.push_back(val);
    }
    return x;
}

void write_vector(std::ostream& out, const std::vector<double>& x) {
    for (double v : x) out << format_double(v) << '\n';
}

}  // namespace sps
