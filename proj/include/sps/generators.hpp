#pragma once

#include <string>
#include <variant>

#include "sps/graph.hpp"

namespace sps {

struct ErdosRenyi {
    std::size_t n;
    double p;
};
struct Grid2d {
    std::size_t rows;
    std::size_t cols;
};
struct Complete {
    std::size_t n;
};
struct Path {
    std::size_t n;
};
struct Cycle {
    std::size_t n;
};
/// Two cliques on clique_size vertices joined by a path of path_len edges.
struct Dumbbell {
    std::size_t clique_size;
    std::size_t path_len;
};

using GraphModel = std::variant<ErdosRenyi, Grid2d, Complete, Path, Cycle, Dumbbell>;

struct UnitWeights {};
struct UniformWeights {
    double lo;
    double hi;
};
struct LogUniformWeights {
    double lo;
    double hi;
};

using WeightDistribution = std::variant<UnitWeights, UniformWeights, LogUniformWeights>;

struct GeneratorSpec {
    GraphModel model;
    WeightDistribution weights = UnitWeights{};
    Seed seed = 0;
};

/// Deterministic for a fixed spec. Every model except Erdos-Renyi is
/// connected. Invalid parameters throw.
WeightedGraph generate(const GeneratorSpec& spec);

/// Short human-readable model description, e.g. "erdos-renyi(100, 0.1)".
std::string describe(const GraphModel& model);

}  // namespace sps
