#pragma once

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sps/bundle.hpp"
#include "sps/distsim.hpp"
#include "sps/laplacian.hpp"
#include "sps/solver.hpp"
#include "sps/sparsify.hpp"

namespace sps::report {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";

std::uint64_t fnv1a(std::string_view bytes);
std::string hash_hex(std::uint64_t h);
inline std::string content_hash(std::string_view bytes) { return hash_hex(fnv1a(bytes)); }

Json to_json(const SpectralBounds& b);
Json to_json(const RoundReport& r);
Json to_json(const SparsifyReport& r);
Json to_json(const ConcentrationRow& row);
Json to_json(const distsim::RoundStats& s);
Json to_json(const BundleCertificate& c);
Json to_json(const InverseChain& chain);
Json to_json(const SolveResult& r);

Json edges_to_json(const WeightedGraph& g);
WeightedGraph edges_from_json(const Json& j, std::size_t n);

/// {"n", "t", "components": [[[u, v, w], ...], ...], "residual": [...]}.
Json bundle_to_json(const BundleDecomposition& b);
BundleDecomposition bundle_from_json(const Json& j);

/// Fixed constants every run depends on.
Json constants();

struct RunManifest {
    std::string command;
    std::vector<std::string> args;  // full argument list after the program name
    std::optional<std::uint64_t> seed;
    std::map<std::string, std::string> input_hashes;  // path -> FNV-1a
    std::string tool_version = kToolVersion;
    std::string output_hash;
    Json config = constants();
};

Json to_json(const RunManifest& m);
RunManifest manifest_from_json(const Json& j);

}  // namespace sps::report
