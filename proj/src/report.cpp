#include "sps/report.hpp"

#include <cstdio>

namespace sps::report {

std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hash_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Json to_json(const SpectralBounds& b) {
    return {{"alpha", b.alpha}, {"beta", b.beta}, {"deviation", b.deviation()}};
}

Json to_json(const RoundReport& r) {
    Json j{{"round", r.round},
           {"epsilon", r.epsilon},
           {"t_used", r.t_used},
           {"t_eff", r.t_eff},
           {"input_edges", r.input_edges},
           {"bundle_edges", r.bundle_edges},
           {"residual_edges", r.residual_edges},
           {"kept_edges", r.kept_edges},
           {"output_edges", r.output_edges},
           {"skipped", r.skipped}};
    if (r.bounds) j["bounds"] = to_json(*r.bounds);
    return j;
}

Json to_json(const SparsifyReport& r) {
    Json rounds = Json::array();
    for (const auto& x : r.rounds) rounds.push_back(to_json(x));
    Json j{{"epsilon", r.epsilon}, {"rho", r.rho}, {"num_rounds", r.rounds.size()},
           {"rounds", std::move(rounds)}};
    if (r.overall) j["overall"] = to_json(*r.overall);
    return j;
}

Json to_json(const ConcentrationRow& row) {
    return {{"t", row.t},
            {"seeds", row.seeds},
            {"q10", row.q10},
            {"median", row.median},
            {"q90", row.q90},
            {"max", row.max},
            {"failure_fraction", row.failure_fraction},
            {"mean_alpha", row.mean_alpha},
            {"mean_beta", row.mean_beta}};
}

Json to_json(const distsim::RoundStats& s) {
    return {{"rounds", s.rounds}, {"messages", s.messages},
            {"max_message_words", s.max_message_words}};
}

Json to_json(const BundleCertificate& c) {
    Json values = Json::array();
    for (const auto& v : c.residual_values)
        values.push_back({{"u", v.edge.u}, {"v", v.edge.v}, {"w", v.edge.w}, {"wR", v.value}});
    return {{"ok", c.ok()},
            {"failures", c.failures},
            {"component_stretch", c.component_stretch},
            {"resistance_checked", c.resistance_checked},
            {"bound", c.bound},
            {"max_value", c.max_value},
            {"residual_values", std::move(values)}};
}

Json to_json(const InverseChain& chain) {
    return {{"depth", chain.depth()},
            {"kappa_estimate", chain.kappa_estimate},
            {"shift", chain.shift},
            {"presparsified", chain.presparsified},
            {"m_prime", chain.m_prime},
            {"level_edges", chain.level_edges()},
            {"level_eps", chain.level_eps},
            {"jacobi_iterations", chain.jacobi_iterations},
            {"dense_bottom", chain.bottom_factor.has_value()}};
}

Json to_json(const SolveResult& r) {
    return {{"converged", r.converged},
            {"iterations", r.iterations},
            {"residual_history", r.residual_history},
            {"chain_depth", r.chain_depth},
            {"kappa_estimate", r.kappa_estimate},
            {"work", r.work}};
}

Json edges_to_json(const WeightedGraph& g) {
    Json out = Json::array();
    for (const Edge& e : g.edges()) out.push_back(Json::array({e.u, e.v, e.w}));
    return out;
}

WeightedGraph edges_from_json(const Json& j, std::size_t n) {
    if (!j.is_array()) throw Error("edge list must be a JSON array");
    std::vector<Edge> edges;
    for (const auto& e : j) {
        if (!e.is_array() || e.size() != 3 || !e[0].is_number_unsigned() ||
            !e[1].is_number_unsigned() || !e[2].is_number())
            throw Error("edge must be [u, v, w] with nonnegative integer ids");
        edges.push_back({e[0].get<Vertex>(), e[1].get<Vertex>(), e[2].get<double>()});
    }
    return WeightedGraph::from_edges(n, std::move(edges));
}

Json bundle_to_json(const BundleDecomposition& b) {
    Json comps = Json::array();
    for (const auto& h : b.components) comps.push_back(edges_to_json(h));
    return {{"n", b.residual.num_vertices()},
            {"t", b.t_requested},
            {"components", std::move(comps)},
            {"residual", edges_to_json(b.residual)}};
}

BundleDecomposition bundle_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("t") || !j.contains("components") ||
        !j.contains("residual"))
        throw Error("bundle file needs n, t, components and residual");
    if (!j["n"].is_number_unsigned() || j["n"].get<std::size_t>() == 0)
        throw Error("bundle n must be a positive integer");
    if (!j["t"].is_number_unsigned()) throw Error("bundle t must be a nonnegative integer");
    if (!j["components"].is_array()) throw Error("bundle components must be an array");
    const auto n = j["n"].get<std::size_t>();
    BundleDecomposition b{{}, edges_from_json(j["residual"], n), j["t"].get<unsigned>()};
    for (const auto& c : j["components"]) b.components.push_back(edges_from_json(c, n));
    return b;
}

Json constants() {
    return {{"log_base", 2},
            {"bundle_constant", 24.0},
            {"keep_probability", 0.25},
            {"weight_multiplier", 4.0},
            {"stretch_slack", kStretchSlack},
            {"null_cutoff", kNullCutoff},
            {"message_envelope", distsim::kMessageEnvelope},
            {"word_budget", distsim::EngineConfig{}.word_budget}};
}

Json to_json(const RunManifest& m) {
    Json j{{"command", m.command}, {"args", m.args}};
    j["seed"] = m.seed ? Json(*m.seed) : Json(nullptr);
    j["input_hashes"] = m.input_hashes;
    j["tool_version"] = m.tool_version;
    j["output_hash"] = m.output_hash;
    j["config"] = m.config;
    return j;
}

RunManifest manifest_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("command") || !j.contains("args"))
        throw Error("manifest needs command and args");
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.args = j.at("args").get<std::vector<std::string>>();
    if (j.contains("seed") && !j["seed"].is_null()) m.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("input_hashes"))
        m.input_hashes = j["input_hashes"].get<std::map<std::string, std::string>>();
    if (j.contains("tool_version")) m.tool_version = j["tool_version"].get<std::string>();
    if (j.contains("output_hash")) m.output_hash = j["output_hash"].get<std::string>();
    if (j.contains("config")) m.config = j["config"];
    return m;
}

}  // namespace sps::report
