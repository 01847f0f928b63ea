#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sps/bundle.hpp"
#include "sps/graph.hpp"

namespace sps::distsim {

/// One machine word: an O(log n)-bit vertex id, tag, or weight.
using Word = std::uint64_t;

inline Word encode_double(double x) { return std::bit_cast<Word>(x); }
inline double decode_double(Word w) { return std::bit_cast<double>(w); }

struct Message {
    Vertex src;
    Vertex dst;
    std::vector<Word> payload;
};

struct Neighbor {
    Vertex id;
    double weight;
};

/// Everything a vertex may see about the network: its own id, n, and its
/// incident edges (neighbors ascending).
struct LocalView {
    Vertex id;
    std::size_t n;
    std::span<const Neighbor> neighbors;

    /// Position of `v` in neighbors, or -1.
    std::ptrdiff_t index_of(Vertex v) const {
        auto it = std::lower_bound(neighbors.begin(), neighbors.end(), v,
                                   [](const Neighbor& a, Vertex b) { return a.id < b; });
        if (it == neighbors.end() || it->id != v) return -1;
        return it - neighbors.begin();
    }
};

class EngineError : public Error {
public:
    using Error::Error;
};

struct EngineConfig {
    std::size_t word_budget = 4;
    std::size_t max_rounds = 1'000'000;
    bool record_trace = false;
};

struct RoundStats {
    std::size_t rounds = 0;
    std::size_t messages = 0;
    std::size_t max_message_words = 0;
};

struct TraceRecord {
    std::size_t round;
    Vertex src;
    Vertex dst;
    std::size_t words;
};

/// Per-vertex send buffer for one round. Enforces: destination is a
/// neighbor, at most one message per incident edge, payload within budget.
class Outbox {
public:
    Outbox(const LocalView& view, std::size_t round, std::size_t word_budget,
           std::vector<Message>& sink)
        : view_(view), round_(round), budget_(word_budget), sink_(sink),
          used_(view.neighbors.size(), 0) {}

    void send(Vertex dst, std::initializer_list<Word> payload) {
        send(dst, std::vector<Word>(payload));
    }
    void send(Vertex dst, std::vector<Word> payload);
    void vote_halt() { halt_ = true; }
    bool halted() const { return halt_; }

private:
    const LocalView& view_;
    std::size_t round_;
    std::size_t budget_;
    std::vector<Message>& sink_;
    std::vector<char> used_;
    bool halt_ = false;
};

/// Synchronous network over a fixed topology. Messages sent in round r are
/// delivered at the start of round r + 1, ordered by sender id.
class SyncNetwork {
public:
    explicit SyncNetwork(const WeightedGraph& topology, EngineConfig config = {});

    std::size_t size() const { return views_.size(); }
    const LocalView& view(Vertex v) const { return views_[v]; }
    const EngineConfig& config() const { return config_; }

private:
    EngineConfig config_;
    std::vector<std::vector<Neighbor>> neighbors_;
    std::vector<LocalView> views_;
};

template <class State>
struct RunResult {
    std::vector<State> states;
    RoundStats stats;
    std::vector<TraceRecord> trace;
};

/// Protocol requirements:
///   using State = ...;
///   State init(const LocalView&) const;
///   void step(State&, const LocalView&, std::size_t round,
///             std::span<const Message> inbox, Outbox&) const;
/// step() sees only its own state, its local view, the global round number
/// and its inbox. The run ends after the first round in which every vertex
/// votes to halt (votes are per round).
template <class Protocol>
RunResult<typename Protocol::State> run_sync(const SyncNetwork& net, const Protocol& protocol) {
    using State = typename Protocol::State;
    const std::size_t n = net.size();
    RunResult<State> result;
    result.states.reserve(n);
    for (Vertex v = 0; v < n; ++v) result.states.push_back(protocol.init(net.view(v)));
    std::vector<std::vector<Message>> inbox(n), next(n);
    std::vector<Message> sent;
    for (std::size_t round = 1;; ++round) {
        if (round > net.config().max_rounds)
            throw EngineError("no termination within " + std::to_string(net.config().max_rounds) +
                              " rounds");
        bool all_halt = true;
        for (Vertex v = 0; v < n; ++v) {
            sent.clear();
            Outbox out(net.view(v), round, net.config().word_budget, sent);
            protocol.step(result.states[v], net.view(v), round,
                          std::span<const Message>(inbox[v]), out);
            all_halt = all_halt && out.halted();
            for (auto& msg : sent) {
                ++result.stats.messages;
                result.stats.max_message_words =
                    std::max(result.stats.max_message_words, msg.payload.size());
                if (net.config().record_trace)
                    result.trace.push_back({round, msg.src, msg.dst, msg.payload.size()});
                next[msg.dst].push_back(std::move(msg));
            }
        }
        for (Vertex v = 0; v < n; ++v) {
            inbox[v].clear();
            std::swap(inbox[v], next[v]);
        }
        if (all_halt) {
            result.stats.rounds = round;
            return result;
        }
    }
}

/// JSON-lines message trace: {"round":..,"src":..,"dst":..,"words":..}.
void write_trace(std::ostream& out, std::span<const TraceRecord> trace);

/// Rounds used by one distributed spanner phase with parameter k:
/// iteration i of the clustering takes i + 1 rounds (i - 1 tree-broadcast
/// rounds for the sampling bit, one announce round, one decision round),
/// followed by one final-join round and one delivery round.
std::size_t spanner_round_schedule(unsigned k);

/// Committed message envelope constant: messages <= C * t * m * ceil(log2 n).
inline constexpr double kMessageEnvelope = 6.0;

struct SpannerRun {
    WeightedGraph spanner;
    RoundStats stats;
    std::vector<TraceRecord> trace;
};

struct BundleRun {
    BundleDecomposition bundle;
    RoundStats stats;
    std::vector<TraceRecord> trace;
};

/// Baswana-Sen (2k-1)-spanner as a synchronous message-passing protocol.
/// With the same (graph, k, seed) it returns exactly baswana_sen_spanner's
/// output, in spanner_round_schedule(k) rounds.
SpannerRun distributed_spanner(const WeightedGraph& g, unsigned k, Seed seed,
                               EngineConfig config = {});

/// t sequential spanner phases with k = max(1, ceil(log2 n)); edges chosen
/// in earlier phases are dropped locally by their endpoints. Phase seeds
/// match t_bundle, so the result equals t_bundle(g, t, seed) exactly.
BundleRun distributed_bundle(const WeightedGraph& g, unsigned t, Seed seed,
                             EngineConfig config = {});

}  // namespace sps::distsim
