#include "sps/distsim.hpp"

#include <map>
#include <ostream>

#include "sps/spanner.hpp"

namespace sps::distsim {

void Outbox::send(Vertex dst, std::vector<Word> payload) {
    const auto where = " (round " + std::to_string(round_) + ", " + std::to_string(view_.id) +
                       " -> " + std::to_string(dst) + ")";
    const auto idx = view_.index_of(dst);
    if (idx < 0) throw EngineError("send to a non-neighbor" + where);
    if (used_[idx]) throw EngineError("second message on one edge in one round" + where);
    if (payload.size() > budget_)
        throw EngineError("message of " + std::to_string(payload.size()) +
                          " words exceeds the budget of " + std::to_string(budget_) + where);
    used_[idx] = 1;
    sink_.push_back({view_.id, dst, std::move(payload)});
}

SyncNetwork::SyncNetwork(const WeightedGraph& topology, EngineConfig config)
    : config_(config), neighbors_(topology.num_vertices()) {
    for (const Edge& e : topology.edges()) {
        neighbors_[e.u].push_back({e.v, e.w});
        neighbors_[e.v].push_back({e.u, e.w});
    }
    for (auto& list : neighbors_)
        std::sort(list.begin(), list.end(),
                  [](const Neighbor& a, const Neighbor& b) { return a.id < b.id; });
    views_.reserve(neighbors_.size());
    for (Vertex v = 0; v < neighbors_.size(); ++v)
        views_.push_back({v, neighbors_.size(), std::span<const Neighbor>(neighbors_[v])});
}

void write_trace(std::ostream& out, std::span<const TraceRecord> trace) {
    for (const auto& r : trace)
        out << "{\"round\":" << r.round << ",\"src\":" << r.src << ",\"dst\":" << r.dst
            << ",\"words\":" << r.words << "}\n";
}

std::size_t spanner_round_schedule(unsigned k) {
    if (k == 0) throw Error("spanner_round_schedule: k must be positive");
    std::size_t rounds = 2;
    for (unsigned i = 1; i < k; ++i) rounds += i + 1;
    return rounds;
}

namespace {

enum Tag : Word { kBroadcast = 1, kAnnounce = 2, kDecision = 3, kNotify = 4 };
enum Flag : Word { kAdd = 1, kRemove = 2, kJoin = 4 };
constexpr std::int64_t kNone = -1;

Word encode_cluster(std::int64_t c) { return static_cast<Word>(c + 1); }
std::int64_t decode_cluster(Word w) { return static_cast<std::int64_t>(w) - 1; }

enum class SlotKind { broadcast, announce, decide, join, deliver };

struct Slot {
    SlotKind kind;
    unsigned iteration;
    unsigned sub;
};

std::vector<Slot> build_schedule(unsigned k) {
    std::vector<Slot> s;
    for (unsigned i = 1; i < k; ++i) {
        for (unsigned b = 0; b + 1 < i; ++b) s.push_back({SlotKind::broadcast, i, b});
        s.push_back({SlotKind::announce, i, i - 1});
        s.push_back({SlotKind::decide, i, i});
    }
    s.push_back({SlotKind::join, k, 0});
    s.push_back({SlotKind::deliver, k, 0});
    return s;
}

struct BsState {
    std::vector<char> excluded;  // taken by an earlier phase
    std::vector<char> active;
    std::vector<char> chosen;
    std::vector<std::int64_t> nbr_cluster;
    std::vector<char> nbr_sampled;
    std::vector<Vertex> children;
    std::int64_t cluster = kNone;
    bool sampled = false;
    bool relay = false;
    std::vector<std::vector<std::size_t>> components;  // chosen neighbor indices per phase
};

class BaswanaSenProtocol {
public:
    using State = BsState;

    BaswanaSenProtocol(std::size_t n, unsigned k, std::vector<Seed> phase_seeds)
        : k_(k), p_(cluster_sample_probability(n, k)), seeds_(std::move(phase_seeds)),
          schedule_(build_schedule(k)) {}

    State init(const LocalView& view) const {
        State s;
        s.excluded.assign(view.neighbors.size(), 0);
        start_phase(s, view);
        return s;
    }

    void step(State& s, const LocalView& view, std::size_t round, std::span<const Message> inbox,
              Outbox& out) const {
        const std::size_t phase = (round - 1) / schedule_.size();
        const std::size_t offset = (round - 1) % schedule_.size();
        if (phase >= seeds_.size()) {
            out.vote_halt();
            return;
        }
        const Slot& slot = schedule_[offset];
        const Seed seed = seeds_[phase];
        receive(s, view, inbox);

        if (offset == 0 && std::find(s.active.begin(), s.active.end(), 1) == s.active.end())
            out.vote_halt();

        const auto self = static_cast<std::int64_t>(view.id);
        switch (slot.kind) {
            case SlotKind::broadcast:
                if (slot.sub == 0 && s.cluster == self) {
                    s.sampled = cluster_sampled(seed, slot.iteration, view.id, p_);
                    s.relay = true;
                }
                if (s.relay)
                    for (Vertex c : s.children) out.send(c, {kBroadcast, encode_cluster(s.cluster), s.sampled});
                break;
            case SlotKind::announce:
                if (s.cluster == self) s.sampled = cluster_sampled(seed, slot.iteration, view.id, p_);
                if (s.cluster != kNone)
                    for (std::size_t i = 0; i < s.active.size(); ++i)
                        if (s.active[i])
                            out.send(view.neighbors[i].id,
                                     {kAnnounce, encode_cluster(s.cluster), s.sampled});
                break;
            case SlotKind::decide:
                if (s.cluster != kNone && !s.sampled) decide(s, view, out);
                break;
            case SlotKind::join:
                for (const auto& [c, i] : lightest_per_cluster(s, view)) {
                    s.chosen[i] = 1;
                    out.send(view.neighbors[i].id, {kNotify});
                }
                std::fill(s.active.begin(), s.active.end(), 0);
                break;
            case SlotKind::deliver: {
                std::vector<std::size_t> taken;
                for (std::size_t i = 0; i < s.chosen.size(); ++i)
                    if (s.chosen[i]) {
                        taken.push_back(i);
                        s.excluded[i] = 1;
                    }
                s.components.push_back(std::move(taken));
                start_phase(s, view);
                if (phase + 1 == seeds_.size() ||
                    std::find(s.active.begin(), s.active.end(), 1) == s.active.end())
                    out.vote_halt();
                break;
            }
        }
        s.relay = false;
    }

private:
    static void start_phase(State& s, const LocalView& view) {
        const std::size_t d = view.neighbors.size();
        s.active.assign(d, 0);
        for (std::size_t i = 0; i < d; ++i) s.active[i] = !s.excluded[i];
        s.chosen.assign(d, 0);
        s.nbr_cluster.resize(d);
        for (std::size_t i = 0; i < d; ++i) s.nbr_cluster[i] = view.neighbors[i].id;
        s.nbr_sampled.assign(d, 0);
        s.children.clear();
        s.cluster = view.id;
        s.sampled = false;
    }

    static LengthKey key_of(const LocalView& view, std::size_t i) {
        const Vertex x = view.neighbors[i].id;
        return length_key(Edge{std::min(view.id, x), std::max(view.id, x), view.neighbors[i].weight});
    }

    static void receive(State& s, const LocalView& view, std::span<const Message> inbox) {
        for (const Message& msg : inbox) {
            const auto i = static_cast<std::size_t>(view.index_of(msg.src));
            switch (msg.payload.at(0)) {
                case kBroadcast:
                    s.sampled = msg.payload.at(2) != 0;
                    s.relay = true;
                    break;
                case kAnnounce:
                    s.nbr_cluster[i] = decode_cluster(msg.payload.at(1));
                    s.nbr_sampled[i] = msg.payload.at(2) != 0;
                    break;
                case kDecision: {
                    s.nbr_cluster[i] = decode_cluster(msg.payload.at(1));
                    const Word flags = msg.payload.at(2);
                    if (flags & kAdd) s.chosen[i] = 1;
                    if (flags & kRemove) s.active[i] = 0;
                    if (flags & kJoin) s.children.push_back(msg.src);
                    break;
                }
                case kNotify:
                    s.chosen[i] = 1;
                    break;
                default:
                    throw EngineError("unknown message tag");
            }
        }
        // Edges inside a cluster are discarded once both ends know it.
        for (std::size_t i = 0; i < s.active.size(); ++i)
            if (s.active[i] && s.cluster != kNone && s.nbr_cluster[i] == s.cluster) s.active[i] = 0;
    }

    static std::map<std::int64_t, std::size_t> lightest_per_cluster(const State& s,
                                                                    const LocalView& view) {
        std::map<std::int64_t, std::size_t> best;
        for (std::size_t i = 0; i < s.active.size(); ++i) {
            if (!s.active[i] || s.nbr_cluster[i] == kNone) continue;
            auto [it, fresh] = best.try_emplace(s.nbr_cluster[i], i);
            if (!fresh && key_of(view, i) < key_of(view, it->second)) it->second = i;
        }
        return best;
    }

    static void decide(State& s, const LocalView& view, Outbox& out) {
        const auto best = lightest_per_cluster(s, view);
        const std::pair<const std::int64_t, std::size_t>* star = nullptr;
        for (const auto& b : best)
            if (s.nbr_sampled[b.second] &&
                (!star || key_of(view, b.second) < key_of(view, star->second)))
                star = &b;
        std::vector<std::size_t> add;
        std::vector<std::int64_t> dropped;
        std::int64_t next = kNone;
        if (!star) {
            for (const auto& b : best) {
                add.push_back(b.second);
                dropped.push_back(b.first);
            }
        } else {
            next = star->first;
            add.push_back(star->second);
            dropped.push_back(star->first);
            for (const auto& b : best)
                if (key_of(view, b.second) < key_of(view, star->second)) {
                    add.push_back(b.second);
                    dropped.push_back(b.first);
                }
        }
        std::sort(dropped.begin(), dropped.end());
        std::vector<Word> flags(s.active.size(), 0);
        for (auto i : add) flags[i] |= kAdd;
        for (std::size_t i = 0; i < s.active.size(); ++i)
            if (s.active[i] && std::binary_search(dropped.begin(), dropped.end(), s.nbr_cluster[i]))
                flags[i] |= kRemove;
        if (star) flags[star->second] |= kJoin;
        for (std::size_t i = 0; i < s.active.size(); ++i)
            if (s.active[i]) out.send(view.neighbors[i].id, {kDecision, encode_cluster(next), flags[i]});
        for (std::size_t i = 0; i < s.active.size(); ++i) {
            if (flags[i] & kAdd) s.chosen[i] = 1;
            if (flags[i] & kRemove) s.active[i] = 0;
        }
        s.cluster = next;
        s.children.clear();
    }

    unsigned k_;
    double p_;
    std::vector<Seed> seeds_;
    std::vector<Slot> schedule_;
};

std::vector<WeightedGraph> collect_phases(const SyncNetwork& net,
                                          const std::vector<BsState>& states) {
    const std::size_t phases = states.empty() ? 0 : states.front().components.size();
    std::vector<std::vector<Edge>> lists(phases);
    for (Vertex v = 0; v < states.size(); ++v) {
        const auto& nbrs = net.view(v).neighbors;
        for (std::size_t j = 0; j < phases; ++j)
            for (auto i : states[v].components[j])
                if (v < nbrs[i].id) lists[j].push_back({v, nbrs[i].id, nbrs[i].weight});
    }
    std::vector<WeightedGraph> out;
    for (auto& list : lists) out.push_back(WeightedGraph::from_edges(net.size(), std::move(list)));
    return out;
}

}  // namespace

SpannerRun distributed_spanner(const WeightedGraph& g, unsigned k, Seed seed, EngineConfig config) {
    if (k == 0) throw Error("distributed_spanner: k must be positive");
    SyncNetwork net(g, config);
    BaswanaSenProtocol protocol(g.num_vertices(), k, {seed});
    auto run = run_sync(net, protocol);
    auto phases = collect_phases(net, run.states);
    SpannerRun out{phases.empty() ? WeightedGraph(g.num_vertices()) : std::move(phases.front()),
                   run.stats, std::move(run.trace)};
    return out;
}

BundleRun distributed_bundle(const WeightedGraph& g, unsigned t, Seed seed, EngineConfig config) {
    if (t == 0) throw Error("distributed_bundle: t must be positive");
    std::vector<Seed> seeds;
    for (unsigned i = 0; i < t; ++i) seeds.push_back(bundle_component_seed(seed, i));
    SyncNetwork net(g, config);
    BaswanaSenProtocol protocol(g.num_vertices(), log_spanner_k(g.num_vertices()), std::move(seeds));
    auto run = run_sync(net, protocol);
    BundleDecomposition b{collect_phases(net, run.states), g, t};
    for (const auto& h : b.components) b.residual = subtract(b.residual, h);
    return {std::move(b), run.stats, std::move(run.trace)};
}

}  // namespace sps::distsim
