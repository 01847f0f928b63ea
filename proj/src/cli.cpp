#include "sps/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "sps/bundle.hpp"
#include "sps/distsim.hpp"
#include "sps/generators.hpp"
#include "sps/graph_io.hpp"
#include "sps/report.hpp"
#include "sps/solver.hpp"
#include "sps/sparsify.hpp"

namespace sps::cli {

namespace {

using report::Json;

class UsageError : public Error {
public:
    using Error::Error;
};

struct Options {
    std::string out, report, manifest;
    unsigned threads = 1;
    std::optional<std::uint64_t> seed;

    // gen
    std::string model, weights = "unit";
    std::size_t n = 0, rows = 0, cols = 0, clique = 0, path_len = 0;
    double p = 0.1, wmin = 1.0, wmax = 10.0;

    // graph-consuming commands
    std::string graph, algo = "baswana-sen";
    std::optional<unsigned> k, t;
    double eps = 0.5, rho = 2.0;
    bool single = false, measure = false, certify = false, check = false;

    // verify
    std::string spanner_file, bundle_file, sparsifier_file;

    // simulate
    std::string protocol, trace;
    std::size_t word_budget = 4;

    // solve
    std::string matrix, rhs;
    double tau = 1e-8;
    std::optional<std::size_t> m_prime, max_iter;

    // experiment
    std::vector<unsigned> schedule{1, 2, 4, 8};
    std::size_t num_seeds = 100;
};

struct Outcome {
    std::string primary;
    Json report = Json::object();
    int status = kExitOk;
};

/// Tracks every input file a command reads so the manifest can hash it.
class Inputs {
public:
    std::string read(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw UsageError("cannot open " + path);
        std::ostringstream buf;
        buf << in.rdbuf();
        std::string text = buf.str();
        hashes_[path] = report::content_hash(text);
        return text;
    }
    WeightedGraph graph(const std::string& path) {
        std::istringstream in(read(path));
        return load_edge_list(in);
    }
    const std::map<std::string, std::string>& hashes() const { return hashes_; }

private:
    std::map<std::string, std::string> hashes_;
};

std::uint64_t require_seed(const Options& o, const std::string& command) {
    if (!o.seed) throw UsageError(command + " is randomized and needs an explicit --seed");
    return *o.seed;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

GraphModel parse_model(const Options& o) {
    auto need = [&](std::size_t v, const char* flag) {
        if (v == 0) throw UsageError("--model " + o.model + " needs " + flag);
        return v;
    };
    if (o.model == "erdos-renyi") return ErdosRenyi{need(o.n, "--n"), o.p};
    if (o.model == "grid2d") return Grid2d{need(o.rows, "--rows"), need(o.cols, "--cols")};
    if (o.model == "complete") return Complete{need(o.n, "--n")};
    if (o.model == "path") return Path{need(o.n, "--n")};
    if (o.model == "cycle") return Cycle{need(o.n, "--n")};
    if (o.model == "dumbbell") return Dumbbell{need(o.clique, "--clique"), need(o.path_len, "--path-len")};
    throw UsageError("unknown model " + o.model);
}

WeightDistribution parse_weights(const Options& o) {
    if (o.weights == "unit") return UnitWeights{};
    if (o.weights == "uniform") return UniformWeights{o.wmin, o.wmax};
    if (o.weights == "loguniform") return LogUniformWeights{o.wmin, o.wmax};
    throw UsageError("unknown weight distribution " + o.weights);
}

SpannerAlgo algo_of(const Options& o) {
    try {
        return parse_spanner_algo(o.algo);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
}

Outcome run_gen(const Options& o, Inputs&) {
    GeneratorSpec spec{parse_model(o), parse_weights(o), require_seed(o, "gen")};
    WeightedGraph g = generate(spec);
    Outcome out;
    out.primary = to_edge_list(g);
    out.report = {{"model", describe(spec.model)}, {"n", g.num_vertices()}, {"m", g.num_edges()}};
    return out;
}

Outcome run_spanner(const Options& o, Inputs& in) {
    const WeightedGraph g = in.graph(o.graph);
    const SpannerAlgo algo = algo_of(o);
    const Seed seed = algo == SpannerAlgo::greedy ? o.seed.value_or(0) : require_seed(o, "spanner");
    const unsigned k = o.k.value_or(log_spanner_k(g.num_vertices()));
    const WeightedGraph h = build_spanner(algo, g, k, seed, o.threads);
    const double s = max_stretch(g, h, o.threads);
    Outcome out;
    out.primary = to_edge_list(h);
    out.report = {{"algo", to_string(algo)}, {"k", k},         {"n", g.num_vertices()},
                  {"input_edges", g.num_edges()}, {"spanner_edges", h.num_edges()},
                  {"max_stretch", s}, {"stretch_bound", 2 * k - 1}, {"ok", stretch_within(s, k)}};
    if (!stretch_within(s, k)) out.status = kExitVerifyFailed;
    return out;
}

Outcome run_bundle(const Options& o, Inputs& in) {
    const WeightedGraph g = in.graph(o.graph);
    if (!o.t) throw UsageError("bundle needs --t");
    const BundleDecomposition b = t_bundle(g, *o.t, require_seed(o, "bundle"), algo_of(o), o.threads);
    Outcome out;
    out.primary = dump(report::bundle_to_json(b));
    std::vector<std::size_t> sizes;
    for (const auto& h : b.components) sizes.push_back(h.num_edges());
    out.report = {{"t", b.t_requested},     {"t_eff", b.t_eff()},   {"n", g.num_vertices()},
                  {"input_edges", g.num_edges()}, {"component_edges", sizes},
                  {"residual_edges", b.residual.num_edges()}};
    if (o.certify) {
        const BundleCertificate cert = verify_bundle(g, b, kDefaultDenseLimit, o.threads);
        out.report["certificate"] = report::to_json(cert);
        if (!cert.ok()) out.status = kExitVerifyFailed;
    }
    return out;
}

SampleConfig sample_config(const Options& o, const std::string& command) {
    SampleConfig c;
    c.epsilon = o.eps;
    c.t_override = o.t;
    c.seed = require_seed(o, command);
    c.spanner = algo_of(o);
    c.threads = o.threads;
    try {
        c.validate();
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    return c;
}

Outcome run_sparsify(const Options& o, Inputs& in) {
    const WeightedGraph g = in.graph(o.graph);
    const SampleConfig config = sample_config(o, "sparsify");
    Outcome out;
    if (o.single) {
        auto [h, rep] = parallel_sample(g, o.eps, config);
        if (o.measure) rep.bounds = spectral_bounds(g, h);
        out.primary = to_edge_list(h);
        out.report = report::to_json(rep);
        out.report["mode"] = "single";
    } else {
        auto [h, rep] = parallel_sparsify(g, o.eps, o.rho, config, o.measure);
        out.primary = to_edge_list(h);
        out.report = report::to_json(rep);
        out.report["mode"] = "iterated";
    }
    return out;
}

Outcome run_verify(const Options& o, Inputs& in) {
    const WeightedGraph g = in.graph(o.graph);
    const int modes = !o.spanner_file.empty() + !o.bundle_file.empty() + !o.sparsifier_file.empty();
    if (modes != 1) throw UsageError("verify needs exactly one of --spanner, --bundle, --sparsifier");
    Outcome out;
    auto failed = [&](const std::string& why) {
        out.report["ok"] = false;
        out.report["failures"] = Json::array({why});
        out.status = kExitVerifyFailed;
        return out;
    };
    if (!o.bundle_file.empty()) {
        out.report["kind"] = "bundle";
        BundleDecomposition b;
        try {
            b = report::bundle_from_json(Json::parse(in.read(o.bundle_file)));
        } catch (const UsageError&) {
            throw;
        } catch (const std::exception& e) {
            return failed(std::string("unreadable bundle: ") + e.what());
        }
        const BundleCertificate cert = verify_bundle(g, b, kDefaultDenseLimit, o.threads);
        out.report["certificate"] = report::to_json(cert);
        out.report["ok"] = cert.ok();
        if (!cert.ok()) out.status = kExitVerifyFailed;
        return out;
    }
    const std::string& file = o.spanner_file.empty() ? o.sparsifier_file : o.spanner_file;
    WeightedGraph h(1);
    try {
        std::istringstream text(in.read(file));
        h = load_edge_list(text);
    } catch (const UsageError&) {
        throw;
    } catch (const Error& e) {
        return failed(std::string("unreadable graph: ") + e.what());
    }
    if (h.num_vertices() != g.num_vertices()) return failed("vertex counts differ");
    if (!o.spanner_file.empty()) {
        const unsigned k = o.k.value_or(log_spanner_k(g.num_vertices()));
        out.report["kind"] = "spanner";
        if (!is_subgraph(h, g)) return failed("spanner is not a subgraph of G");
        double s = 0.0;
        try {
            s = max_stretch(g, h, o.threads);
        } catch (const DisconnectedError& e) {
            return failed(e.what());
        }
        out.report["k"] = k;
        out.report["max_stretch"] = s;
        out.report["stretch_bound"] = 2 * k - 1;
        out.report["ok"] = stretch_within(s, k);
    } else {
        out.report["kind"] = "sparsifier";
        const SpectralBounds sb = spectral_bounds(g, h);
        out.report["bounds"] = report::to_json(sb);
        out.report["epsilon"] = o.eps;
        out.report["ok"] = sb.deviation() <= o.eps;
    }
    if (!out.report["ok"].get<bool>()) out.status = kExitVerifyFailed;
    return out;
}

Outcome run_simulate(const Options& o, Inputs& in) {
    const WeightedGraph g = in.graph(o.graph);
    const Seed seed = require_seed(o, "simulate");
    distsim::EngineConfig engine;
    engine.word_budget = o.word_budget;
    engine.record_trace = !o.trace.empty();
    Outcome out;
    const std::size_t n = g.num_vertices();
    std::vector<distsim::TraceRecord> trace;
    distsim::RoundStats stats;
    unsigned phases = 1, k = 0;
    bool matches = true;
    if (o.protocol == "spanner") {
        k = o.k.value_or(log_spanner_k(n));
        auto run = distsim::distributed_spanner(g, k, seed, engine);
        out.primary = to_edge_list(run.spanner);
        if (o.check) matches = run.spanner == baswana_sen_spanner(g, k, seed);
        stats = run.stats;
        trace = std::move(run.trace);
    } else if (o.protocol == "bundle") {
        k = log_spanner_k(n);
        phases = o.t.value_or(1);
        auto run = distsim::distributed_bundle(g, phases, seed, engine);
        out.primary = dump(report::bundle_to_json(run.bundle));
        if (o.check) {
            const auto shared = t_bundle(g, phases, seed);
            matches = shared.components == run.bundle.components && shared.residual == run.bundle.residual;
        }
        phases = static_cast<unsigned>(run.bundle.t_eff());
        stats = run.stats;
        trace = std::move(run.trace);
    } else {
        throw UsageError("--protocol must be spanner or bundle");
    }
    const double envelope = distsim::kMessageEnvelope * std::max(1u, phases) *
                            static_cast<double>(g.num_edges()) * ceil_log2(n);
    out.report = {{"protocol", o.protocol},
                  {"k", k},
                  {"phases", phases},
                  {"stats", report::to_json(stats)},
                  {"schedule_rounds_per_phase", distsim::spanner_round_schedule(k)},
                  {"message_envelope", envelope},
                  {"within_envelope", static_cast<double>(stats.messages) <= envelope}};
    if (o.check) {
        out.report["matches_shared_memory"] = matches;
        if (!matches) out.status = kExitVerifyFailed;
    }
    if (!o.trace.empty()) {
        std::ofstream tf(o.trace);
        if (!tf) throw UsageError("cannot write " + o.trace);
        distsim::write_trace(tf, trace);
    }
    return out;
}

Outcome run_solve(const Options& o, Inputs& in) {
    std::istringstream mtext(in.read(o.matrix));
    const SddMatrix m = SddMatrix::from_entries(read_matrix_market(mtext));
    std::istringstream btext(in.read(o.rhs));
    const std::vector<double> b = read_vector(btext);
    if (b.size() != m.size()) throw UsageError("right-hand side length differs from the matrix size");
    SolverConfig config;
    config.tau = o.tau;
    config.seed = require_seed(o, "solve");
    config.m_prime = o.m_prime;
    config.t_override = o.t;
    config.threads = o.threads;
    config.spanner = algo_of(o);
    if (o.max_iter) config.max_iterations = *o.max_iter;
    const InverseChain chain = build_chain(m, config);
    Outcome out;
    try {
        const SolveResult r = solve(m, chain, b, config);
        std::ostringstream xs;
        write_vector(xs, r.x);
        out.primary = xs.str();
        out.report = report::to_json(r);
        if (!r.converged) out.status = kExitVerifyFailed;
    } catch (const StagnationError& e) {
        out.report = {{"converged", false}, {"error", e.what()}, {"residual_history", e.history()}};
        out.status = kExitVerifyFailed;
    }
    out.report["chain"] = report::to_json(chain);
    return out;
}

Outcome run_experiment(const Options& o, Inputs& in) {
    const WeightedGraph g = in.graph(o.graph);
    const SampleConfig config = sample_config(o, "experiment");
    const auto rows = concentration_experiment(g, o.eps, o.schedule, o.num_seeds, config);
    Json table = Json::array();
    bool monotone = true;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        table.push_back(report::to_json(rows[i]));
        if (i > 0 && rows[i].median > rows[i - 1].median) monotone = false;
    }
    Outcome out;
    out.primary = dump(Json{{"epsilon", o.eps}, {"rows", table}});
    out.report = {{"rows", rows.size()}, {"median_non_increasing", monotone}};
    return out;
}

void add_common(CLI::App* sub, Options& o, bool seeded) {
    sub->add_option("--out", o.out, "primary output file (default stdout)");
    sub->add_option("--report", o.report, "JSON report file (default stderr)");
    sub->add_option("--manifest", o.manifest, "run manifest file (default <out>.manifest.json)");
    sub->add_option("--threads", o.threads, "worker threads")->check(CLI::Range(1u, 256u));
    if (seeded) sub->add_option("--seed", o.seed, "random seed (required)");
}

struct Parsed {
    std::string command;
    Options options;
};

/// Builds the parser; returns the chosen subcommand or throws CLI::ParseError.
Parsed parse(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, int& exit_code) {
    Parsed p;
    Options& o = p.options;
    CLI::App app{"spectral sparsification toolkit", "sps"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("gen", "generate a test graph");
    add_common(gen, o, true);
    gen->add_option("--model", o.model, "erdos-renyi|grid2d|complete|path|cycle|dumbbell")->required();
    gen->add_option("--n", o.n);
    gen->add_option("--p", o.p);
    gen->add_option("--rows", o.rows);
    gen->add_option("--cols", o.cols);
    gen->add_option("--clique", o.clique);
    gen->add_option("--path-len", o.path_len);
    gen->add_option("--weights", o.weights, "unit|uniform|loguniform");
    gen->add_option("--wmin", o.wmin);
    gen->add_option("--wmax", o.wmax);

    auto* spanner = app.add_subcommand("spanner", "build a (2k-1)-spanner");
    add_common(spanner, o, true);
    spanner->add_option("--graph", o.graph)->required();
    spanner->add_option("--algo", o.algo, "greedy|baswana-sen");
    spanner->add_option("--k", o.k)->check(CLI::PositiveNumber);

    auto* bundle = app.add_subcommand("bundle", "build a t-bundle spanner");
    add_common(bundle, o, true);
    bundle->add_option("--graph", o.graph)->required();
    bundle->add_option("--t", o.t)->required()->check(CLI::PositiveNumber);
    bundle->add_option("--algo", o.algo, "greedy|baswana-sen");
    bundle->add_flag("--certify", o.certify, "run the bundle certificate");

    auto* sparsify = app.add_subcommand("sparsify", "spectral sparsification");
    add_common(sparsify, o, true);
    sparsify->add_option("--graph", o.graph)->required();
    sparsify->add_option("--eps", o.eps);
    sparsify->add_option("--rho", o.rho);
    sparsify->add_option("--t,--t-override", o.t, "bundle size override")->check(CLI::PositiveNumber);
    sparsify->add_option("--algo", o.algo, "greedy|baswana-sen");
    sparsify->add_flag("--single", o.single, "one sampling round only");
    sparsify->add_flag("--measure,--measure-spectral", o.measure, "measure spectral bounds densely");

    auto* verify = app.add_subcommand("verify", "check a spanner, bundle or sparsifier");
    add_common(verify, o, false);
    verify->add_option("--graph", o.graph)->required();
    verify->add_option("--spanner", o.spanner_file);
    verify->add_option("--bundle", o.bundle_file);
    verify->add_option("--sparsifier", o.sparsifier_file);
    verify->add_option("--k", o.k)->check(CLI::PositiveNumber);
    verify->add_option("--eps", o.eps);

    auto* simulate = app.add_subcommand("simulate", "run a distributed protocol");
    add_common(simulate, o, true);
    simulate->add_option("--protocol", o.protocol, "spanner|bundle")->required();
    simulate->add_option("--graph", o.graph)->required();
    simulate->add_option("--k", o.k)->check(CLI::PositiveNumber);
    simulate->add_option("--t", o.t)->check(CLI::PositiveNumber);
    simulate->add_option("--word-budget", o.word_budget);
    simulate->add_option("--trace", o.trace, "JSON-lines message trace file");
    simulate->add_flag("--check", o.check, "compare with the shared-memory builder");

    auto* solve_cmd = app.add_subcommand("solve", "solve an SDD system");
    add_common(solve_cmd, o, true);
    solve_cmd->add_option("--matrix", o.matrix)->required();
    solve_cmd->add_option("--rhs", o.rhs)->required();
    solve_cmd->add_option("--tau", o.tau);
    solve_cmd->add_option("--m-prime", o.m_prime);
    solve_cmd->add_option("--t", o.t)->check(CLI::PositiveNumber);
    solve_cmd->add_option("--max-iter", o.max_iter);
    solve_cmd->add_option("--algo", o.algo, "greedy|baswana-sen");

    auto* experiment = app.add_subcommand("experiment", "concentration experiment");
    add_common(experiment, o, true);
    experiment->add_option("--graph", o.graph)->required();
    experiment->add_option("--eps", o.eps);
    experiment->add_option("--t-schedule", o.schedule)->delimiter(',');
    experiment->add_option("--seeds", o.num_seeds);
    experiment->add_option("--algo", o.algo, "greedy|baswana-sen");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        exit_code = app.exit(e, out, err);
        if (exit_code != 0) exit_code = kExitUsage;
        return p;
    }
    for (auto* sub : app.get_subcommands()) p.command = sub->get_name();
    exit_code = -1;
    return p;
}

Outcome execute(const Parsed& p, Inputs& in) {
    const Options& o = p.options;
    if (p.command == "gen") return run_gen(o, in);
    if (p.command == "spanner") return run_spanner(o, in);
    if (p.command == "bundle") return run_bundle(o, in);
    if (p.command == "sparsify") return run_sparsify(o, in);
    if (p.command == "verify") return run_verify(o, in);
    if (p.command == "simulate") return run_simulate(o, in);
    if (p.command == "solve") return run_solve(o, in);
    if (p.command == "experiment") return run_experiment(o, in);
    throw UsageError("unknown command " + p.command);
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot write " + path);
    f << text;
}

void emit(std::ostream& stream, const std::string& path, const std::string& text) {
    if (path.empty())
        stream << text;
    else
        write_text(path, text);
}

/// Replaces (or appends) "--threads N" in a stored argument list.
std::vector<std::string> with_threads(std::vector<std::string> args, unsigned threads) {
    for (std::size_t i = 0; i + 1 < args.size(); ++i)
        if (args[i] == "--threads") {
            args[i + 1] = std::to_string(threads);
            return args;
        }
    args.push_back("--threads");
    args.push_back(std::to_string(threads));
    return args;
}

int replay(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"re-run a manifest and compare the output hash", "sps replay"};
    std::string manifest_path, out_path, report_path;
    std::optional<unsigned> threads;
    app.add_option("manifest", manifest_path)->required();
    app.add_option("--out", out_path);
    app.add_option("--report", report_path);
    app.add_option("--threads", threads)->check(CLI::Range(1u, 256u));
    std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }
    std::ifstream mf(manifest_path);
    if (!mf) throw UsageError("cannot open " + manifest_path);
    const report::RunManifest m = report::manifest_from_json(Json::parse(mf));
    std::vector<std::string> run_args = threads ? with_threads(m.args, *threads) : m.args;

    int code = -1;
    std::ostringstream sink;
    Parsed p = parse(run_args, sink, sink, code);
    if (code != -1) throw UsageError("manifest arguments do not parse: " + sink.str());
    Inputs in;
    Outcome o = execute(p, in);
    Json rep{{"manifest", manifest_path}};
    std::vector<std::string> changed;
    for (const auto& [path, hash] : m.input_hashes) {
        auto it = in.hashes().find(path);
        if (it == in.hashes().end() || it->second != hash) changed.push_back(path);
    }
    const std::string actual = report::content_hash(o.primary);
    const bool match = changed.empty() && actual == m.output_hash;
    rep["changed_inputs"] = changed;
    rep["expected_output_hash"] = m.output_hash;
    rep["actual_output_hash"] = actual;
    rep["match"] = match;
    emit(out, out_path, o.primary);
    emit(err, report_path, dump(rep));
    return match ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        if (!args.empty() && args.front() == "replay") return replay(args, out, err);
        int code = -1;
        Parsed p = parse(args, out, err, code);
        if (code != -1) return code;
        Inputs in;
        Outcome o = execute(p, in);

        report::RunManifest m;
        m.command = p.command;
        m.args = args;
        m.seed = p.options.seed;
        m.input_hashes = in.hashes();
        m.output_hash = report::content_hash(o.primary);
        const Json manifest = report::to_json(m);

        emit(out, p.options.out, o.primary);
        std::string manifest_path = p.options.manifest;
        if (manifest_path.empty() && !p.options.out.empty()) manifest_path = p.options.out + ".manifest.json";
        if (!manifest_path.empty()) write_text(manifest_path, dump(manifest));
        o.report["command"] = p.command;
        o.report["exit_code"] = o.status;
        o.report["manifest"] = manifest;
        emit(err, p.options.report, dump(o.report));
        return o.status;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const nlohmann::json::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

int dispatch(int argc, const char* const* argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return dispatch(args, std::cout, std::cerr);
}

}  // namespace sps::cli
