#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rbubble/bubble.hpp"
#include "rbubble/errors.hpp"
#include "rbubble/fastx.hpp"
#include "rbubble/graph.hpp"
#include "rbubble/graph_io.hpp"
#include "rbubble/repeat_model.hpp"
#include "rbubble/sequence.hpp"
#include "rbubble/version.hpp"

using nlohmann::json;
using namespace rbubble;

namespace {

json base_config(const std::string& command) {
    json cfg;
    cfg["tool"] = "rbubble";
    cfg["version"] = kVersion;
    cfg["command"] = command;
    return cfg;
}

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IOError("cannot write " + path);
    out << j.dump(2) << '\n';
}

// --source / --sink accept a vertex label or a numeric id
VertexId resolve_vertex(const DeBruijnGraph& g, const std::string& token) {
    if (auto v = g.find_vertex(token)) return *v;
    try {
        std::size_t pos = 0;
        unsigned long id = std::stoul(token, &pos);
        if (pos == token.size() && id < g.vertex_count()) return static_cast<VertexId>(id);
    } catch (const std::exception&) {
    }
    throw NoSuchVertexError(token);
}

std::vector<std::string> load_reads(const std::vector<std::string>& paths) {
    std::vector<std::string> raw;
    for (const std::string& p : paths) {
        for (FastxRecord& rec : read_fastx(p)) raw.push_back(std::move(rec.seq));
    }
    return raw;
}

struct BuildOpts {
    std::vector<std::string> reads;
    unsigned k = 31;
    std::string policy = "split";
    std::string out;
    std::string format = "gfa";
    bool canonical = false;
};

void write_graph_files(const std::string& prefix, const std::string& format,
                       const DeBruijnGraph& g, const json& cfg, std::size_t skipped_reads) {
    if (format == "dbg1") {
        write_dbg1(prefix + ".dbg1", g);
    } else {
        write_gfa(prefix + ".gfa", g, {"config " + cfg.dump()});
    }
    GraphStats st = stats(g);
    json out;
    out["config"] = cfg;
    out["vertex_count"] = st.vertex_count;
    out["arc_count"] = st.arc_count;
    out["gamma"] = st.gamma;
    out["compressible_ratio"] = st.compressible_ratio;
    out["skipped_reads"] = skipped_reads;
    write_json(prefix + ".stats.json", out);
}

int run_build(const BuildOpts& o) {
    if (o.canonical) {
        throw InvalidParameterError("--canonical is reserved and not implemented");
    }
    json cfg = base_config("build");
    cfg["reads"] = o.reads;
    cfg["k"] = o.k;
    cfg["policy"] = o.policy;
    cfg["format"] = o.format;

    NPolicy policy = o.policy == "reject" ? NPolicy::kReject : NPolicy::kSplit;
    std::vector<Sequence> cleaned = validate_reads(load_reads(o.reads), policy);
    std::vector<std::string> seqs;
    seqs.reserve(cleaned.size());
    for (Sequence& s : cleaned) seqs.push_back(s.str());
    BuildResult built = build_graph(seqs, o.k);
    write_graph_files(o.out, o.format, built.graph, cfg, built.skipped_reads);
    std::cerr << "built graph: " << built.graph.vertex_count() << " vertices, "
              << built.graph.arc_count() << " arcs, gamma " << gamma(built.graph) << "\n";
    return 0;
}

struct CompressOpts {
    std::string graph;
    std::string out;
    std::string format = "gfa";
};

int run_compress(const CompressOpts& o) {
    json cfg = base_config("compress");
    cfg["graph"] = o.graph;
    cfg["format"] = o.format;
    DeBruijnGraph g = read_graph(o.graph);
    DeBruijnGraph c = compress(g);
    write_graph_files(o.out, o.format, c, cfg, 0);
    std::cerr << "compressed: " << g.vertex_count() << " -> " << c.vertex_count()
              << " vertices\n";
    return 0;
}

struct SimulateOpts {
    std::size_t m = 20;
    std::size_t n = 100;
    double alpha = 0.05;
    std::uint64_t seed = 1;
    std::string out;
};

int run_simulate(const SimulateOpts& o) {
    json cfg = base_config("simulate");
    cfg["m"] = o.m;
    cfg["n"] = o.n;
    cfg["alpha"] = o.alpha;
    cfg["seed"] = o.seed;
    RepeatFamily fam = generate_repeats(o.m, o.n, o.alpha, o.seed);
    std::vector<FastxRecord> records;
    for (std::size_t i = 0; i < fam.copies.size(); ++i) {
        FastxRecord rec;
        rec.name = "repeat_" + std::to_string(i + 1);
        rec.desc = "mutations=" + std::to_string(hamming_distance(fam.copies[i], fam.seed));
        rec.seq = fam.copies[i];
        records.push_back(std::move(rec));
    }
    write_fasta(o.out, records, {"config " + cfg.dump(), "seed_sequence " + fam.seed});
    return 0;
}

struct GammaOpts {
    std::size_t m = 50;
    std::size_t n = 200;
    unsigned k = 15;
    double alpha = 0.05;
    std::size_t trials = 10;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    std::string out;
};

int run_gamma(const GammaOpts& o) {
    json cfg = base_config("gamma-experiment");
    cfg["m"] = o.m;
    cfg["n"] = o.n;
    cfg["k"] = o.k;
    cfg["alpha"] = o.alpha;
    cfg["trials"] = o.trials;
    cfg["seed"] = o.seed;
    unsigned threads = o.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : o.threads;
    GammaExperimentReport rep = gamma_experiment(o.m, o.n, o.k, o.alpha, o.trials, o.seed, threads);
    if (rep.regime_warning) {
        std::cerr << "warning: m(n-k+2) > 4^k, the random baseline will see k-mer collisions\n";
    }

    std::ofstream csv(o.out + ".csv", std::ios::binary);
    if (!csv) throw IOError("cannot write " + o.out + ".csv");
    csv << "# config " << cfg.dump() << "\n";
    csv << "trial,gamma_random,gamma_model\n";
    for (std::size_t t = 0; t < rep.per_trial.size(); ++t) {
        csv << t << ',' << rep.per_trial[t].gamma_random << ',' << rep.per_trial[t].gamma_model
            << "\n";
    }

    json out;
    out["config"] = cfg;
    out["regime_warning"] = rep.regime_warning;
    out["mean_gamma_random"] = rep.mean_gamma_random;
    out["mean_gamma_model"] = rep.mean_gamma_model;
    out["ratio"] = rep.ratio;
    json trials = json::array();
    for (const GammaTrial& t : rep.per_trial) {
        trials.push_back({{"gamma_random", t.gamma_random}, {"gamma_model", t.gamma_model}});
    }
    out["per_trial"] = trials;
    write_json(o.out + ".json", out);
    std::cerr << "gamma experiment: mean random " << rep.mean_gamma_random << ", mean model "
              << rep.mean_gamma_model << ", ratio " << rep.ratio << "\n";
    return 0;
}

struct BubblesOpts {
    std::string graph;
    double alpha1 = 100.0;
    double alpha2 = -1.0;  // default: same as alpha1
    std::uint32_t b = 5;
    bool b_cap = false;
    double timeout = 30.0;
    std::uint64_t max_nodes = 0;  // 0 = unlimited
    std::string source, sink;
    unsigned threads = 0;
    std::string out;
};

json bubble_to_json(const DeBruijnGraph& g, const Bubble& b, bool spellable) {
    json j;
    j["sink"] = b.sink;
    j["path1"] = b.path1;
    j["path2"] = b.path2;
    j["len1"] = b.len1;
    j["len2"] = b.len2;
    j["branch1"] = b.branch1;
    j["branch2"] = b.branch2;
    if (spellable) {
        j["seq1"] = spell_path(g, b.path1);
        j["seq2"] = spell_path(g, b.path2);
    }
    return j;
}

int run_bubbles(const BubblesOpts& o) {
    json cfg = base_config("bubbles");
    cfg["graph"] = o.graph;
    cfg["alpha1"] = o.alpha1;
    cfg["alpha2"] = o.alpha2 < 0 ? o.alpha1 : o.alpha2;
    cfg["b"] = o.b_cap ? json("cap") : json(o.b);
    cfg["timeout"] = o.timeout;
    cfg["max_nodes"] = o.max_nodes;
    if (!o.source.empty()) cfg["source"] = o.source;
    if (!o.sink.empty()) cfg["sink"] = o.sink;

    DeBruijnGraph g = read_graph(o.graph);
    bool spellable = check_overlap_invariant(g);

    MultiSourceOptions opt;
    opt.alpha1 = o.alpha1;
    opt.alpha2 = o.alpha2 < 0 ? o.alpha1 : o.alpha2;
    opt.b = o.b_cap ? static_cast<std::uint32_t>(g.vertex_count()) : o.b;
    opt.per_source_limits.timeout_seconds = o.timeout;
    if (o.max_nodes > 0) opt.per_source_limits.max_nodes = o.max_nodes;
    if (!o.sink.empty()) opt.sink = resolve_vertex(g, o.sink);
    opt.threads = o.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : o.threads;

    std::vector<SourceRun> runs;
    if (!o.source.empty()) {
        SourceRun run;
        run.source = resolve_vertex(g, o.source);
        BubbleQuery q{run.source, opt.alpha1, opt.alpha2, opt.b};
        run.bubbles = enumerate_bubbles_collect(g, q, opt.sink, opt.per_source_limits, &run.stats);
        runs.push_back(std::move(run));
    } else {
        runs = enumerate_all_sources(g, opt);
    }

    std::ofstream jsonl(o.out + ".jsonl", std::ios::binary);
    if (!jsonl) throw IOError("cannot write " + o.out + ".jsonl");
    json head;
    head["record"] = "config";
    head["config"] = cfg;
    jsonl << head.dump() << "\n";

    std::vector<FastxRecord> fasta;
    bool all_complete = true;
    std::size_t index = 0, total_nodes = 0;
    json sources = json::array();
    for (const SourceRun& run : runs) {
        all_complete = all_complete && run.stats.complete;
        total_nodes += run.stats.nodes;
        for (std::size_t i = 0; i < run.bubbles.size(); ++i) {
            const Bubble& b = run.bubbles[i];
            json rec = bubble_to_json(g, b, spellable);
            rec["record"] = "bubble";
            rec["index"] = index;
            rec["source"] = run.source;
            rec["t_ms"] = run.stats.emission_seconds[i] * 1000.0;
            jsonl << rec.dump() << "\n";
            if (spellable) {
                FastxRecord upper, lower;
                upper.name = "bubble_" + std::to_string(index) + "_upper";
                upper.desc = "source=" + std::to_string(run.source) +
                             " sink=" + std::to_string(b.sink) + " len=" + format_weight(b.len1) +
                             " branch=" + std::to_string(b.branch1);
                upper.seq = spell_path(g, b.path1);
                lower.name = "bubble_" + std::to_string(index) + "_lower";
                lower.desc = "source=" + std::to_string(run.source) +
                             " sink=" + std::to_string(b.sink) + " len=" + format_weight(b.len2) +
                             " branch=" + std::to_string(b.branch2);
                lower.seq = spell_path(g, b.path2);
                fasta.push_back(std::move(upper));
                fasta.push_back(std::move(lower));
            }
            ++index;
        }
        json s;
        s["source"] = run.source;
        s["bubbles"] = run.bubbles.size();
        s["nodes"] = run.stats.nodes;
        s["complete"] = run.stats.complete;
        s["frontier_depth"] = run.stats.frontier_depth;
        double max_gap = 0.0, prev = 0.0;
        for (double t : run.stats.emission_seconds) {
            max_gap = std::max(max_gap, t - prev);
            prev = t;
        }
        max_gap = std::max(max_gap, run.stats.elapsed_seconds - prev);
        json timing;
        timing["elapsed_s"] = run.stats.elapsed_seconds;
        timing["max_gap_s"] = max_gap;
        timing["mean_gap_s"] = run.stats.emissions == 0
                                   ? 0.0
                                   : run.stats.elapsed_seconds /
                                         static_cast<double>(run.stats.emissions);
        s["timing"] = timing;
        sources.push_back(std::move(s));
    }
    jsonl.close();

    write_fasta(o.out + ".fa", fasta, {"config " + cfg.dump()});

    json summary;
    summary["config"] = cfg;
    summary["complete"] = all_complete;
    summary["sources"] = sources;
    summary["totals"] = {
        {"sources", runs.size()}, {"bubbles", index}, {"nodes", total_nodes}};
    write_json(o.out + ".summary.json", summary);

    std::cerr << "bubbles: " << index << " from " << runs.size() << " sources"
              << (all_complete ? "" : " (partial: timeout or node budget hit)") << "\n";
    return all_complete ? 0 : 1;
}

struct OracleOpts {
    std::string graph;
    std::string source;
    double alpha1 = 10.0;
    double alpha2 = -1.0;
    std::uint32_t b = 5;
    std::string out;
};

int run_oracle(const OracleOpts& o) {
    json cfg = base_config("oracle");
    cfg["graph"] = o.graph;
    cfg["source"] = o.source;
    cfg["alpha1"] = o.alpha1;
    cfg["alpha2"] = o.alpha2 < 0 ? o.alpha1 : o.alpha2;
    cfg["b"] = o.b;
    DeBruijnGraph g = read_graph(o.graph);
    bool spellable = check_overlap_invariant(g);
    BubbleQuery q{resolve_vertex(g, o.source), o.alpha1, o.alpha2 < 0 ? o.alpha1 : o.alpha2, o.b};
    std::vector<Bubble> bubbles = oracle_enumerate(g, q);
    json out;
    out["config"] = cfg;
    json arr = json::array();
    for (const Bubble& b : bubbles) arr.push_back(bubble_to_json(g, b, spellable));
    out["bubbles"] = arr;
    write_json(o.out, out);
    std::cerr << "oracle: " << bubbles.size() << " bubbles\n";
    return 0;
}

struct PlantedOpts {
    PlantedSpec spec;
    std::uint64_t seed = 1;
    std::string out;
};

int run_planted(const PlantedOpts& o) {
    json cfg = base_config("planted-bubble");
    cfg["m"] = o.spec.repeat_copies;
    cfg["n"] = o.spec.repeat_length;
    cfg["alpha"] = o.spec.alpha;
    cfg["k"] = o.spec.k;
    cfg["flank"] = o.spec.flank_length;
    cfg["exon"] = o.spec.exon_length;
    cfg["max_branch"] = o.spec.max_branch;
    cfg["seed"] = o.seed;

    PlantedInstance inst = planted_bubble_graph(o.spec, o.seed);
    std::vector<FastxRecord> reads;
    for (std::size_t i = 0; i < inst.reads.size(); ++i) {
        reads.push_back({"read_" + std::to_string(i + 1), "", inst.reads[i]});
    }
    write_fasta(o.out + ".reads.fa", reads, {"config " + cfg.dump()});
    write_gfa(o.out + ".gfa", inst.graph, {"config " + cfg.dump()});

    json truth;
    truth["config"] = cfg;
    truth["raw_vertices"] = inst.raw_vertices;
    truth["raw_arcs"] = inst.raw_arcs;
    truth["source"] = inst.source;
    truth["sink"] = inst.sink;
    truth["attempts"] = inst.attempts;
    truth["upper_sequence"] = inst.upper_sequence;
    truth["lower_sequence"] = inst.lower_sequence;
    truth["planted"] = bubble_to_json(inst.graph, inst.planted, true);
    write_json(o.out + ".truth.json", truth);
    std::cerr << "planted instance: " << inst.raw_vertices << " raw vertices, source "
              << inst.source << ", sink " << inst.sink << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"de Bruijn graph toolkit: repeat statistics and branching-bounded bubbles"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    BuildOpts build_opts;
    auto* cmd_build = app.add_subcommand("build", "build a de Bruijn graph from reads");
    cmd_build->add_option("--reads", build_opts.reads, "FASTA/FASTQ files, plain or gzip")
        ->required()
        ->expected(-1);
    cmd_build->add_option("--k", build_opts.k, "k-mer size (2..63)")->capture_default_str();
    cmd_build->add_option("--policy", build_opts.policy, "non-ACGT handling: split or reject")
        ->check(CLI::IsMember({"split", "reject"}))
        ->capture_default_str();
    cmd_build->add_option("--out", build_opts.out, "output prefix")->required();
    cmd_build->add_option("--format", build_opts.format, "graph format: gfa or dbg1")
        ->check(CLI::IsMember({"gfa", "dbg1"}))
        ->capture_default_str();
    cmd_build->add_flag("--canonical", build_opts.canonical,
                        "reserved: reverse-complement canonicalization (not implemented)");

    CompressOpts compress_opts;
    auto* cmd_compress = app.add_subcommand("compress", "contract all compressible arcs");
    cmd_compress->add_option("--graph", compress_opts.graph, "input graph (GFA or DBG1)")
        ->required();
    cmd_compress->add_option("--out", compress_opts.out, "output prefix")->required();
    cmd_compress->add_option("--format", compress_opts.format, "graph format: gfa or dbg1")
        ->check(CLI::IsMember({"gfa", "dbg1"}))
        ->capture_default_str();

    SimulateOpts sim_opts;
    auto* cmd_sim = app.add_subcommand("simulate", "generate a uniform repeat family");
    cmd_sim->add_option("--m", sim_opts.m, "number of copies")->capture_default_str();
    cmd_sim->add_option("--n", sim_opts.n, "copy length")->capture_default_str();
    cmd_sim->add_option("--alpha", sim_opts.alpha, "per-position mutation rate")
        ->capture_default_str();
    cmd_sim->add_option("--seed", sim_opts.seed, "RNG seed")->capture_default_str();
    cmd_sim->add_option("--out", sim_opts.out, "output FASTA path")->required();

    GammaOpts gamma_opts;
    auto* cmd_gamma = app.add_subcommand(
        "gamma-experiment", "compare compressible arcs: random reads vs repeat model");
    cmd_gamma->add_option("--m", gamma_opts.m, "reads / copies per trial")->capture_default_str();
    cmd_gamma->add_option("--n", gamma_opts.n, "read length")->capture_default_str();
    cmd_gamma->add_option("--k", gamma_opts.k, "k-mer size")->capture_default_str();
    cmd_gamma->add_option("--alpha", gamma_opts.alpha, "model mutation rate")
        ->capture_default_str();
    cmd_gamma->add_option("--trials", gamma_opts.trials, "number of trials")
        ->capture_default_str();
    cmd_gamma->add_option("--seed", gamma_opts.seed, "RNG seed")->capture_default_str();
    cmd_gamma->add_option("--threads", gamma_opts.threads, "worker threads (0 = all cores)")
        ->capture_default_str();
    cmd_gamma->add_option("--out", gamma_opts.out, "output prefix")->required();

    BubblesOpts bub_opts;
    auto* cmd_bub = app.add_subcommand("bubbles", "enumerate branching-bounded bubbles");
    cmd_bub->add_option("--graph", bub_opts.graph, "input graph (GFA or DBG1)")->required();
    cmd_bub->add_option("--alpha1", bub_opts.alpha1, "length bound for the longer path")
        ->capture_default_str();
    cmd_bub->add_option("--alpha2", bub_opts.alpha2, "length bound for the shorter path "
                        "(default: alpha1)");
    cmd_bub->add_option("--b", bub_opts.b, "max branching vertices per path")
        ->capture_default_str();
    cmd_bub->add_flag("--b-cap", bub_opts.b_cap, "unbounded branching (b = |V|)");
    cmd_bub->add_option("--timeout", bub_opts.timeout, "seconds per source before partial stop")
        ->capture_default_str();
    cmd_bub->add_option("--max-nodes", bub_opts.max_nodes,
                        "recursion node budget per source (0 = unlimited)");
    cmd_bub->add_option("--source", bub_opts.source, "restrict to one source (label or id)");
    cmd_bub->add_option("--sink", bub_opts.sink, "only report bubbles ending here (label or id)");
    cmd_bub->add_option("--threads", bub_opts.threads, "worker threads (0 = all cores)");
    cmd_bub->add_option("--out", bub_opts.out, "output prefix")->required();

    OracleOpts oracle_opts;
    auto* cmd_oracle =
        app.add_subcommand("oracle", "brute-force bubble enumeration (max 20 vertices)");
    cmd_oracle->add_option("--graph", oracle_opts.graph, "input graph")->required();
    cmd_oracle->add_option("--source", oracle_opts.source, "source vertex (label or id)")
        ->required();
    cmd_oracle->add_option("--alpha1", oracle_opts.alpha1, "length bound for the longer path")
        ->capture_default_str();
    cmd_oracle->add_option("--alpha2", oracle_opts.alpha2, "length bound for the shorter path");
    cmd_oracle->add_option("--b", oracle_opts.b, "max branching vertices per path")
        ->capture_default_str();
    cmd_oracle->add_option("--out", oracle_opts.out, "output JSON path")->required();

    PlantedOpts planted_opts;
    auto* cmd_planted = app.add_subcommand(
        "planted-bubble", "synthesize a repeat trap with a known bubble");
    cmd_planted->add_option("--m", planted_opts.spec.repeat_copies, "repeat copies")
        ->capture_default_str();
    cmd_planted->add_option("--n", planted_opts.spec.repeat_length, "repeat length")
        ->capture_default_str();
    cmd_planted->add_option("--alpha", planted_opts.spec.alpha, "repeat mutation rate")
        ->capture_default_str();
    cmd_planted->add_option("--k", planted_opts.spec.k, "k-mer size")->capture_default_str();
    cmd_planted->add_option("--flank", planted_opts.spec.flank_length, "flank length")
        ->capture_default_str();
    cmd_planted->add_option("--exon", planted_opts.spec.exon_length, "inserted exon length")
        ->capture_default_str();
    cmd_planted->add_option("--max-branch", planted_opts.spec.max_branch,
                            "branching budget the planted paths must fit")
        ->capture_default_str();
    cmd_planted->add_option("--seed", planted_opts.seed, "RNG seed")->capture_default_str();
    cmd_planted->add_option("--out", planted_opts.out, "output prefix")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(cmd_build)) return run_build(build_opts);
        if (app.got_subcommand(cmd_compress)) return run_compress(compress_opts);
        if (app.got_subcommand(cmd_sim)) return run_simulate(sim_opts);
        if (app.got_subcommand(cmd_gamma)) return run_gamma(gamma_opts);
        if (app.got_subcommand(cmd_bub)) return run_bubbles(bub_opts);
        if (app.got_subcommand(cmd_oracle)) return run_oracle(oracle_opts);
        if (app.got_subcommand(cmd_planted)) return run_planted(planted_opts);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
