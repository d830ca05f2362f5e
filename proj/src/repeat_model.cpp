#include "rbubble/repeat_model.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "rbubble/errors.hpp"
#include "rbubble/sequence.hpp"

namespace rbubble {

RepeatFamily generate_repeats(std::size_t m, std::size_t n, double alpha, std::uint64_t rng_seed) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidAlphaError(alpha);
    if (m == 0) throw InvalidParameterError("repeat family needs m >= 1");
    if (n == 0) throw InvalidParameterError("repeat family needs n >= 1");
    Rng rng(rng_seed);
    RepeatFamily fam;
    fam.alpha = alpha;
    fam.rng_seed = rng_seed;
    fam.seed.resize(n);
    for (std::size_t j = 0; j < n; ++j) fam.seed[j] = code_base(static_cast<std::uint8_t>(rng.below(4)));
    fam.copies.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        std::string copy = fam.seed;
        for (std::size_t j = 0; j < n; ++j) {
            if (rng.bernoulli(alpha)) {
                std::uint8_t shift = static_cast<std::uint8_t>(1 + rng.below(3));
                copy[j] = code_base(static_cast<std::uint8_t>((base_code(fam.seed[j]) + shift) & 3));
            }
        }
        fam.copies.push_back(std::move(copy));
    }
    return fam;
}

double mean_copy_distance(const RepeatFamily& family) {
    if (family.copies.empty()) return 0.0;
    std::size_t total = 0;
    for (const std::string& c : family.copies) total += hamming_distance(c, family.seed);
    return static_cast<double>(total) / static_cast<double>(family.copies.size());
}

std::vector<std::string> random_reads(std::size_t m, std::size_t n, Rng& rng) {
    std::vector<std::string> reads(m);
    for (std::string& r : reads) {
        r.resize(n);
        for (std::size_t j = 0; j < n; ++j) r[j] = code_base(static_cast<std::uint8_t>(rng.below(4)));
    }
    return reads;
}

std::size_t count_boundary_rigid(const std::vector<std::string>& reads, unsigned k) {
    check_k(k);
    // per k-mer: bitmask over {A,C,G,T} of observed following / preceding symbols
    std::unordered_map<std::string, std::uint8_t> succ, pred;
    std::unordered_set<std::string> windows;  // distinct (k+1)-mers
    for (const std::string& r : reads) {
        if (r.size() < k) continue;
        for (std::size_t i = 0; i + k <= r.size(); ++i) {
            if (i + k < r.size()) succ[r.substr(i, k)] |= static_cast<std::uint8_t>(1u << base_code(r[i + k]));
            if (i > 0) pred[r.substr(i, k)] |= static_cast<std::uint8_t>(1u << base_code(r[i - 1]));
        }
        for (std::size_t i = 0; i + k + 1 <= r.size(); ++i) windows.insert(r.substr(i, k + 1));
    }
    auto one_bit = [](std::uint8_t mask) { return mask != 0 && (mask & (mask - 1)) == 0; };
    std::size_t count = 0;
    for (const std::string& w : windows) {
        bool homopolymer = w.find_first_not_of(w[0]) == std::string::npos;
        if (homopolymer) continue;  // would be a self-loop, excluded from gamma
        if (one_bit(succ[w.substr(0, k)]) && one_bit(pred[w.substr(1, k)])) ++count;
    }
    return count;
}

GammaExperimentReport gamma_experiment(std::size_t m, std::size_t n, unsigned k, double alpha,
                                       std::size_t trials, std::uint64_t rng_seed,
                                       unsigned threads) {
    check_k(k);
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidAlphaError(alpha);
    if (trials == 0) throw InvalidParameterError("trials must be >= 1");
    if (m == 0) throw InvalidParameterError("m must be >= 1");
    if (n < k + 1) throw InvalidParameterError("n must be at least k+1 so the graph has arcs");

    GammaExperimentReport rep;
    rep.m = m;
    rep.n = n;
    rep.k = k;
    rep.alpha = alpha;
    rep.trials = trials;
    rep.rng_seed = rng_seed;
    rep.regime_warning =
        static_cast<long double>(m) * static_cast<long double>(n - k + 2) > std::ldexp(1.0L, 2 * static_cast<int>(k));
    rep.per_trial.resize(trials);

    std::atomic<std::size_t> cursor{0};
    auto worker = [&]() {
        while (true) {
            std::size_t t = cursor.fetch_add(1);
            if (t >= trials) break;
            Rng rng(derive_seed(rng_seed, 2 * t));
            std::vector<std::string> uniform = random_reads(m, n, rng);
            rep.per_trial[t].gamma_random = gamma(build_graph(uniform, k).graph);
            RepeatFamily fam = generate_repeats(m, n, alpha, derive_seed(rng_seed, 2 * t + 1));
            rep.per_trial[t].gamma_model = gamma(build_graph(fam.copies, k).graph);
        }
    };
    threads = std::max(1u, threads);
    if (threads == 1 || trials == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < std::min<std::size_t>(threads, trials); ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    double sum_r = 0.0, sum_m = 0.0;
    for (const GammaTrial& t : rep.per_trial) {
        sum_r += static_cast<double>(t.gamma_random);
        sum_m += static_cast<double>(t.gamma_model);
    }
    rep.mean_gamma_random = sum_r / static_cast<double>(trials);
    rep.mean_gamma_model = sum_m / static_cast<double>(trials);
    rep.ratio = rep.mean_gamma_random == 0.0 ? 0.0 : rep.mean_gamma_model / rep.mean_gamma_random;
    return rep;
}

DeBruijnGraph ring_gadget(std::uint32_t x) {
    if (x < 1) throw InvalidParameterError("ring gadget needs x >= 1");
    DeBruijnGraph g(2);
    std::uint32_t nv = 2 * x;
    for (std::uint32_t i = 0; i < nv; ++i) g.add_vertex("R" + std::to_string(i));
    for (std::uint32_t i = 0; i < x; ++i) {
        g.add_arc(2 * i, 2 * i + 1, 1.0, 1);
        g.add_arc(2 * i, (2 * i + nv - 1) % nv, 1.0, 1);
    }
    return g;
}

namespace {

// Follows the unique arc chain from `from` whose spelled string matches
// `expected`; returns the vertex path or empty on mismatch. Out-arcs of a
// de Bruijn vertex differ in their first extension character, so the next
// step is always unambiguous.
std::vector<VertexId> walk_spelling(const DeBruijnGraph& g, VertexId from,
                                    const std::string& expected, VertexId to) {
    const unsigned k = g.k();
    std::vector<VertexId> path{from};
    std::size_t pos = g.label(from).size();
    if (expected.compare(0, pos, g.label(from)) != 0) return {};
    while (pos < expected.size() || path.back() != to) {
        VertexId next = static_cast<VertexId>(-1);
        for (const Arc& a : g.out(path.back())) {
            const std::string& l = g.label(a.to);
            std::size_t ext = l.size() - (k - 1);
            if (pos + ext <= expected.size() && expected.compare(pos, ext, l, k - 1, ext) == 0) {
                next = a.to;
                pos += ext;
                break;
            }
        }
        if (next == static_cast<VertexId>(-1)) return {};
        path.push_back(next);
        if (path.size() > expected.size() + 1) return {};
    }
    if (pos != expected.size() || path.back() != to) return {};
    return path;
}

}  // namespace

PlantedInstance planted_bubble_graph(const PlantedSpec& spec, std::uint64_t rng_seed) {
    check_k(spec.k);
    const unsigned k = spec.k;
    if (spec.flank_length < k + 1) throw InvalidSpecError("flank_length must exceed k");
    if (spec.exon_length < k + 1) throw InvalidSpecError("exon_length must exceed k");
    if (spec.repeat_copies > 0 && spec.repeat_length < k + 1) {
        throw InvalidSpecError("repeat_length must exceed k");
    }

    constexpr unsigned kMaxAttempts = 64;
    for (unsigned attempt = 0; attempt < kMaxAttempts; ++attempt) {
        std::uint64_t attempt_seed = derive_seed(rng_seed, attempt);
        RepeatFamily fam;
        if (spec.repeat_copies > 0) {
            fam = generate_repeats(spec.repeat_copies, spec.repeat_length, spec.alpha,
                                   derive_seed(attempt_seed, 1));
        }
        Rng rng(derive_seed(attempt_seed, 2));
        auto draw = [&rng](std::size_t len) {
            std::string s(len, 'A');
            for (char& c : s) c = code_base(static_cast<std::uint8_t>(rng.below(4)));
            return s;
        };
        std::string flank_l = draw(spec.flank_length);
        std::string flank_r = draw(spec.flank_length);
        std::string exon = draw(spec.exon_length);
        // clean divergence/convergence: the two branches must start and end
        // with different characters
        if (exon.front() == flank_r.front() || exon.back() == flank_l.back()) continue;

        // Copies flank the isoforms upstream only: a downstream copy would
        // close a cycle back into the left flank once alpha is small enough
        // for the copies to coincide, merging the divergence and convergence
        // unitigs into one.
        std::string iso_long = flank_l + exon + flank_r;
        std::string iso_short = flank_l + flank_r;
        std::vector<std::string> reads;
        const std::size_t m = fam.copies.size();
        if (m > 0) {
            reads.push_back(fam.copies[0 % m] + iso_long);
            reads.push_back(fam.copies[1 % m] + iso_short);
            for (const std::string& c : fam.copies) reads.push_back(c);
        } else {
            reads.push_back(iso_long);
            reads.push_back(iso_short);
        }

        BuildResult built = build_graph(reads, k);
        DeBruijnGraph compressed = compress(built.graph);

        // source: the unique vertex ending with the left flank's last k-mer;
        // sink: the unique one starting with the right flank's first k-mer
        std::string div_kmer = flank_l.substr(flank_l.size() - k);
        std::string conv_kmer = flank_r.substr(0, k);
        VertexId source = 0, sink = 0;
        std::size_t source_hits = 0, sink_hits = 0;
        for (VertexId v = 0; v < compressed.vertex_count(); ++v) {
            const std::string& l = compressed.label(v);
            if (l.size() >= k && l.compare(l.size() - k, k, div_kmer) == 0) {
                source = v;
                ++source_hits;
            }
            if (l.size() >= k && l.compare(0, k, conv_kmer) == 0) {
                sink = v;
                ++sink_hits;
            }
        }
        if (source_hits != 1 || sink_hits != 1 || source == sink) continue;
        if (compressed.out_degree(source) < 2) continue;

        std::string upper = compressed.label(source) + exon + compressed.label(sink);
        std::string lower = compressed.label(source) + compressed.label(sink);
        std::vector<VertexId> p_upper = walk_spelling(compressed, source, upper, sink);
        std::vector<VertexId> p_lower = walk_spelling(compressed, source, lower, sink);
        if (p_upper.empty() || p_lower.empty()) continue;

        bool disjoint = true;
        std::unordered_set<VertexId> internal_upper(p_upper.begin() + 1, p_upper.end() - 1);
        for (std::size_t i = 1; i + 1 < p_lower.size() && disjoint; ++i) {
            disjoint = internal_upper.count(p_lower[i]) == 0;
        }
        if (!disjoint) continue;

        std::vector<char> branching = branching_flags(compressed);
        auto path_branch = [&branching](const std::vector<VertexId>& p) {
            std::uint32_t n = 0;
            for (std::size_t i = 1; i + 1 < p.size(); ++i) n += branching[p[i]] ? 1 : 0;
            return n;
        };
        std::uint32_t br_upper = path_branch(p_upper);
        std::uint32_t br_lower = path_branch(p_lower);
        if (br_upper > spec.max_branch || br_lower > spec.max_branch) continue;

        PlantedInstance inst;
        inst.reads = std::move(reads);
        inst.raw_vertices = built.graph.vertex_count();
        inst.raw_arcs = built.graph.arc_count();
        inst.source = source;
        inst.sink = sink;
        inst.planted.sink = sink;
        inst.planted.path1 = std::move(p_upper);
        inst.planted.path2 = std::move(p_lower);
        inst.planted.len1 = static_cast<double>(upper.size() - compressed.label(source).size());
        inst.planted.len2 = static_cast<double>(lower.size() - compressed.label(source).size());
        inst.planted.branch1 = br_upper;
        inst.planted.branch2 = br_lower;
        inst.upper_sequence = std::move(upper);
        inst.lower_sequence = std::move(lower);
        inst.rng_seed = rng_seed;
        inst.attempts = attempt + 1;
        inst.graph = std::move(compressed);
        return inst;
    }
    throw InvalidSpecError("could not generate a valid planted instance for these parameters");
}

}  // namespace rbubble
