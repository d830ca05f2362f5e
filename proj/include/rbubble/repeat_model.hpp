#ifndef RBUBBLE_REPEAT_MODEL_HPP
#define RBUBBLE_REPEAT_MODEL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "rbubble/bubble.hpp"
#include "rbubble/graph.hpp"
#include "rbubble/rng.hpp"

namespace rbubble {

// m similar copies of a uniformly drawn seed sequence: each copy position
// keeps the seed symbol with probability 1-alpha, otherwise a different
// symbol is chosen uniformly (star phylogeny, no tree structure).
struct RepeatFamily {
    std::string seed;                 // s0
    std::vector<std::string> copies;  // m copies, each of length n
    double alpha = 0.0;
    std::uint64_t rng_seed = 0;
};

// Deterministic in rng_seed, bit-identical across runs. Throws
// InvalidAlphaError outside [0,1] and InvalidParameterError for m or n = 0.
RepeatFamily generate_repeats(std::size_t m, std::size_t n, double alpha, std::uint64_t rng_seed);

// Mean Hamming distance of the copies to the seed; expectation is alpha*n.
double mean_copy_distance(const RepeatFamily& family);

std::vector<std::string> random_reads(std::size_t m, std::size_t n, Rng& rng);

// Number of boundary rigid (k+1)-mer contexts: windows a.x.b such that the
// k-mer a.x is only ever followed by b (or a read end) and x.b only ever
// preceded by a (or a read start). Homopolymer windows are excluded, the
// same policy that keeps self-loops out of gamma. Computed by string
// scanning only; equals gamma(build_graph(reads, k)) exactly.
std::size_t count_boundary_rigid(const std::vector<std::string>& reads, unsigned k);

struct GammaTrial {
    std::size_t gamma_random = 0;
    std::size_t gamma_model = 0;
};

struct GammaExperimentReport {
    std::size_t m = 0, n = 0;
    unsigned k = 0;
    double alpha = 0.0;
    std::size_t trials = 0;
    std::uint64_t rng_seed = 0;
    bool regime_warning = false;  // m(n-k+2) > 4^k: random baseline may collide
    std::vector<GammaTrial> per_trial;
    double mean_gamma_random = 0.0;
    double mean_gamma_model = 0.0;
    double ratio = 0.0;  // mean_gamma_model / mean_gamma_random
};

// For each trial, gamma over m uniform random length-n reads and over
// S(m,n,alpha). Trials draw from independent derived streams, so any
// thread count produces identical numbers.
GammaExperimentReport gamma_experiment(std::size_t m, std::size_t n, unsigned k, double alpha,
                                       std::size_t trials, std::uint64_t rng_seed,
                                       unsigned threads = 1);

// Cycle on 2x vertices with alternating arc directions: even vertices are
// sources (d+=2, d-=0), odd ones sinks, and no arc is compressible. Labels
// are synthetic ("R0".."R<2x-1>"), weights 1. For x=1 the two parallel
// arcs collapse into one (simple graph), a documented degenerate case.
DeBruijnGraph ring_gadget(std::uint32_t x);

struct PlantedSpec {
    std::size_t repeat_copies = 50;   // m
    std::size_t repeat_length = 300;  // n
    double alpha = 0.03;
    unsigned k = 25;
    std::size_t flank_length = 120;  // unique flanks shared by both isoforms
    std::size_t exon_length = 60;    // the inserted middle of the long path
    std::uint32_t max_branch = 5;    // planted paths must fit this budget
};

// A known alternative-splicing-like bubble wired into a repeat tangle: two
// isoforms (flank + exon + flank and flank + flank) are embedded between
// repeat copies, and the remaining copies are standalone reads. The bubble
// itself stays clean, the surrounding graph does not.
struct PlantedInstance {
    std::vector<std::string> reads;
    DeBruijnGraph graph{2};  // compressed
    std::size_t raw_vertices = 0, raw_arcs = 0;
    VertexId source = 0, sink = 0;
    Bubble planted;                // ground truth, in terms of `graph`
    std::string upper_sequence;    // spelled long path (with the exon)
    std::string lower_sequence;    // spelled skip path
    std::uint64_t rng_seed = 0;
    unsigned attempts = 1;  // generation retries until the instance validated
};

// Deterministic in rng_seed (retries use derived streams). Throws
// InvalidSpecError when the parameters cannot produce a valid instance.
PlantedInstance planted_bubble_graph(const PlantedSpec& spec, std::uint64_t rng_seed);

}  // namespace rbubble

#endif
