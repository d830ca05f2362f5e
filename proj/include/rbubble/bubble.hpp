#ifndef RBUBBLE_BUBBLE_HPP
#define RBUBBLE_BUBBLE_HPP

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "rbubble/graph.hpp"

namespace rbubble {

constexpr double kUnreachable = std::numeric_limits<double>::infinity();

// A vertex is branching when its out-degree or in-degree in the searched
// graph exceeds 1. Per-path branching counts cover internal vertices only:
// the endpoints s and t are excluded.
std::vector<char> branching_flags(const DeBruijnGraph& g);

struct BubbleQuery {
    VertexId source = 0;
    double alpha1 = 0.0;  // weighted length bound for the longer path
    double alpha2 = 0.0;  // bound for the shorter path
    std::uint32_t b = 0;  // branching bound per path; b >= |V| behaves as unbounded

    // alpha1 >= alpha2 by normalization
    BubbleQuery normalized() const {
        BubbleQuery q = *this;
        if (q.alpha1 < q.alpha2) std::swap(q.alpha1, q.alpha2);
        return q;
    }
};

// Two internally vertex-disjoint s->t paths. path1 is the longer one
// (ties broken toward the lexicographically smaller vertex sequence), so
// len1 <= alpha1 and len2 <= alpha2.
struct Bubble {
    VertexId sink = 0;
    std::vector<VertexId> path1, path2;
    double len1 = 0.0, len2 = 0.0;
    std::uint32_t branch1 = 0, branch2 = 0;
};

// Unordered-pair equality on the two paths.
bool same_bubble(const Bubble& a, const Bubble& b);

// dist[j][v]: minimal weighted length of a u -> v path whose charged
// branching vertices number at most j. A vertex is charged when the path
// leaves it; the terminal vertex is never charged and u itself only when
// counted_source. Rows are clamped to min(b, |V|) since no simple path
// charges more than |V| vertices; at(j, v) folds the clamp in.
class BranchingDistTable {
public:
    BranchingDistTable(VertexId source, std::uint32_t b, bool counted_source,
                       std::vector<std::vector<double>> dist)
        : source_(source), b_(b), counted_source_(counted_source), dist_(std::move(dist)) {}

    VertexId source() const { return source_; }
    std::uint32_t b() const { return b_; }
    bool counted_source() const { return counted_source_; }
    std::size_t rows() const { return dist_.size(); }

    double at(std::uint32_t j, VertexId v) const {
        if (j >= dist_.size()) j = static_cast<std::uint32_t>(dist_.size() - 1);
        return dist_[j][v];
    }

private:
    VertexId source_;
    std::uint32_t b_;
    bool counted_source_;
    std::vector<std::vector<double>> dist_;
};

// All-sink shortest paths from u under a branching budget, O(b|V||E|) or
// better. Throws NoSuchVertexError when u is out of range.
BranchingDistTable branching_bounded_distances(const DeBruijnGraph& g, VertexId u, std::uint32_t b,
                                               bool count_source);

// Non-emptiness test for extending a pair of prefixes ending at u1, u2:
// true iff some vertex t satisfies dist_u1[rem_b1][t] <= rem_len1 and
// dist_u2[rem_b2][t] <= rem_len2. The vertex-disjointness of the two
// extensions may be dropped: the prefixes up to their first intersection
// witness a disjoint pair within the same budgets. count_source applies
// when the endpoint being extended is not the bubble source.
bool bubble_feasible(const DeBruijnGraph& g, VertexId u1, VertexId u2, double rem_len1,
                     double rem_len2, std::uint32_t rem_b1, std::uint32_t rem_b2,
                     bool count_source1 = true, bool count_source2 = true);

struct EnumerationLimits {
    double timeout_seconds = std::numeric_limits<double>::infinity();
    std::uint64_t max_nodes = std::numeric_limits<std::uint64_t>::max();
};

// Result marker. complete=false is the partial-enumeration case: limits
// were hit, everything emitted so far is valid, and frontier_depth records
// how deep the abandoned recursion was.
struct EnumerationStats {
    std::uint64_t nodes = 0;      // recursion calls entered
    std::uint64_t emissions = 0;  // bubbles emitted (after sink filtering)
    bool complete = true;
    double elapsed_seconds = 0.0;
    std::uint32_t frontier_depth = 0;
    std::vector<double> emission_seconds;  // per-emission timestamps from start
};

using BubbleEmit = std::function<void(Bubble&&)>;

// Enumerates every (s,*,alpha1,alpha2,b)-bubble exactly once by recursive
// partition of the solution space, descending only into non-empty
// subspaces (checked with bubble_feasible), so the delay between
// emissions stays polynomial. Bubbles are streamed through emit in a
// deterministic order; with sink set, only bubbles ending there are
// emitted. Sources with out-degree < 2 yield an empty stream.
EnumerationStats enumerate_bubbles(const DeBruijnGraph& g, const BubbleQuery& query,
                                   std::optional<VertexId> sink, const BubbleEmit& emit,
                                   const EnumerationLimits& limits = {});

std::vector<Bubble> enumerate_bubbles_collect(const DeBruijnGraph& g, const BubbleQuery& query,
                                              std::optional<VertexId> sink = std::nullopt,
                                              const EnumerationLimits& limits = {},
                                              EnumerationStats* stats_out = nullptr);

// Independent brute force: exhaustive DFS over simple paths, pair filter,
// unordered dedup. Only for graphs with at most 20 vertices
// (OracleRefusedError otherwise).
std::vector<Bubble> oracle_enumerate(const DeBruijnGraph& g, const BubbleQuery& query);

struct SourceRun {
    VertexId source = 0;
    std::vector<Bubble> bubbles;
    EnumerationStats stats;
};

struct MultiSourceOptions {
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    std::uint32_t b = 5;
    std::optional<VertexId> sink;
    EnumerationLimits per_source_limits;
    unsigned threads = 1;
};

// Runs enumerate_bubbles from every vertex with out-degree >= 2 (ascending
// id). Sources are independent; with threads > 1 they run concurrently over
// the shared immutable graph and results are still merged in source order.
std::vector<SourceRun> enumerate_all_sources(const DeBruijnGraph& g,
                                             const MultiSourceOptions& options);

}  // namespace rbubble

#endif
