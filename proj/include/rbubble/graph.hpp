#ifndef RBUBBLE_GRAPH_HPP
#define RBUBBLE_GRAPH_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "rbubble/sequence.hpp"

namespace rbubble {

using VertexId = std::uint32_t;

struct Arc {
    VertexId to = 0;
    double weight = 1.0;
    std::uint32_t multiplicity = 1;  // read support; annotation only, never used by algorithms
};

// Directed graph with string-labeled vertices and weighted arcs. For a raw
// de Bruijn graph every label has length exactly k and every arc weighs 1;
// after compression labels are unitigs (length >= k) and an arc into v
// weighs |label(v)| - (k-1), so path length counts appended characters.
// Synthetic graphs (test gadgets) may carry arbitrary labels and weights.
//
// Once built, the graph is immutable in practice and safe to share across
// threads; mutation is only done by builders before handing it out.
class DeBruijnGraph {
public:
    explicit DeBruijnGraph(unsigned k) : k_(k) {}

    unsigned k() const { return k_; }
    std::size_t vertex_count() const { return labels_.size(); }
    std::size_t arc_count() const { return arc_count_; }

    const std::string& label(VertexId v) const { return labels_[v]; }
    const std::vector<Arc>& out(VertexId v) const { return out_[v]; }
    const std::vector<VertexId>& in(VertexId v) const { return in_[v]; }
    std::size_t out_degree(VertexId v) const { return out_[v].size(); }
    std::size_t in_degree(VertexId v) const { return in_[v].size(); }

    std::optional<VertexId> find_vertex(const std::string& label) const;
    bool has_arc(VertexId u, VertexId v) const;
    const Arc* find_arc(VertexId u, VertexId v) const;

    VertexId add_vertex(std::string label);
    // Inserts (u,v) keeping adjacency sorted by target id; duplicate arcs
    // are rejected (simple graph).
    void add_arc(VertexId u, VertexId v, double weight = 1.0, std::uint32_t multiplicity = 1);

private:
    unsigned k_;
    std::vector<std::string> labels_;
    std::vector<std::vector<Arc>> out_;
    std::vector<std::vector<VertexId>> in_;
    std::unordered_map<std::string, VertexId> index_;
    std::size_t arc_count_ = 0;
};

struct GraphStats {
    std::size_t vertex_count = 0;
    std::size_t arc_count = 0;
    std::size_t gamma = 0;
    double compressible_ratio = 0.0;  // gamma / arc_count, 0 when there is no arc
};

struct BuildResult {
    DeBruijnGraph graph;
    std::size_t skipped_reads = 0;  // reads shorter than k
};

// V = all distinct k-mers, A = all distinct (k+1)-mers (prefix -> suffix),
// weight 1, multiplicity = occurrence count. Vertex ids follow first
// appearance in read order. Throws EmptyGraphError when no read has length
// >= k+1.
BuildResult build_graph(const std::vector<std::string>& reads, unsigned k);
BuildResult build_graph(const std::vector<Sequence>& reads, unsigned k);

// Degree test d+(u)=1 and d-(v)=1. A self-loop passing the test reports
// true here, although it is never contracted and not counted by gamma.
// Throws NoSuchArcError when (u,v) is absent.
bool is_compressible(const DeBruijnGraph& g, VertexId u, VertexId v);

// Number of arcs (u,v) with d+(u)=1, d-(v)=1 and u != v. Self-loops are
// excluded so the count stays in bijection with boundary rigid contexts of
// the read set.
std::size_t gamma(const DeBruijnGraph& g);

// Contracts every eligible arc until none remains and returns the fixed
// point. An arc (u,v) is eligible when it passes the degree test, u != v,
// and (v,u) is absent: loops and 2-cycles are left alone. Arcs are
// processed in lexicographic order of (label(u), label(v)); merged labels
// concatenate minus the (k-1)-overlap and an arc into a merged vertex
// accumulates the chain weights, which for de Bruijn weights equals
// |label| - (k-1).
DeBruijnGraph compress(const DeBruijnGraph& g);

GraphStats stats(const DeBruijnGraph& g);

// label(v0) followed by each subsequent label minus the (k-1)-overlap.
// Requires de Bruijn labels; path must be non-empty and follow arcs.
std::string spell_path(const DeBruijnGraph& g, const std::vector<VertexId>& path);

// True when every arc's endpoints overlap by k-1 characters (labels all of
// length >= k). Synthetic graphs typically fail this on purpose.
bool check_overlap_invariant(const DeBruijnGraph& g);

// k-mer / (k+1)-mer content spelled by the graph: every window of every
// label plus, for arcs, the windows straddling the (k-1)-overlap junction.
// Compression preserves both sets exactly.
std::unordered_set<std::string> kmer_content(const DeBruijnGraph& g);
std::unordered_set<std::string> arc_kmer_content(const DeBruijnGraph& g);

}  // namespace rbubble

#endif
