#ifndef RBUBBLE_GRAPH_IO_HPP
#define RBUBBLE_GRAPH_IO_HPP

#include <string>
#include <vector>

#include "rbubble/graph.hpp"

namespace rbubble {

// GFA-1 text form. S-lines carry the vertex label as the sequence column
// (names are the decimal vertex ids), L-lines carry the (k-1)M overlap plus
// WT:f (arc weight) and RC:i (multiplicity) tags. k is stored as a KL:i tag
// on the header. Comment lines ('#') are written after the header and
// skipped on read. Writing is canonical, so write(read(write(g))) is
// byte-identical to write(g).
void write_gfa(const std::string& path, const DeBruijnGraph& g,
               const std::vector<std::string>& comments = {});
DeBruijnGraph read_gfa(const std::string& path);

// Compact little-endian binary edge list: magic "DBG1", k as u16, vertex
// count, per-vertex 2-bit-packed labels, then arcs as (from, to, weight,
// multiplicity). Labels must be pure ACGT; use GFA for synthetic graphs.
void write_dbg1(const std::string& path, const DeBruijnGraph& g);
DeBruijnGraph read_dbg1(const std::string& path);

// Dispatches on the DBG1 magic bytes, else parses GFA.
DeBruijnGraph read_graph(const std::string& path);

// Shortest exact decimal form: integral weights print without a point.
std::string format_weight(double w);

}  // namespace rbubble

#endif
