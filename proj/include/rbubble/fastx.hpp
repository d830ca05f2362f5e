#ifndef RBUBBLE_FASTX_HPP
#define RBUBBLE_FASTX_HPP

#include <string>
#include <vector>

namespace rbubble {

struct FastxRecord {
    std::string name;  // header up to first whitespace
    std::string desc;  // rest of the header line
    std::string seq;
};

// Reads FASTA or FASTQ, plain or gzip (autodetected by zlib). FASTA records
// may span multiple lines; FASTQ quality lines are ignored. Lines starting
// with ';' or '#' outside a record are treated as comments. Throws IOError
// on unreadable files or malformed records.
std::vector<FastxRecord> read_fastx(const std::string& path);

// Plain FASTA, sequences wrapped at 80 columns. `comments` lines are
// emitted first, each prefixed with ';'. Deterministic byte output.
void write_fasta(const std::string& path, const std::vector<FastxRecord>& records,
                 const std::vector<std::string>& comments = {});

}  // namespace rbubble

#endif
