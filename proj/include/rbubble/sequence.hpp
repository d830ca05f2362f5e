#ifndef RBUBBLE_SEQUENCE_HPP
#define RBUBBLE_SEQUENCE_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "rbubble/errors.hpp"

namespace rbubble {

// The alphabet is fixed to {A,C,G,T}; lowercase input is normalized on
// validation. k is restricted to [2, 63] so a k-mer always fits in two
// machine words of 2-bit codes (the DBG1 serialization relies on this).
constexpr unsigned kMinK = 2;
constexpr unsigned kMaxK = 63;

inline bool is_base(char c) {
    return c == 'A' || c == 'C' || c == 'G' || c == 'T';
}

// A..T -> 0..3; caller must pass a valid base.
inline std::uint8_t base_code(char c) {
    switch (c) {
        case 'A': return 0;
        case 'C': return 1;
        case 'G': return 2;
        default: return 3;
    }
}

inline char code_base(std::uint8_t code) { return "ACGT"[code & 3]; }

void check_k(long k);  // throws InvalidKError outside [2, 63]

// A non-empty string over {A,C,G,T}. Construction validates; instances are
// immutable and safe to share across threads.
class Sequence {
public:
    // Throws InvalidCharacterError (with the offending position) or
    // EmptyInputError. Lowercase acgt is accepted and normalized.
    explicit Sequence(std::string chars);

    const std::string& str() const { return chars_; }
    std::string_view view() const { return chars_; }
    std::size_t size() const { return chars_.size(); }
    char operator[](std::size_t i) const { return chars_[i]; }

    bool operator==(const Sequence& o) const { return chars_ == o.chars_; }

private:
    std::string chars_;
};

enum class NPolicy {
    kSplit,   // split reads at every non-ACGT character into maximal valid fragments
    kReject,  // any non-ACGT character is an error
};

// Cleans raw read strings according to the policy. Under kSplit, empty
// fragments are dropped. Throws InvalidCharacterError under kReject and
// EmptyInputError when nothing valid remains.
std::vector<Sequence> validate_reads(const std::vector<std::string>& raw, NPolicy policy);

struct SpanResult {
    std::unordered_set<std::string> kmers;
    std::size_t skipped_reads = 0;  // reads shorter than k
};

// All distinct k-mers occurring in the sequences. Reads shorter than k are
// skipped and tallied.
SpanResult span(const std::vector<Sequence>& seqs, unsigned k);

// Number of mismatching positions; throws LengthMismatchError.
std::size_t hamming_distance(const Sequence& a, const Sequence& b);
std::size_t hamming_distance(std::string_view a, std::string_view b);

}  // namespace rbubble

#endif
