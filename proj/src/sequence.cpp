#include "rbubble/sequence.hpp"

#include <algorithm>

namespace rbubble {

void check_k(long k) {
    if (k < static_cast<long>(kMinK) || k > static_cast<long>(kMaxK)) throw InvalidKError(k);
}

namespace {

char normalize_base(char c) {
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
    return c;
}

}  // namespace

Sequence::Sequence(std::string chars) : chars_(std::move(chars)) {
    if (chars_.empty()) throw EmptyInputError();
    for (std::size_t i = 0; i < chars_.size(); ++i) {
        chars_[i] = normalize_base(chars_[i]);
        if (!is_base(chars_[i])) throw InvalidCharacterError(i, chars_[i]);
    }
}

std::vector<Sequence> validate_reads(const std::vector<std::string>& raw, NPolicy policy) {
    std::vector<Sequence> out;
    for (const std::string& r : raw) {
        if (policy == NPolicy::kReject) {
            for (std::size_t i = 0; i < r.size(); ++i) {
                if (!is_base(normalize_base(r[i]))) throw InvalidCharacterError(i, r[i]);
            }
            if (!r.empty()) out.emplace_back(r);
            continue;
        }
        // split: emit maximal runs of valid bases
        std::size_t start = 0;
        for (std::size_t i = 0; i <= r.size(); ++i) {
            if (i == r.size() || !is_base(normalize_base(r[i]))) {
                if (i > start) out.emplace_back(r.substr(start, i - start));
                start = i + 1;
            }
        }
    }
    if (out.empty()) throw EmptyInputError();
    return out;
}

SpanResult span(const std::vector<Sequence>& seqs, unsigned k) {
    check_k(k);
    SpanResult res;
    for (const Sequence& s : seqs) {
        if (s.size() < k) {
            ++res.skipped_reads;
            continue;
        }
        for (std::size_t i = 0; i + k <= s.size(); ++i) {
            res.kmers.insert(s.str().substr(i, k));
        }
    }
    return res;
}

std::size_t hamming_distance(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) throw LengthMismatchError(a.size(), b.size());
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) ++d;
    }
    return d;
}

std::size_t hamming_distance(const Sequence& a, const Sequence& b) {
    return hamming_distance(a.view(), b.view());
}

}  // namespace rbubble
