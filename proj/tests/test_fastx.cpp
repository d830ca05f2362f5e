#include <zlib.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "rbubble/errors.hpp"
#include "rbubble/fastx.hpp"

using namespace rbubble;

namespace {

std::string tmp_file(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("rbubble_fastx_" + name)).string();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

}  // namespace

TEST_CASE("multi-line fasta with comments") {
    std::string p = tmp_file("a.fa");
    write_file(p, "; a comment\n>first desc here\nACGT\nACGT\n\n>second\nTT\n");
    auto recs = read_fastx(p);
    REQUIRE(recs.size() == 2);
    CHECK(recs[0].name == "first");
    CHECK(recs[0].desc == "desc here");
    CHECK(recs[0].seq == "ACGTACGT");
    CHECK(recs[1].name == "second");
    CHECK(recs[1].seq == "TT");
    std::remove(p.c_str());
}

TEST_CASE("fastq with multi-line sequence and '@' in quality") {
    std::string p = tmp_file("a.fq");
    // quality strings may start with '@'; the reader counts characters
    write_file(p, "@r1\nACGT\nACG\n+\n@IIIII\nA\n@r2\nTTTT\n+ r2\n!!!!\n");
    auto recs = read_fastx(p);
    REQUIRE(recs.size() == 2);
    CHECK(recs[0].seq == "ACGTACG");
    CHECK(recs[1].seq == "TTTT");
    std::remove(p.c_str());
}

TEST_CASE("truncated fastq raises IOError") {
    std::string p = tmp_file("bad.fq");
    write_file(p, "@r1\nACGT\n+\nII\n");
    CHECK_THROWS_AS(read_fastx(p), IOError);
    write_file(p, "@r1\nACGT\n");
    CHECK_THROWS_AS(read_fastx(p), IOError);
    std::remove(p.c_str());
}

TEST_CASE("gzip input is transparent") {
    std::string p = tmp_file("a.fa.gz");
    gzFile gz = gzopen(p.c_str(), "wb");
    REQUIRE(gz != nullptr);
    gzputs(gz, ">r1\nACGTAC\n>r2\nGGG\n");
    gzclose(gz);
    auto recs = read_fastx(p);
    REQUIRE(recs.size() == 2);
    CHECK(recs[0].seq == "ACGTAC");
    CHECK(recs[1].seq == "GGG");
    std::remove(p.c_str());
}

TEST_CASE("fasta writer wraps long sequences and round-trips") {
    std::string p = tmp_file("w.fa");
    std::string longseq(205, 'A');
    write_fasta(p, {{"long", "d", longseq}, {"short", "", "ACGT"}}, {"note"});
    auto recs = read_fastx(p);
    REQUIRE(recs.size() == 2);
    CHECK(recs[0].seq == longseq);
    CHECK(recs[1].seq == "ACGT");
    std::remove(p.c_str());
}

TEST_CASE("unreadable paths raise IOError") {
    CHECK_THROWS_AS(read_fastx("/nonexistent/reads.fa"), IOError);
}
