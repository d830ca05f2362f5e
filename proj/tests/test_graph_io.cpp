#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "rbubble/graph.hpp"
#include "rbubble/graph_io.hpp"
#include "rbubble/repeat_model.hpp"

using namespace rbubble;

namespace {

std::string tmp_file(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("rbubble_io_" + name)).string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void check_equal(const DeBruijnGraph& a, const DeBruijnGraph& b) {
    REQUIRE(a.k() == b.k());
    REQUIRE(a.vertex_count() == b.vertex_count());
    REQUIRE(a.arc_count() == b.arc_count());
    for (VertexId v = 0; v < a.vertex_count(); ++v) {
        CHECK(a.label(v) == b.label(v));
        REQUIRE(a.out(v).size() == b.out(v).size());
        for (std::size_t i = 0; i < a.out(v).size(); ++i) {
            CHECK(a.out(v)[i].to == b.out(v)[i].to);
            CHECK(a.out(v)[i].weight == b.out(v)[i].weight);
            CHECK(a.out(v)[i].multiplicity == b.out(v)[i].multiplicity);
        }
    }
}

}  // namespace

TEST_CASE("gfa round trip is exact and canonical") {
    auto g = build_graph({"ACTGAT", "ACTGAG", "TCTGA"}, 3).graph;
    std::string p1 = tmp_file("a.gfa");
    write_gfa(p1, g, {"cfg {\"cmd\":\"test\"}"});
    DeBruijnGraph r = read_gfa(p1);
    check_equal(g, r);

    std::string p2 = tmp_file("b.gfa");
    write_gfa(p2, r, {"cfg {\"cmd\":\"test\"}"});
    CHECK(slurp(p1) == slurp(p2));
    std::remove(p1.c_str());
    std::remove(p2.c_str());
}

TEST_CASE("gfa handles synthetic labels and non-unit weights") {
    DeBruijnGraph ring = ring_gadget(3);
    std::string p = tmp_file("ring.gfa");
    write_gfa(p, ring);
    check_equal(ring, read_gfa(p));
    std::remove(p.c_str());

    auto g = compress(build_graph({"ACTGAT", "ACTGAG", "TCTGA"}, 3).graph);
    std::string pc = tmp_file("c.gfa");
    write_gfa(pc, g);
    check_equal(g, read_gfa(pc));
    std::remove(pc.c_str());
}

TEST_CASE("gfa reader tolerates foreign files") {
    // no KL header tag (k inferred from the overlap), no WT/RC tags
    // (weights fall back to the label-length rule), unusual names
    std::string p = tmp_file("foreign.gfa");
    {
        std::ofstream out(p, std::ios::binary);
        out << "H\tVN:Z:1.0\n"
            << "S\tnodeA\tACT\n"
            << "S\tnodeB\tCTGA\n"
            << "L\tnodeA\t+\tnodeB\t+\t2M\n";
    }
    DeBruijnGraph g = read_gfa(p);
    CHECK(g.k() == 3);
    REQUIRE(g.vertex_count() == 2);
    CHECK(g.label(0) == "ACT");
    CHECK(g.label(1) == "CTGA");
    REQUIRE(g.arc_count() == 1);
    CHECK(g.out(0)[0].weight == doctest::Approx(2.0));  // |CTGA| - (k-1)
    std::remove(p.c_str());
}

TEST_CASE("dbg1 round trip is bit exact") {
    auto g = compress(build_graph({"ACTGATTTACG", "ACTGAG", "TCTGA"}, 3).graph);
    std::string p1 = tmp_file("a.dbg1");
    write_dbg1(p1, g);
    DeBruijnGraph r = read_dbg1(p1);
    check_equal(g, r);
    std::string p2 = tmp_file("b.dbg1");
    write_dbg1(p2, r);
    CHECK(slurp(p1) == slurp(p2));
    CHECK(slurp(p1).substr(0, 4) == "DBG1");
    std::remove(p1.c_str());
    std::remove(p2.c_str());
}

TEST_CASE("dbg1 refuses non-ACGT labels") {
    DeBruijnGraph ring = ring_gadget(2);
    CHECK_THROWS_AS(write_dbg1(tmp_file("bad.dbg1"), ring), IOError);
}

TEST_CASE("read_graph dispatches on magic bytes") {
    auto g = build_graph({"ACGTAC"}, 3).graph;
    std::string pg = tmp_file("d.gfa");
    std::string pb = tmp_file("d.dbg1");
    write_gfa(pg, g);
    write_dbg1(pb, g);
    check_equal(read_graph(pg), read_graph(pb));
    std::remove(pg.c_str());
    std::remove(pb.c_str());
}

TEST_CASE("missing files raise IOError") {
    CHECK_THROWS_AS(read_graph("/nonexistent/path.gfa"), IOError);
    CHECK_THROWS_AS(read_gfa("/nonexistent/path.gfa"), IOError);
}

TEST_CASE("weight formatting is integral when possible") {
    CHECK(format_weight(1.0) == "1");
    CHECK(format_weight(42.0) == "42");
    CHECK(format_weight(2.5) == "2.5");
}
