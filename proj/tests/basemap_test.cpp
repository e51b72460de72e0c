#include "scimap/basemap.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "scimap/errors.hpp"

using namespace scimap;

namespace {

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("scimap_basemap_" + name);
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

std::set<std::pair<std::string, std::string>> edge_names(const Basemap& bm) {
    std::set<std::pair<std::string, std::string>> out;
    for (const auto& e : bm.edges()) {
        auto a = bm.node_name(e.u), b = bm.node_name(e.v);
        out.insert({std::min(a, b), std::max(a, b)});
    }
    return out;
}

}  // namespace

TEST_CASE("cosine similarity basics") {
    const std::vector<double> a = {3, 1, 0};
    CHECK(cosine_similarity(a, a) == 1.0);

    const std::vector<double> e1 = {1, 0};
    const std::vector<double> e2 = {0, 1};
    CHECK(cosine_similarity(e1, e2) == 0.0);

    const std::vector<double> u = {1, 1, 0};
    const std::vector<double> v = {0, 1, 1};
    CHECK(cosine_similarity(u, v) == 0.5);
    CHECK(cosine_similarity(v, u) == 0.5);
}

TEST_CASE("cosine similarity rejects zero vectors, naming the SC") {
    const std::vector<double> zero = {0, 0};
    const std::vector<double> ok = {1, 2};
    CHECK_THROWS_WITH_AS(cosine_similarity(zero, ok, "PHYSICS", "CHEMISTRY"),
                         doctest::Contains("PHYSICS"), Error);
    CHECK_THROWS_WITH_AS(cosine_similarity(ok, zero, "PHYSICS", "CHEMISTRY"),
                         doctest::Contains("CHEMISTRY"), Error);
    const std::vector<double> longer = {1.0, 2.0, 3.0};
    CHECK_THROWS_AS(cosine_similarity(ok, longer), Error);
}

TEST_CASE("build keeps pairs at or above the threshold") {
    // row cosines: (A,B) 0.486, (A,C) 0.102, (B,C) 0.229
    CitationMatrix cm;
    cm.sc_names = {"A", "B", "C"};
    cm.counts = {{10, 0, 0}, {5, 9, 0}, {2, 4, 19}};

    const auto bm = build_basemap(cm, 0.15);
    CHECK(bm.node_count() == 3);
    CHECK(bm.edge_count() == 2);
    CHECK(edge_names(bm) == std::set<std::pair<std::string, std::string>>{
                                {"A", "B"}, {"B", "C"}});

    SUBCASE("threshold zero keeps every nonzero-cosine pair") {
        const auto all = build_basemap(cm, 0.0);
        CHECK(all.edge_count() == 3);
    }
    SUBCASE("orthogonal rows stay disconnected even at threshold zero") {
        CitationMatrix ortho;
        ortho.sc_names = {"A", "B", "C"};
        ortho.counts = {{1, 0, 0}, {0, 1, 0}, {1, 1, 0}};
        const auto bm2 = build_basemap(ortho, 0.0);
        CHECK(bm2.edge_count() == 2);  // A-B cosine is exactly 0
        CHECK(!bm2.has_edge(0, 1));
    }
}

TEST_CASE("threshold comparison is inclusive at the boundary") {
    SUBCASE("identical rows, cosine exactly 1, threshold 1") {
        CitationMatrix cm;
        cm.sc_names = {"X", "Y"};
        cm.counts = {{1, 1}, {1, 1}};
        const auto bm = build_basemap(cm, 1.0);
        CHECK(bm.edge_count() == 1);
        CHECK(bm.edges()[0].similarity == 1.0);
    }
    SUBCASE("cosine exactly at the threshold is kept") {
        // cos((1,1,0),(0,1,1)) = 1/2 exactly
        CitationMatrix cm;
        cm.sc_names = {"X", "Y", "Z"};
        cm.counts = {{1, 1, 0}, {0, 1, 1}, {1, 1, 1}};
        const auto bm = build_basemap(cm, 0.5);
        const int x = bm.node_index("X"), y = bm.node_index("Y");
        CHECK(bm.similarity(x, y) == 0.5);
        CHECK(bm.has_edge(x, y));
    }
}

TEST_CASE("zero-diagonal flag changes the vectors") {
    CitationMatrix cm;
    cm.sc_names = {"A", "B"};
    cm.counts = {{5, 1}, {1, 5}};
    const auto with_diag = build_basemap(cm, 0.0);
    const auto without = build_basemap(cm, 0.0, true);
    // with diagonal the rows are oblique; zeroing it makes them orthogonal
    CHECK(with_diag.edge_count() == 1);
    CHECK(without.edge_count() == 0);

    CitationMatrix self_only;
    self_only.sc_names = {"A", "B"};
    self_only.counts = {{5, 0}, {0, 5}};
    CHECK_THROWS_WITH_AS(build_basemap(self_only, 0.0, true), doctest::Contains("A"), Error);
}

TEST_CASE("all-zero citing rows are reported by name") {
    CitationMatrix cm;
    cm.sc_names = {"A", "B", "C"};
    cm.counts = {{1, 1, 0}, {0, 0, 0}, {0, 0, 0}};
    CHECK_THROWS_WITH_AS(build_basemap(cm, 0.15), doctest::Contains("B, C"), Error);
}

TEST_CASE("non-square citation matrices are rejected") {
    CitationMatrix cm;
    cm.sc_names = {"A", "B"};
    cm.counts = {{1, 2}};
    CHECK_THROWS_AS(build_basemap(cm, 0.15), Error);
}

TEST_CASE("monotone thresholding and relabeling determinism") {
    std::mt19937_64 rng(7001);
    for (int round = 0; round < 60; ++round) {
        const auto cm = oracle::random_citation_matrix(rng);
        const double t1 = 0.4 * oracle::unit(rng);
        const double t2 = t1 + 0.4 * oracle::unit(rng);
        const auto loose = build_basemap(cm, t1);
        const auto strict = build_basemap(cm, t2);
        const auto loose_edges = edge_names(loose);
        for (const auto& e : edge_names(strict)) {
            CHECK(loose_edges.count(e) == 1);
        }
        for (const auto& e : strict.edges()) {
            CHECK(e.similarity + e.distance() == 1.0);
            CHECK(e.similarity >= t2);
            CHECK(e.distance() < 1.0);
            CHECK(e.distance() >= 0.0);
        }

        // reversing the SC order must relabel, not rewire
        CitationMatrix reversed;
        reversed.sc_names.assign(cm.sc_names.rbegin(), cm.sc_names.rend());
        const std::size_t n = cm.sc_names.size();
        reversed.counts.assign(n, std::vector<double>(n, 0.0));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                reversed.counts[n - 1 - i][n - 1 - j] = cm.counts[i][j];
            }
        }
        const auto relabeled = build_basemap(reversed, t1);
        CHECK(edge_names(relabeled) == loose_edges);
    }
}

TEST_CASE("edge-list csv round trip") {
    std::vector<std::string> nodes = {"A", "B", "C", "D", "ISOLATED, & QUOTED\"SC\""};
    std::vector<BasemapEdge> edges = {
        {0, 1, 0.85}, {1, 2, 0.2}, {2, 3, 1.0}, {0, 3, 0.4470301}};
    const Basemap bm(nodes, edges, 0.0);
    const auto path = temp_file("roundtrip.csv");
    save_basemap(bm, path.string(), MapFormat::EdgeCsv);
    const auto loaded = load_basemap(path.string(), MapFormat::EdgeCsv);

    CHECK(loaded.node_count() == 5);
    CHECK(loaded.edge_count() == 4);
    CHECK(edge_names(loaded) == edge_names(bm));
    for (const auto& e : bm.edges()) {
        const int u = loaded.node_index(bm.node_name(e.u));
        const int v = loaded.node_index(bm.node_name(e.v));
        CHECK(loaded.similarity(u, v) == e.similarity);
    }
}

TEST_CASE("graphml round trip") {
    std::vector<std::string> nodes = {"Econ & Politics", "Engineering", "Alone"};
    std::vector<BasemapEdge> edges = {{0, 1, 0.62}};
    const Basemap bm(nodes, edges, 0.15);
    const auto path = temp_file("roundtrip.graphml");
    save_basemap(bm, path.string(), MapFormat::GraphML);
    const auto loaded = load_basemap(path.string(), MapFormat::GraphML);
    CHECK(loaded.node_count() == 3);
    CHECK(loaded.edge_count() == 1);
    CHECK(loaded.node_index("Econ & Politics") >= 0);
    CHECK(loaded.node_index("Alone") >= 0);
    const auto& e = loaded.edges()[0];
    CHECK(e.similarity == 0.62);
}

TEST_CASE("graphml from other tools resolves key ids to attribute names") {
    const auto path = temp_file("foreign.graphml");
    write_file(path,
               "<?xml version='1.0'?>\n"
               "<graphml>\n"
               "  <key id=\"d0\" for=\"edge\" attr.name=\"similarity\" attr.type=\"double\"/>\n"
               "  <graph edgedefault=\"undirected\">\n"
               "    <node id=\"Econ &amp; Politics\"></node>\n"
               "    <node id=\"B\"/>\n"
               "    <edge source=\"Econ &amp; Politics\" target=\"B\">\n"
               "      <data key=\"d0\">0.25</data>\n"
               "    </edge>\n"
               "  </graph>\n"
               "</graphml>\n");
    const auto bm = load_basemap(path.string(), MapFormat::GraphML);
    CHECK(bm.node_count() == 2);
    REQUIRE(bm.edge_count() == 1);
    CHECK(bm.edges()[0].similarity == 0.25);
    CHECK(bm.node_index("Econ & Politics") >= 0);

    SUBCASE("node declarations may follow the edges") {
        write_file(path,
                   "<graphml><graph>"
                   "<edge source=\"A\" target=\"B\"><data key=\"similarity\">0.5</data></edge>"
                   "<node id=\"A\"/><node id=\"B\"/><node id=\"C\"/>"
                   "</graph></graphml>");
        const auto late = load_basemap(path.string(), MapFormat::GraphML);
        CHECK(late.node_count() == 3);
        CHECK(late.edge_count() == 1);
    }
    SUBCASE("a repeated node declaration is rejected") {
        write_file(path, "<graphml><graph><node id=\"A\"/><node id=\"A\"/></graph></graphml>");
        CHECK_THROWS_AS(load_basemap(path.string(), MapFormat::GraphML), ParseError);
    }
    SUBCASE("plain text is not a graphml document") {
        write_file(path, "hello world\n");
        CHECK_THROWS_AS(load_basemap(path.string(), MapFormat::GraphML), ParseError);
    }
}

TEST_CASE("random maps survive the csv round trip bit-exactly") {
    std::mt19937_64 rng(7002);
    for (int round = 0; round < 40; ++round) {
        const auto bm = oracle::random_basemap(rng);
        const auto path = temp_file("random.csv");
        save_basemap(bm, path.string(), MapFormat::EdgeCsv);
        const auto loaded = load_basemap(path.string(), MapFormat::EdgeCsv);
        REQUIRE(loaded.node_count() == bm.node_count());
        REQUIRE(loaded.edge_count() == bm.edge_count());
        for (const auto& e : bm.edges()) {
            const int u = loaded.node_index(bm.node_name(e.u));
            const int v = loaded.node_index(bm.node_name(e.v));
            CHECK(loaded.similarity(u, v) == e.similarity);
        }
    }
}

TEST_CASE("loader rejects malformed edge lists with line numbers") {
    const auto path = temp_file("bad.csv");

    SUBCASE("similarity outside (0,1]") {
        write_file(path, "source,target,similarity\nA,B,1.3\n");
        try {
            load_basemap(path.string(), MapFormat::EdgeCsv);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 2);
        }
    }
    SUBCASE("duplicate undirected edge") {
        write_file(path, "source,target,similarity\nA,B,0.5\nB,A,0.6\n");
        try {
            load_basemap(path.string(), MapFormat::EdgeCsv);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 3);
            CHECK(std::string(e.what()).find("duplicate") != std::string::npos);
        }
    }
    SUBCASE("self-loop") {
        write_file(path, "source,target,similarity\nA,A,0.5\n");
        CHECK_THROWS_AS(load_basemap(path.string(), MapFormat::EdgeCsv), ParseError);
    }
    SUBCASE("zero similarity") {
        write_file(path, "source,target,similarity\nA,B,0\n");
        CHECK_THROWS_AS(load_basemap(path.string(), MapFormat::EdgeCsv), ParseError);
    }
    SUBCASE("bad header") {
        write_file(path, "from,to,weight\nA,B,0.5\n");
        CHECK_THROWS_AS(load_basemap(path.string(), MapFormat::EdgeCsv), ParseError);
    }
}

TEST_CASE("basemap constructor enforces invariants") {
    CHECK_THROWS_AS(Basemap({"A", "B"}, {{0, 0, 0.5}}, 0.0), Error);   // self-loop
    CHECK_THROWS_AS(Basemap({"A", "B"}, {{0, 1, 0.0}}, 0.0), Error);   // s out of range
    CHECK_THROWS_AS(Basemap({"A", "A"}, {}, 0.0), Error);              // duplicate node
    CHECK_THROWS_AS(Basemap({"A", "B"}, {{0, 1, 0.5}, {1, 0, 0.6}}, 0.0), Error);
    CHECK_THROWS_AS(Basemap({"A", "B"}, {{0, 1, 0.1}}, 0.15), Error);  // below threshold
}

TEST_CASE("citation matrix csv loader") {
    const auto path = temp_file("matrix.csv");
    write_file(path,
               "sc,A,B,C\n"
               "A,10,0,0\n"
               "B,5,9,0\n"
               "C,2,4,19\n");
    const auto cm = load_citation_matrix(path.string());
    CHECK(cm.sc_names == std::vector<std::string>{"A", "B", "C"});
    CHECK(cm.counts[2][2] == 19.0);

    SUBCASE("negative counts rejected") {
        write_file(path, "sc,A,B\nA,1,-2\nB,0,1\n");
        CHECK_THROWS_AS(load_citation_matrix(path.string()), ParseError);
    }
    SUBCASE("row label order must match the header") {
        write_file(path, "sc,A,B\nB,1,2\nA,0,1\n");
        CHECK_THROWS_AS(load_citation_matrix(path.string()), ParseError);
    }
}
