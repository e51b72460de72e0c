#include "scimap/profile.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "scimap/errors.hpp"

using namespace scimap;

namespace {

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("scimap_profile_" + name);
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

Basemap two_node_map() {
    return Basemap({"A", "B"}, {{0, 1, 0.5}}, 0.0);
}

}  // namespace

TEST_CASE("full and fractional counting") {
    const std::vector<PaperRecord> records = {
        {"org", "P1", {"A"}},
        {"org", "P2", {"A", "B"}},
    };

    SUBCASE("full counting adds one per assignment") {
        const auto profiles = aggregate_profiles(records, Counting::Full);
        REQUIRE(profiles.size() == 1);
        const auto& p = profiles[0];
        CHECK(p.counts.at("A") == 2.0);
        CHECK(p.counts.at("B") == 1.0);
        CHECK(p.shares.at("A") == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
        CHECK(p.shares.at("B") == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
        CHECK(p.paper_count == 2);
    }
    SUBCASE("fractional counting splits each paper") {
        const auto profiles = aggregate_profiles(records, Counting::Fractional);
        const auto& p = profiles[0];
        CHECK(p.counts.at("A") == 1.5);
        CHECK(p.counts.at("B") == 0.5);
        CHECK(p.shares.at("A") == 0.75);
        CHECK(p.shares.at("B") == 0.25);
    }
    SUBCASE("single assignment gives a unit share") {
        const auto profiles = aggregate_profiles({{"org", "P", {"A"}}});
        CHECK(profiles[0].shares.at("A") == 1.0);
    }
}

TEST_CASE("aggregation is order independent and groups by org") {
    std::vector<PaperRecord> records = {
        {"org2", "P1", {"A", "C"}},
        {"org1", "P2", {"B"}},
        {"org1", "P3", {"A", "B"}},
        {"org2", "P4", {"C"}},
    };
    const auto base = aggregate_profiles(records);
    REQUIRE(base.size() == 2);
    CHECK(base[0].org_id == "org1");
    CHECK(base[1].org_id == "org2");

    std::mt19937_64 rng(123);
    for (int round = 0; round < 10; ++round) {
        std::shuffle(records.begin(), records.end(), rng);
        const auto again = aggregate_profiles(records);
        REQUIRE(again.size() == base.size());
        for (std::size_t i = 0; i < base.size(); ++i) {
            CHECK(again[i].org_id == base[i].org_id);
            CHECK(again[i].counts == base[i].counts);
            CHECK(again[i].shares == base[i].shares);
        }
    }
}

TEST_CASE("record validation") {
    CHECK_THROWS_AS(aggregate_profiles({{"org", "P", {}}}), Error);
    CHECK_THROWS_AS(aggregate_profiles({{"org", "P", {"A", "A"}}}), Error);
    CHECK_THROWS_AS(aggregate_profiles({}), Error);
}

TEST_CASE("share scale invariance is bit-exact") {
    std::mt19937_64 rng(2024);
    for (int round = 0; round < 100; ++round) {
        const int n = 1 + static_cast<int>(rng() % 12);
        ResearchProfile p;
        p.org_id = "org";
        for (int i = 0; i < n; ++i) {
            p.counts["S" + std::to_string(i)] = static_cast<double>(1 + rng() % 500);
        }
        const int k = 2 + static_cast<int>(rng() % 9);
        ResearchProfile scaled = p;
        for (auto& [sc, c] : scaled.counts) c *= k;

        // recompute shares from counts exactly as the aggregator does
        auto shares_of = [](const ResearchProfile& profile) {
            double total = 0.0;
            for (const auto& [sc, c] : profile.counts) total += c;
            std::map<std::string, double> shares;
            for (const auto& [sc, c] : profile.counts) shares[sc] = c / total;
            return shares;
        };
        CHECK(shares_of(p) == shares_of(scaled));
    }
}

TEST_CASE("full counting conserves assignment totals") {
    std::mt19937_64 rng(555);
    for (int round = 0; round < 50; ++round) {
        std::vector<PaperRecord> records;
        std::size_t assignments = 0;
        const int papers = 1 + static_cast<int>(rng() % 20);
        for (int p = 0; p < papers; ++p) {
            PaperRecord rec;
            rec.org_id = "org" + std::to_string(rng() % 3);
            rec.paper_id = "P" + std::to_string(p);
            const int n_sc = 1 + static_cast<int>(rng() % 5);
            for (int s = 0; s < n_sc; ++s) {
                rec.sc_list.push_back("S" + std::to_string(s));
            }
            assignments += rec.sc_list.size();
            records.push_back(std::move(rec));
        }
        const auto profiles = aggregate_profiles(records, Counting::Full);
        double total = 0.0;
        for (const auto& p : profiles) {
            for (const auto& [sc, c] : p.counts) total += c;
        }
        CHECK(total == static_cast<double>(assignments));
    }
}

TEST_CASE("filter_orgs keeps the boundary") {
    std::vector<ResearchProfile> profiles(3);
    profiles[0].org_id = "big";
    profiles[0].paper_count = 150;
    profiles[1].org_id = "edge";
    profiles[1].paper_count = 100;
    profiles[2].org_id = "small";
    profiles[2].paper_count = 99;

    const auto kept = filter_orgs(profiles, 100);
    REQUIRE(kept.size() == 2);
    CHECK(kept[0].org_id == "big");
    CHECK(kept[1].org_id == "edge");

    CHECK(filter_orgs(profiles, 1).size() == 3);
    CHECK_THROWS_AS(filter_orgs(profiles, 0), Error);
}

TEST_CASE("overlay policies") {
    const auto bm = two_node_map();

    ResearchProfile mapped;
    mapped.org_id = "org";
    mapped.counts = {{"A", 1.0}, {"B", 1.0}};
    mapped.shares = {{"A", 0.5}, {"B", 0.5}};

    ResearchProfile partial;
    partial.org_id = "org";
    partial.counts = {{"A", 1.0}, {"X", 1.0}};
    partial.shares = {{"A", 0.5}, {"X", 0.5}};

    SUBCASE("full coverage is unchanged") {
        const auto cm = overlay(mapped, bm, OverlayPolicy::DropRenormalize);
        CHECK(cm.node_weights == std::map<std::string, double>{{"A", 0.5}, {"B", 0.5}});
        CHECK(cm.unmapped.empty());
        CHECK(cm.mapped_mass() == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("drop-renormalize rescales to unit mass") {
        const auto cm = overlay(partial, bm, OverlayPolicy::DropRenormalize);
        CHECK(cm.node_weights == std::map<std::string, double>{{"A", 1.0}});
        CHECK(cm.unmapped == std::map<std::string, double>{{"X", 0.5}});
    }
    SUBCASE("drop-keep leaves the deficit") {
        const auto cm = overlay(partial, bm, OverlayPolicy::DropKeep);
        CHECK(cm.node_weights == std::map<std::string, double>{{"A", 0.5}});
        CHECK(cm.unmapped == std::map<std::string, double>{{"X", 0.5}});
        CHECK(cm.mapped_mass() + cm.unmapped_mass() == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("error policy lists the missing SCs") {
        CHECK_THROWS_WITH_AS(overlay(partial, bm, OverlayPolicy::Error),
                             doctest::Contains("X"), Error);
    }
}

TEST_CASE("paper record csv loader") {
    const auto path = temp_file("records.csv");
    write_file(path,
               "org_id,paper_id,subject_categories\n"
               "org1,P1,PHYSICS; CHEMISTRY\n"
               "org1,P2,PHYSICS\n"
               "org2,P3,\"ECOLOGY\"\n");
    const auto records = load_paper_records(path.string());
    REQUIRE(records.size() == 3);
    CHECK(records[0].sc_list == std::vector<std::string>{"PHYSICS", "CHEMISTRY"});
    CHECK(records[2].sc_list == std::vector<std::string>{"ECOLOGY"});

    SUBCASE("duplicate SC within a paper is a parse error") {
        write_file(path, "org_id,paper_id,subject_categories\norg,P,A;A\n");
        try {
            load_paper_records(path.string());
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 2);
        }
    }
    SUBCASE("empty SC list is a parse error") {
        write_file(path, "org_id,paper_id,subject_categories\norg,P,;\n");
        CHECK_THROWS_AS(load_paper_records(path.string()), ParseError);
    }
}

TEST_CASE("pre-aggregated profiles round trip") {
    std::vector<ResearchProfile> profiles(2);
    profiles[0].org_id = "org1";
    profiles[0].counts = {{"A", 2.0}, {"B", 1.0}};
    profiles[1].org_id = "org2";
    profiles[1].counts = {{"C", 4.5}};
    const auto path = temp_file("profiles.csv");
    save_profiles_csv(profiles, path.string());

    const auto loaded = load_profiles_csv(path.string());
    REQUIRE(loaded.size() == 2);
    CHECK(loaded[0].counts == profiles[0].counts);
    CHECK(loaded[0].shares.at("A") == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(loaded[1].shares.at("C") == 1.0);
    CHECK(loaded[0].paper_count == 0);  // unknown without records

    SUBCASE("header sniffing picks the right loader") {
        const auto sniffed = load_any_profiles(path.string(), Counting::Full);
        CHECK(sniffed.size() == 2);
    }
}
