#include "patdrift/citations.hpp"
#include "patdrift/synth.hpp"

#include "fixture.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace patdrift;

namespace {

struct Built {
    SnapshotStore store;
    std::vector<FamilyRecord> families;
};

Built build(const std::vector<std::string>& apps, const std::vector<std::string>& cits,
            const std::string& name) {
    auto dir = fixture::scratch_dir(name);
    auto paths = fixture::write_snapshot(dir, apps, {}, cits);
    IngestReport report;
    Built b;
    b.store = ingest_snapshot(paths, "t", report);
    b.families = build_families(b.store);
    return b;
}

} // namespace

TEST_CASE("two citing applications of one family count once") {
    auto b = build({"1\t10\tUS\t2000-01-01", "2\t20\tUS\t2002-01-01", "3\t20\tEP\t2002-06-01"},
                   {"2\t1", "3\t1"}, "cit_dedup");
    auto counts = forward_citations_5y(b.store, b.families);
    CHECK(counts.at(10) == 1);
}

TEST_CASE("lag boundary: 5 included, 6 excluded, negative excluded") {
    auto b = build({"1\t10\tUS\t2000-01-01", "2\t20\tUS\t2005-01-01", "3\t30\tUS\t2006-01-01",
                    "4\t40\tUS\t1999-01-01"},
                   {"2\t1", "3\t1", "4\t1"}, "cit_window");
    auto counts = forward_citations_5y(b.store, b.families);
    CHECK(counts.at(10) == 1); // only the lag-5 family
}

TEST_CASE("intra-family citations never count") {
    auto b = build({"1\t10\tUS\t2000-01-01", "2\t10\tEP\t2001-01-01"}, {"2\t1"}, "cit_intra");
    auto counts = forward_citations_5y(b.store, b.families);
    CHECK(counts.find(10) == counts.end());
}

TEST_CASE("200-family fixture matches the exhaustive oracle") {
    GeneratorConfig config;
    config.seed = 201;
    config.n_families = 200;
    config.citation_intensity = 2.0;
    auto dir = fixture::scratch_dir("cit_oracle");
    auto result = generate(config, dir.string());
    IngestReport report;
    auto store = ingest_snapshot(result.new_paths, "new", report);
    auto families = build_families(store);
    auto counts = forward_citations_5y(store, families);
    auto expected = oracle::naive_forward_citations(store);

    for (const auto& fam : families) {
        std::uint64_t got = counts.count(fam.family_id) ? counts.at(fam.family_id) : 0;
        std::uint64_t want = expected.count(fam.family_id) ? expected.at(fam.family_id) : 0;
        CHECK(got == want);
    }

    // planted manifest counts agree too
    for (const auto& entry : result.truth.entries) {
        std::uint64_t got = counts.count(entry.family_id) ? counts.at(entry.family_id) : 0;
        CHECK(got == entry.fwd_cit_5y_planted);
    }
}

TEST_CASE("counts invariant under row duplication, zero without rows, monotone under growth") {
    std::vector<std::string> apps = {"1\t10\tUS\t2000-01-01", "2\t20\tUS\t2001-01-01",
                                     "3\t30\tUS\t2003-01-01"};
    auto base = build(apps, {"2\t1", "3\t1"}, "cit_props_base");
    auto doubled = build(apps, {"2\t1", "2\t1", "3\t1", "3\t1"}, "cit_props_doubled");
    auto base_counts = forward_citations_5y(base.store, base.families);
    auto doubled_counts = forward_citations_5y(doubled.store, doubled.families);
    CHECK(base_counts.at(10) == doubled_counts.at(10));

    auto none = build(apps, {}, "cit_props_none");
    CHECK(forward_citations_5y(none.store, none.families).empty());

    auto grown = build(apps, {"2\t1", "3\t1", "3\t2"}, "cit_props_grown");
    auto grown_counts = forward_citations_5y(grown.store, grown.families);
    CHECK(grown_counts.at(10) >= base_counts.at(10));
    CHECK(grown_counts.at(20) == 1);
}
