#include "patdrift/errors.hpp"
#include "patdrift/stats.hpp"
#include "patdrift/synth.hpp"

#include "fixture.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <utility>

using namespace patdrift;

namespace {

FamilyRecord make_family(std::uint64_t id, int year,
                         const std::vector<std::string>& codes = {},
                         const std::vector<std::string>& offices = {"US"}) {
    FamilyRecord fam;
    fam.family_id = id;
    fam.earliest_year = year;
    fam.offices = offices;
    fam.family_size = std::uint32_t(offices.size());
    for (const auto& code : codes) {
        fam.symbol_keys.push_back(parse_symbol(code).key());
        if (is_green(parse_symbol(code))) {
            fam.is_green = true;
        }
    }
    return fam;
}

} // namespace

TEST_CASE("trend emits zeros for missing years and sums to the input size") {
    YearWindow window{1985, 2005};
    CHECK(trend({}, window, "empty").points.at(1990) == 0);

    auto f1 = make_family(1, 1990);
    auto f2 = make_family(2, 1990);
    auto f3 = make_family(3, 2000);
    auto series = trend({&f1, &f2, &f3}, window, "t");
    CHECK(series.points.at(1990) == 2);
    CHECK(series.points.at(2000) == 1);
    CHECK(series.points.at(1991) == 0);
    std::uint64_t total = 0;
    for (const auto& [year, count] : series.points) {
        total += count;
    }
    CHECK(total == 3);
    CHECK(series.points.size() == 21);
}

TEST_CASE("rank_by_group multi-attributes families and computes shares") {
    auto reclassified = make_family(1, 1990, {"Y02E60/10", "Y02P70/50"});
    auto green_1 = make_family(2, 1991, {"Y02E60/20"});
    auto green_2 = make_family(3, 1992, {"Y02P70/10"});
    auto green_3 = make_family(4, 1993, {"Y02P70/12"});
    std::vector<const FamilyRecord*> ranked = {&reclassified};
    std::vector<const FamilyRecord*> reference = {&reclassified, &green_1, &green_2, &green_3};
    auto entries = rank_by_group(ranked, reference, 10);
    REQUIRE(entries.size() == 2);
    CHECK(entries[0].key == "Y02E60"); // tie on absolute count, code order breaks it
    CHECK(entries[0].absolute == 1);
    CHECK(entries[0].share == doctest::Approx(0.5));
    CHECK(entries[1].key == "Y02P70");
    CHECK(entries[1].share == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("rank_by_office counts every office of a family, shares need a reference") {
    auto fam = make_family(1, 1990, {}, {"US", "EP"});
    auto ref = make_family(2, 1990, {}, {"US"});
    auto entries = rank_by_office({&fam}, {&fam, &ref}, 10);
    REQUIRE(entries.size() == 2);
    CHECK(entries[0].key == "EP");
    CHECK(entries[0].absolute == 1);
    CHECK(entries[0].share == doctest::Approx(1.0));
    CHECK(entries[1].key == "US");
    CHECK(entries[1].share == doctest::Approx(0.5));
}

TEST_CASE("rankings match nested-loop oracles on generated data") {
    GeneratorConfig config;
    config.seed = 401;
    config.n_families = 1200;
    auto dir = fixture::scratch_dir("stats_rank");
    auto result = generate(config, dir.string());
    IngestReport report;
    auto store_old = ingest_snapshot(result.old_paths, "old", report);
    auto store_new = ingest_snapshot(result.new_paths, "new", report);
    auto fams_old = build_families(store_old);
    auto fams_new = build_families(store_new);
    YearWindow window{1980, 2016};
    auto partition = decompose(fams_old, fams_new, window);

    std::vector<const FamilyRecord*> reference, reclassified;
    std::set<std::uint64_t> reference_ids;
    for (const auto& fam : fams_new) {
        if (fam.is_green && window.contains(fam.earliest_year)) {
            reference.push_back(&fam);
            reference_ids.insert(fam.family_id);
            if (std::binary_search(partition.group_c.begin(), partition.group_c.end(),
                                   fam.family_id)) {
                reclassified.push_back(&fam);
            }
        }
    }
    std::set<std::uint64_t> reclass_ids(partition.group_c.begin(), partition.group_c.end());

    auto naive_new = oracle::naive_families(store_new);
    auto expected_groups = oracle::naive_count_by_group(naive_new, reclass_ids);
    auto expected_ref = oracle::naive_count_by_group(naive_new, reference_ids);
    for (const auto& entry : rank_by_group(reclassified, reference, 1000)) {
        CHECK(entry.absolute == expected_groups.at(entry.key));
        if (entry.share_defined) {
            CHECK(entry.share ==
                  doctest::Approx(double(expected_groups.at(entry.key)) /
                                  double(expected_ref.at(entry.key))));
        }
    }

    auto expected_offices = oracle::naive_count_by_office(naive_new, reclass_ids);
    for (const auto& entry : rank_by_office(reclassified, reference, 1000)) {
        CHECK(entry.absolute == expected_offices.at(entry.key));
    }
}

TEST_CASE("general_reclassification identity and forced migration") {
    auto old_a = make_family(1, 1990, {"H01L31/48"});
    auto new_a = make_family(1, 1990, {"H02S20/10"});
    std::vector<FamilyRecord> olds = {old_a};
    std::vector<FamilyRecord> news = {new_a};
    for (int i = 2; i <= 10; ++i) {
        olds.push_back(make_family(std::uint64_t(i), 1990, {"H01L31/48"}));
        news.push_back(make_family(std::uint64_t(i), 1990, {"H01L31/48"}));
    }
    auto drift = general_reclassification(olds, news, CpcLevel::Class, {1980, 2016});
    REQUIRE(drift.points.size() == 2);
    CHECK(drift.points[0].class_code == "H01");
    CHECK(drift.points[0].removed == 1);
    CHECK(drift.points[0].added == 0);
    CHECK(drift.points[0].size_new == 9);
    CHECK(drift.points[1].class_code == "H02");
    CHECK(drift.points[1].added == 1);
    CHECK(drift.points[1].size_new == 1);

    auto same = general_reclassification(olds, olds, CpcLevel::Class, {1980, 2016});
    CHECK(same.aggregate_rate == 0.0);
    for (const auto& point : same.points) {
        CHECK(point.added == 0);
        CHECK(point.removed == 0);
    }
}

TEST_CASE("general_reclassification recovers a planted migration rate") {
    GeneratorConfig config;
    config.seed = 402;
    config.n_families = 20000;
    config.green_share = 0.0;
    config.reclass_rate = 0.0;
    config.expansion_rate = 0.0;
    config.green_to_nongreen_rate = 0.0;
    config.class_migration_rate = 0.02;
    auto dir = fixture::scratch_dir("stats_migration");
    auto result = generate(config, dir.string());
    IngestReport report;
    auto store_old = ingest_snapshot(result.old_paths, "old", report);
    auto store_new = ingest_snapshot(result.new_paths, "new", report);
    auto fams_old = build_families(store_old);
    auto fams_new = build_families(store_new);
    auto drift = general_reclassification(fams_old, fams_new, CpcLevel::Class, {1980, 2016});
    // one swapped code creates at most one added plus one removed per family
    CHECK(drift.aggregate_rate > 0.0);
    CHECK(drift.aggregate_rate < 0.06);

    // equality with the naive per-class oracle
    auto naive = oracle::naive_class_drift(oracle::naive_families(store_old),
                                           oracle::naive_families(store_new), CpcLevel::Class,
                                           1980, 2016);
    REQUIRE(drift.points.size() == naive.size());
    for (const auto& point : drift.points) {
        const auto& expected = naive.at(point.class_code);
        CHECK(point.size_new == expected.size_new);
        CHECK(point.added == expected.added);
        CHECK(point.removed == expected.removed);
    }
}

TEST_CASE("loglog_fit on exact proportional data has slope 1") {
    std::vector<std::pair<double, double>> points;
    for (double size : {1e3, 1e4, 1e5, 1e6}) {
        points.emplace_back(size, 0.01 * size);
    }
    auto fit = loglog_fit(points);
    CHECK(fit.slope == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(fit.intercept == doctest::Approx(-2.0).epsilon(1e-9));
}

TEST_CASE("loglog_fit through two points") {
    auto fit = loglog_fit({{1e3, 10}, {1e5, 1000}});
    CHECK(fit.n_points == 2);
    CHECK(fit.slope == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit.intercept == doctest::Approx(-2.0).epsilon(1e-12));
}

TEST_CASE("loglog_fit matches a closed-form normal-equations oracle on noisy data") {
    std::mt19937_64 rng(55);
    auto u01 = [&] { return double(rng() >> 11) * 0x1.0p-53; };
    std::vector<std::pair<double, double>> points;
    for (int i = 0; i < 50; ++i) {
        double size = 1000.0 * std::pow(10.0, 3.0 * u01());
        double count = 0.02 * size * std::pow(10.0, 0.4 * (u01() - 0.5));
        points.emplace_back(size, count);
    }
    auto fit = loglog_fit(points);
    CHECK(fit.n_points == 50);

    // independent route: centered covariance form in long double
    long double mx = 0, my = 0;
    for (const auto& [size, count] : points) {
        mx += std::log10((long double)size);
        my += std::log10((long double)count);
    }
    mx /= 50;
    my /= 50;
    long double sxx = 0, sxy = 0;
    for (const auto& [size, count] : points) {
        long double dx = std::log10((long double)size) - mx;
        long double dy = std::log10((long double)count) - my;
        sxx += dx * dx;
        sxy += dx * dy;
    }
    long double slope = sxy / sxx;
    long double intercept = my - slope * mx;
    CHECK(fit.slope == doctest::Approx(double(slope)).epsilon(1e-9));
    CHECK(fit.intercept == doctest::Approx(double(intercept)).epsilon(1e-9));
}

TEST_CASE("loglog_fit error paths") {
    CHECK_THROWS_AS(loglog_fit({}), InsufficientPoints);
    CHECK_THROWS_AS(loglog_fit({{1e4, 10}}), InsufficientPoints);
    // points below min_size or with zero count are unusable
    CHECK_THROWS_AS(loglog_fit({{10, 5}, {20, 7}}, 1000), InsufficientPoints);
    CHECK_THROWS_AS(loglog_fit({{1e4, 0}, {1e5, 0}}), InsufficientPoints);
    CHECK_THROWS_AS(loglog_fit({{1e4, 10}, {1e4, 20}}), InsufficientPoints);
}

TEST_CASE("top_turbulent_classes ranks by churn and honors the size cutoff") {
    std::vector<ClassReclassPoint> points = {{"A01", 5000, 100, 50},
                                             {"B02", 500, 400, 0},
                                             {"C03", 2000, 10, 5}};
    auto absolute = top_turbulent_classes(points, 10, TurbulenceMode::Absolute);
    REQUIRE(absolute.size() == 3);
    CHECK(absolute[0].class_code == "B02");
    CHECK(absolute[1].class_code == "A01");

    auto relative = top_turbulent_classes(points, 10, TurbulenceMode::Relative);
    REQUIRE(relative.size() == 2); // B02 is below the 1000-family cutoff
    CHECK(relative[0].class_code == "A01");

    auto single = top_turbulent_classes({{"X99", 1500, 1, 0}}, 10, TurbulenceMode::Relative);
    REQUIRE(single.size() == 1);
    CHECK(single[0].class_code == "X99");

    // oracle sort
    std::vector<ClassReclassPoint> shuffled = points;
    auto ranked = top_turbulent_classes(shuffled, 2, TurbulenceMode::Absolute);
    CHECK(ranked.size() == 2);
    CHECK(ranked[0].added + ranked[0].removed >= ranked[1].added + ranked[1].removed);
}
