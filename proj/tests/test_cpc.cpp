#include "patdrift/cpc.hpp"
#include "patdrift/errors.hpp"

#include "fixture.hpp"

#include <doctest.h>

#include <random>

using namespace patdrift;

TEST_CASE("parse_symbol accepts padded and compact forms") {
    CpcSymbol s = parse_symbol("Y02E  60/10");
    CHECK(s.section == 'Y');
    CHECK(s.class_num == 2);
    CHECK(s.subclass == 'E');
    CHECK(s.main_group == 60);
    CHECK(s.subgroup == 10);
    CHECK(parse_symbol("Y02E60/10") == s);
}

TEST_CASE("parse_symbol subclass-only input yields zero groups") {
    CpcSymbol s = parse_symbol("Y02A");
    CHECK(s.section == 'Y');
    CHECK(s.class_num == 2);
    CHECK(s.subclass == 'A');
    CHECK(s.main_group == 0);
    CHECK(s.subgroup == 0);
}

TEST_CASE("parse_symbol on a non-green symbol") {
    CpcSymbol s = parse_symbol("A01B1/00");
    CHECK(s.section == 'A');
    CHECK(s.class_num == 1);
    CHECK(s.subclass == 'B');
    CHECK(s.main_group == 1);
    CHECK(s.subgroup == 0);
}

TEST_CASE("parse_symbol rejects malformed input") {
    CHECK_THROWS_AS(parse_symbol(""), MalformedSymbol);
    CHECK_THROWS_AS(parse_symbol("Z02E60/10"), MalformedSymbol);
    CHECK_THROWS_AS(parse_symbol("Y0"), MalformedSymbol);
    CHECK_THROWS_AS(parse_symbol("YxxE60/10"), MalformedSymbol);
    CHECK_THROWS_AS(parse_symbol("Y02E6x/10"), MalformedSymbol);
    CHECK_THROWS_AS(parse_symbol("Y02E60/"), MalformedSymbol);
    CHECK_THROWS_AS(parse_symbol("Y02E0/10"), MalformedSymbol);
    CHECK_THROWS_AS(parse_symbol("Y02e60/10"), MalformedSymbol);
}

TEST_CASE("is_green is exactly the Y02 prefix") {
    CHECK(is_green(parse_symbol("Y02E60/10")));
    CHECK_FALSE(is_green(parse_symbol("Y04S10")));
    CHECK_FALSE(is_green(parse_symbol("A01B1/00")));
}

TEST_CASE("truncate renders canonical prefixes per level") {
    CpcSymbol s = parse_symbol("Y02E60/10");
    CHECK(truncate(s, CpcLevel::Group) == "Y02E60");
    CHECK(truncate(s, CpcLevel::Subclass) == "Y02E");
    CHECK(truncate(s, CpcLevel::Class) == "Y02");
    CHECK(truncate(s, CpcLevel::Section) == "Y");
    CHECK(truncate(parse_symbol("H01L31/48"), CpcLevel::Class) == "H01");
}

// Exhaustive-ish corpus: all sections, a spread of classes/groups/subgroups.
static std::vector<CpcSymbol> make_corpus() {
    std::vector<CpcSymbol> corpus;
    const char sections[] = {'A', 'B', 'C', 'D', 'E', 'F', 'G', 'H', 'Y'};
    std::mt19937_64 rng(42);
    for (char section : sections) {
        for (int cls : {0, 1, 2, 7, 23, 99}) {
            for (char subclass : {'A', 'K', 'Z'}) {
                CpcSymbol s;
                s.section = section;
                s.class_num = std::uint8_t(cls);
                s.subclass = subclass;
                corpus.push_back(s); // subclass level
                for (int i = 0; i < 70; ++i) {
                    s.main_group = std::uint16_t(1 + rng() % 9999);
                    s.subgroup = std::uint32_t(rng() % 1000000);
                    corpus.push_back(s);
                }
            }
        }
    }
    return corpus;
}

TEST_CASE("parse/render round-trip over generated corpus") {
    auto corpus = make_corpus();
    REQUIRE(corpus.size() >= 10000);
    std::size_t failures = 0;
    for (const auto& s : corpus) {
        if (parse_symbol(render_symbol(s)) != s) {
            ++failures;
        }
        // key packing preserves total order and round-trips
        CHECK(CpcSymbol::from_key(s.key()) == s);
    }
    CHECK(failures == 0);
}

TEST_CASE("is_green agrees with class-level truncation on the corpus") {
    for (const auto& s : make_corpus()) {
        CHECK(is_green(s) == (truncate(s, CpcLevel::Class) == "Y02"));
    }
}

TEST_CASE("ordering follows the field tuple") {
    auto a = parse_symbol("Y02E60/10");
    auto b = parse_symbol("Y02E60/12");
    auto c = parse_symbol("Y02P70/50");
    CHECK(a < b);
    CHECK(b < c);
    CHECK(a.key() < b.key());
    CHECK(b.key() < c.key());
}

TEST_CASE("scheme_diff single retitle") {
    std::vector<SchemeEntry> old_scheme = {{parse_symbol("Y02E60/10"), "fuel cells", 2}};
    std::vector<SchemeEntry> new_scheme = {
        {parse_symbol("Y02E60/10"), "Enabling technologies; energy storage", 2}};
    auto deltas = scheme_diff(old_scheme, new_scheme);
    REQUIRE(deltas.size() == 1);
    CHECK(deltas[0].subclass == "Y02E");
    CHECK(deltas[0].retitled == std::vector<CpcSymbol>{parse_symbol("Y02E60/10")});
    CHECK(deltas[0].deleted.empty());
    CHECK(deltas[0].added.empty());
    CHECK(deltas[0].indent_changed.empty());
}

TEST_CASE("scheme_diff deletion plus addition in one subclass") {
    std::vector<SchemeEntry> old_scheme = {{parse_symbol("Y02C10/04"), "capture", 1}};
    std::vector<SchemeEntry> new_scheme = {{parse_symbol("Y02C20/20"), "capture by absorption", 1}};
    auto deltas = scheme_diff(old_scheme, new_scheme);
    REQUIRE(deltas.size() == 1);
    CHECK(deltas[0].subclass == "Y02C");
    CHECK(deltas[0].deleted == std::vector<CpcSymbol>{parse_symbol("Y02C10/04")});
    CHECK(deltas[0].added == std::vector<CpcSymbol>{parse_symbol("Y02C20/20")});
}

TEST_CASE("scheme_diff of identical schemes is empty") {
    std::vector<SchemeEntry> scheme = {{parse_symbol("Y02E60/10"), "storage", 2},
                                       {parse_symbol("Y02W30/50"), "waste", 1}};
    CHECK(scheme_diff(scheme, scheme).empty());
}

TEST_CASE("scheme_diff rejects duplicate symbols") {
    std::vector<SchemeEntry> scheme = {{parse_symbol("Y02E60/10"), "a", 1},
                                       {parse_symbol("Y02E60/10"), "b", 2}};
    CHECK_THROWS_AS(scheme_diff(scheme, {}), DuplicateSymbol);
}

// Naive per-symbol comparison oracle for the change-count invariant.
TEST_CASE("scheme_diff totals equal per-symbol oracle") {
    std::mt19937_64 rng(7);
    std::vector<SchemeEntry> old_scheme, new_scheme;
    for (int i = 0; i < 300; ++i) {
        CpcSymbol s;
        s.section = 'Y';
        s.class_num = 2;
        s.subclass = "ABCDEPTW"[rng() % 8];
        s.main_group = std::uint16_t(1 + rng() % 90);
        s.subgroup = std::uint32_t(rng() % 100);
        SchemeEntry entry{s, "title" + std::to_string(rng() % 5), int(rng() % 4)};
        int fate = int(rng() % 5);
        if (fate == 0) {
            old_scheme.push_back(entry); // deleted
        } else if (fate == 1) {
            new_scheme.push_back(entry); // added
        } else {
            old_scheme.push_back(entry);
            SchemeEntry changed = entry;
            if (fate == 3) changed.title += "_x";
            if (fate == 4) changed.indent_level += 1;
            new_scheme.push_back(changed);
        }
    }
    // de-dup identical symbols the generator may have repeated
    auto dedup = [](std::vector<SchemeEntry>& scheme) {
        std::sort(scheme.begin(), scheme.end(),
                  [](const SchemeEntry& a, const SchemeEntry& b) { return a.symbol < b.symbol; });
        scheme.erase(std::unique(scheme.begin(), scheme.end(),
                                 [](const SchemeEntry& a, const SchemeEntry& b) {
                                     return a.symbol == b.symbol;
                                 }),
                     scheme.end());
    };
    dedup(old_scheme);
    dedup(new_scheme);

    std::size_t oracle_changes = 0;
    for (const auto& entry : old_scheme) {
        auto it = std::find_if(new_scheme.begin(), new_scheme.end(),
                               [&](const SchemeEntry& e) { return e.symbol == entry.symbol; });
        if (it == new_scheme.end()) {
            ++oracle_changes; // deleted
        } else {
            if (it->title != entry.title) ++oracle_changes;
            if (it->indent_level != entry.indent_level) ++oracle_changes;
        }
    }
    for (const auto& entry : new_scheme) {
        if (std::none_of(old_scheme.begin(), old_scheme.end(),
                         [&](const SchemeEntry& e) { return e.symbol == entry.symbol; })) {
            ++oracle_changes; // added
        }
    }

    std::size_t diff_changes = 0;
    for (const auto& delta : scheme_diff(old_scheme, new_scheme)) {
        diff_changes += delta.deleted.size() + delta.added.size() + delta.retitled.size() +
                        delta.indent_changed.size();
    }
    CHECK(diff_changes == oracle_changes);
}

TEST_CASE("load_scheme_tsv parses the documented format") {
    auto dir = fixture::scratch_dir("scheme_tsv");
    auto path = fixture::write_lines(dir / "scheme.tsv",
                                     {"symbol\tindent_level\ttitle",
                                      "Y02E60/10\t2\tEnabling technologies; energy storage",
                                      "Y02E  60/30\t2\tHydrogen technology"});
    auto entries = load_scheme_tsv(path);
    REQUIRE(entries.size() == 2);
    CHECK(entries[0].symbol == parse_symbol("Y02E60/10"));
    CHECK(entries[0].indent_level == 2);
    CHECK(entries[0].title == "Enabling technologies; energy storage");
    CHECK(entries[1].symbol == parse_symbol("Y02E60/30"));

    CHECK_THROWS_AS(load_scheme_tsv((dir / "missing.tsv").string()), SchemaError);
    auto bad = fixture::write_lines(dir / "bad.tsv", {"sym\tlevel\ttitle"});
    CHECK_THROWS_AS(load_scheme_tsv(bad), SchemaError);
}
