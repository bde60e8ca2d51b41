#pragma once

#include "patdrift/family.hpp"

#include <map>
#include <vector>

namespace patdrift {

struct YearWindow {
    int from_year = 1980;
    int to_year = 2016;
    bool contains(int year) const { return year >= from_year && year <= to_year; }
};

/// The four Venn groups across two snapshot releases, restricted to the
/// analysis window:
///   A: present in both, green in old only (excluded from shares)
///   B: green in both
///   C: reclassified — present in both, green in new only
///   D: set expansion — green in new, absent from old
struct EffectPartition {
    YearWindow window;
    std::vector<std::uint64_t> group_a;
    std::vector<std::uint64_t> group_b;
    std::vector<std::uint64_t> group_c;
    std::vector<std::uint64_t> group_d;
    std::map<int, std::uint64_t> hist_a, hist_b, hist_c, hist_d;

    // Diagnostics
    std::uint64_t new_green_outside_window = 0; // green-in-new, absent-from-old, year out of window
    std::uint64_t old_green_absent_from_new = 0;
    std::uint64_t window_disagreements = 0; // earliest_year differs across snapshots

    std::uint64_t new_green_total() const {
        return group_b.size() + group_c.size() + group_d.size();
    }
};

struct CombinationRow {
    QualityFilter filter = QualityFilter::NONE;
    std::uint64_t count_old = 0;
    std::uint64_t count_new = 0;
    std::uint64_t count_reclass = 0;
    std::uint64_t count_expansion = 0;
};

/// Partitions families by greenness across the two snapshots. Group
/// assignment and window membership follow the new snapshot's earliest_year
/// when the snapshots disagree; disagreements are counted in diagnostics.
EffectPartition decompose(const std::vector<FamilyRecord>& old_families,
                          const std::vector<FamilyRecord>& new_families,
                          YearWindow window);

/// |group_c| / (new_green_total - |group_d|)
double reclassification_share(const EffectPartition& partition, std::uint64_t new_green_total);

/// |group_d| / (new_green_total - |group_c|)
double set_expansion_share(const EffectPartition& partition, std::uint64_t new_green_total);

/// 1 - filtered/unfiltered
double filtering_reduction(std::uint64_t count_new_unfiltered, std::uint64_t count_new_filtered);

/// One row per filter, in the fixed order NONE, CITED_GT0, FAMSIZE_GT1,
/// TRIADIC, EPO, USPTO. Old counts use the old snapshot's own indicators;
/// reclass/expansion columns intersect the filtered new green set with
/// groups C and D.
std::vector<CombinationRow> combination_table(const std::vector<FamilyRecord>& old_families,
                                              const std::vector<FamilyRecord>& new_families,
                                              const EffectPartition& partition);

/// The six-row published-count fixture used by acceptance tests.
std::vector<CombinationRow> table2_fixture();

/// Two-decimal intermediate rounding, then half-to-even at one decimal;
/// matches the published one-decimal percentages.
std::string format_percent(double ratio);

} // namespace patdrift
