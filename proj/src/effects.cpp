#include "patdrift/effects.hpp"
#include "patdrift/errors.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

namespace patdrift {

EffectPartition decompose(const std::vector<FamilyRecord>& old_families,
                          const std::vector<FamilyRecord>& new_families,
                          YearWindow window) {
    EffectPartition partition;
    partition.window = window;

    struct OldInfo {
        bool is_green;
        std::int32_t earliest_year;
    };
    std::unordered_map<std::uint64_t, OldInfo> old_info;
    old_info.reserve(old_families.size());
    for (const auto& fam : old_families) {
        old_info.emplace(fam.family_id, OldInfo{fam.is_green, fam.earliest_year});
    }

    std::unordered_set<std::uint64_t> seen_in_new;
    seen_in_new.reserve(new_families.size());

    for (const auto& fam : new_families) {
        seen_in_new.insert(fam.family_id);
        auto old_it = old_info.find(fam.family_id);
        const bool in_old = old_it != old_info.end();
        if (in_old && old_it->second.earliest_year != fam.earliest_year) {
            ++partition.window_disagreements;
        }
        // The new snapshot's earliest_year governs window membership.
        if (!window.contains(fam.earliest_year)) {
            if (!in_old && fam.is_green) {
                ++partition.new_green_outside_window;
            }
            continue;
        }
        if (in_old) {
            const bool green_old = old_it->second.is_green;
            if (green_old && !fam.is_green) {
                partition.group_a.push_back(fam.family_id);
                ++partition.hist_a[fam.earliest_year];
            } else if (green_old && fam.is_green) {
                partition.group_b.push_back(fam.family_id);
                ++partition.hist_b[fam.earliest_year];
            } else if (!green_old && fam.is_green) {
                partition.group_c.push_back(fam.family_id);
                ++partition.hist_c[fam.earliest_year];
            }
        } else if (fam.is_green) {
            partition.group_d.push_back(fam.family_id);
            ++partition.hist_d[fam.earliest_year];
        }
    }

    for (const auto& fam : old_families) {
        if (fam.is_green && !seen_in_new.contains(fam.family_id)) {
            ++partition.old_green_absent_from_new;
        }
    }

    std::sort(partition.group_a.begin(), partition.group_a.end());
    std::sort(partition.group_b.begin(), partition.group_b.end());
    std::sort(partition.group_c.begin(), partition.group_c.end());
    std::sort(partition.group_d.begin(), partition.group_d.end());
    return partition;
}

double reclassification_share(const EffectPartition& partition, std::uint64_t new_green_total) {
    if (partition.group_c.empty()) {
        return 0.0;
    }
    std::uint64_t denom = new_green_total - std::min<std::uint64_t>(new_green_total, partition.group_d.size());
    if (denom == 0) {
        throw DivisionByZero("reclassification_share: empty denominator");
    }
    return double(partition.group_c.size()) / double(denom);
}

double set_expansion_share(const EffectPartition& partition, std::uint64_t new_green_total) {
    if (partition.group_d.empty()) {
        return 0.0;
    }
    std::uint64_t denom = new_green_total - std::min<std::uint64_t>(new_green_total, partition.group_c.size());
    if (denom == 0) {
        throw DivisionByZero("set_expansion_share: empty denominator");
    }
    return double(partition.group_d.size()) / double(denom);
}

double filtering_reduction(std::uint64_t count_new_unfiltered, std::uint64_t count_new_filtered) {
    if (count_new_unfiltered == 0) {
        throw DivisionByZero("filtering_reduction: unfiltered count is zero");
    }
    return 1.0 - double(count_new_filtered) / double(count_new_unfiltered);
}

std::vector<CombinationRow> combination_table(const std::vector<FamilyRecord>& old_families,
                                              const std::vector<FamilyRecord>& new_families,
                                              const EffectPartition& partition) {
    const YearWindow window = partition.window;
    std::unordered_set<std::uint64_t> in_c(partition.group_c.begin(), partition.group_c.end());
    std::unordered_set<std::uint64_t> in_d(partition.group_d.begin(), partition.group_d.end());

    std::vector<CombinationRow> rows;
    rows.reserve(kAllFilters.size());
    for (QualityFilter f : kAllFilters) {
        CombinationRow row;
        row.filter = f;
        for (const auto& fam : old_families) {
            if (fam.is_green && window.contains(fam.earliest_year) && filter_accepts(fam, f)) {
                ++row.count_old;
            }
        }
        for (const auto& fam : new_families) {
            if (!fam.is_green || !window.contains(fam.earliest_year) || !filter_accepts(fam, f)) {
                continue;
            }
            ++row.count_new;
            if (in_c.contains(fam.family_id)) {
                ++row.count_reclass;
            } else if (in_d.contains(fam.family_id)) {
                ++row.count_expansion;
            }
        }
        rows.push_back(row);
    }
    return rows;
}

std::vector<CombinationRow> table2_fixture() {
    return {
        {QualityFilter::NONE, 1412363, 1814580, 151617, 175732},
        {QualityFilter::CITED_GT0, 794349, 1046702, 101713, 87104},
        {QualityFilter::FAMSIZE_GT1, 348302, 497510, 65263, 3225},
        {QualityFilter::TRIADIC, 75469, 122563, 16171, 41},
        {QualityFilter::EPO, 171979, 260596, 28863, 131},
        {QualityFilter::USPTO, 296358, 400143, 65551, 2519},
    };
}

std::string format_percent(double ratio) {
    // Basis points first (9.2514% -> 925), then half-to-even at one decimal.
    long long bp = std::llround(ratio * 10000.0);
    long long tenths = bp / 10;
    long long rem = bp % 10;
    if (rem > 5 || (rem == 5 && (tenths % 2) != 0)) {
        ++tenths;
    }
    std::string out = std::to_string(tenths / 10);
    out.push_back('.');
    out += std::to_string(tenths % 10);
    out.push_back('%');
    return out;
}

} // namespace patdrift
