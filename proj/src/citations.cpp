#include "patdrift/citations.hpp"

#include <algorithm>

namespace patdrift {

std::unordered_map<std::uint64_t, std::uint32_t>
forward_citations_5y(const SnapshotStore& store, const std::vector<FamilyRecord>& families) {
    std::unordered_map<std::uint64_t, std::int32_t> family_year;
    family_year.reserve(families.size());
    for (const auto& fam : families) {
        family_year.emplace(fam.family_id, fam.earliest_year);
    }

    // cited family -> sorted citing family ids, de-duplicated at the end
    std::unordered_map<std::uint64_t, std::vector<std::uint64_t>> citing_sets;
    for (std::size_t cited_idx = 0; cited_idx < store.applications.size(); ++cited_idx) {
        const auto& citing_indices = store.citations_by_cited[cited_idx];
        if (citing_indices.empty()) {
            continue;
        }
        const auto& cited_app = store.applications[cited_idx];
        auto cited_year_it = family_year.find(cited_app.family_id);
        if (cited_year_it == family_year.end()) {
            continue;
        }
        for (std::uint32_t citing_idx : citing_indices) {
            const auto& citing_app = store.applications[citing_idx];
            if (citing_app.family_id == cited_app.family_id) {
                continue;
            }
            auto citing_year_it = family_year.find(citing_app.family_id);
            if (citing_year_it == family_year.end()) {
                continue;
            }
            std::int32_t lag = citing_year_it->second - cited_year_it->second;
            if (lag >= 0 && lag <= 5) {
                citing_sets[cited_app.family_id].push_back(citing_app.family_id);
            }
        }
    }

    std::unordered_map<std::uint64_t, std::uint32_t> counts;
    counts.reserve(citing_sets.size());
    for (auto& [family_id, citing] : citing_sets) {
        std::sort(citing.begin(), citing.end());
        citing.erase(std::unique(citing.begin(), citing.end()), citing.end());
        counts.emplace(family_id, std::uint32_t(citing.size()));
    }
    return counts;
}

void populate_citations(const SnapshotStore& store, std::vector<FamilyRecord>& families) {
    auto counts = forward_citations_5y(store, families);
    for (auto& fam : families) {
        auto it = counts.find(fam.family_id);
        fam.fwd_cit_5y = it == counts.end() ? 0 : it->second;
        fam.fwd_cit_populated = true;
    }
}

} // namespace patdrift
