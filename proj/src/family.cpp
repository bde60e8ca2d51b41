#include "patdrift/family.hpp"
#include "patdrift/errors.hpp"

#include <algorithm>
#include <unordered_map>

namespace patdrift {

std::string filter_name(QualityFilter f) {
    switch (f) {
    case QualityFilter::NONE: return "No filtering";
    case QualityFilter::CITED_GT0: return "Citations";
    case QualityFilter::FAMSIZE_GT1: return "Family size";
    case QualityFilter::TRIADIC: return "Triadic";
    case QualityFilter::EPO: return "EPO";
    case QualityFilter::USPTO: return "USPTO";
    }
    return "?";
}

std::vector<FamilyRecord> build_families(const SnapshotStore& store) {
    std::unordered_map<std::uint64_t, std::uint32_t> slot_of;
    std::vector<FamilyRecord> families;
    slot_of.reserve(store.applications.size());

    for (std::size_t i = 0; i < store.applications.size(); ++i) {
        const auto& app = store.applications[i];
        auto [it, inserted] = slot_of.emplace(app.family_id, std::uint32_t(families.size()));
        if (inserted) {
            families.emplace_back();
            families.back().family_id = app.family_id;
            families.back().earliest_year = app.filing_year;
        }
        FamilyRecord& fam = families[it->second];
        fam.member_appln_ids.push_back(app.appln_id);
        fam.offices.push_back(app.authority_str());
        fam.earliest_year = std::min(fam.earliest_year, app.filing_year);
        const auto& keys = store.classifications[i];
        fam.symbol_keys.insert(fam.symbol_keys.end(), keys.begin(), keys.end());
    }

    for (auto& fam : families) {
        std::sort(fam.member_appln_ids.begin(), fam.member_appln_ids.end());
        std::sort(fam.offices.begin(), fam.offices.end());
        fam.offices.erase(std::unique(fam.offices.begin(), fam.offices.end()), fam.offices.end());
        std::sort(fam.symbol_keys.begin(), fam.symbol_keys.end());
        fam.symbol_keys.erase(std::unique(fam.symbol_keys.begin(), fam.symbol_keys.end()),
                              fam.symbol_keys.end());
        fam.family_size = std::uint32_t(fam.offices.size());
        for (const auto& office : fam.offices) {
            if (office == "EP") fam.has_epo = true;
            if (office == "US") fam.has_uspto = true;
            if (office == "JP") fam.has_jpo = true;
        }
        fam.is_green = std::any_of(fam.symbol_keys.begin(), fam.symbol_keys.end(),
                                   [](std::uint64_t k) { return is_green(CpcSymbol::from_key(k)); });
    }

    std::sort(families.begin(), families.end(),
              [](const FamilyRecord& a, const FamilyRecord& b) { return a.family_id < b.family_id; });
    return families;
}

bool filter_accepts(const FamilyRecord& family, QualityFilter f) {
    switch (f) {
    case QualityFilter::NONE: return true;
    case QualityFilter::FAMSIZE_GT1: return family.family_size >= 2;
    case QualityFilter::CITED_GT0:
        if (!family.fwd_cit_populated) {
            throw MissingIndicator("fwd_cit_5y not populated for family " +
                                   std::to_string(family.family_id));
        }
        return family.fwd_cit_5y >= 1;
    case QualityFilter::EPO: return family.has_epo;
    case QualityFilter::USPTO: return family.has_uspto;
    case QualityFilter::TRIADIC: return family.has_epo && family.has_uspto && family.has_jpo;
    }
    return false;
}

std::vector<const FamilyRecord*> apply_filter(const std::vector<FamilyRecord>& families,
                                              QualityFilter f) {
    std::vector<const FamilyRecord*> out;
    out.reserve(families.size());
    for (const auto& fam : families) {
        if (filter_accepts(fam, f)) {
            out.push_back(&fam);
        }
    }
    return out;
}

namespace {

template <typename Range, typename Deref>
std::map<std::string, std::uint64_t> count_offices(const Range& families, Deref deref) {
    std::map<std::string, std::uint64_t> counts;
    for (const auto& item : families) {
        for (const auto& office : deref(item).offices) {
            ++counts[office];
        }
    }
    return counts;
}

} // namespace

std::map<std::string, std::uint64_t> offices_of(const std::vector<FamilyRecord>& families) {
    return count_offices(families, [](const FamilyRecord& f) -> const FamilyRecord& { return f; });
}

std::map<std::string, std::uint64_t> offices_of(const std::vector<const FamilyRecord*>& families) {
    return count_offices(families, [](const FamilyRecord* f) -> const FamilyRecord& { return *f; });
}

} // namespace patdrift
