#pragma once

#include "patdrift/snapshot.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace patdrift {

/// Aggregated DOCDB family. Offices and symbols are pooled over all members;
/// fwd_cit_5y starts at 0 and is filled in by forward_citations_5y.
struct FamilyRecord {
    std::uint64_t family_id = 0;
    std::vector<std::uint64_t> member_appln_ids; // sorted
    std::vector<std::string> offices;            // sorted unique 2-letter codes
    std::vector<std::uint64_t> symbol_keys;      // sorted unique pooled CPC keys
    std::int32_t earliest_year = 0;
    bool is_green = false;
    bool has_epo = false;
    bool has_uspto = false;
    bool has_jpo = false;
    std::uint32_t family_size = 0; // distinct offices
    std::uint32_t fwd_cit_5y = 0;
    bool fwd_cit_populated = false;
};

enum class QualityFilter { NONE, FAMSIZE_GT1, CITED_GT0, EPO, USPTO, TRIADIC };

constexpr std::array<QualityFilter, 6> kAllFilters = {
    QualityFilter::NONE,      QualityFilter::CITED_GT0, QualityFilter::FAMSIZE_GT1,
    QualityFilter::TRIADIC,   QualityFilter::EPO,       QualityFilter::USPTO};

std::string filter_name(QualityFilter f);

/// Families sorted by family_id; all fields except fwd_cit_5y populated.
std::vector<FamilyRecord> build_families(const SnapshotStore& store);

bool filter_accepts(const FamilyRecord& family, QualityFilter f);

/// Subset of families passing the filter; NONE is the identity. Throws
/// MissingIndicator when CITED_GT0 runs before citation counts are filled.
std::vector<const FamilyRecord*> apply_filter(const std::vector<FamilyRecord>& families,
                                              QualityFilter f);

/// Office -> family count; a family increments every office in its set.
std::map<std::string, std::uint64_t> offices_of(const std::vector<FamilyRecord>& families);
std::map<std::string, std::uint64_t> offices_of(const std::vector<const FamilyRecord*>& families);

} // namespace patdrift
