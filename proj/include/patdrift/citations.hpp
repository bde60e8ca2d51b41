#pragma once

#include "patdrift/family.hpp"

#include <unordered_map>

namespace patdrift {

/// Family-level 5-year forward citation counts. A citing family is counted
/// once per cited family; intra-family citations are excluded; the lag
/// earliest_year(citing) - earliest_year(cited) must fall in [0, 5].
std::unordered_map<std::uint64_t, std::uint32_t>
forward_citations_5y(const SnapshotStore& store, const std::vector<FamilyRecord>& families);

/// Convenience: computes counts and writes them into the family records.
void populate_citations(const SnapshotStore& store, std::vector<FamilyRecord>& families);

} // namespace patdrift
