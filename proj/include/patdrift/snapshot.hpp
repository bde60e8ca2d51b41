#pragma once

#include "patdrift/cpc.hpp"

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace patdrift {

struct ApplicationRecord {
    std::uint64_t appln_id = 0;
    std::uint64_t family_id = 0;
    char authority[2] = {' ', ' '}; // 2-letter office code
    std::int32_t filing_year = 0;
    std::int32_t filing_month = 0;
    std::int32_t filing_day = 0;

    std::string authority_str() const { return std::string(authority, 2); }
};

struct IngestReport {
    std::uint64_t application_rows = 0;
    std::uint64_t classification_rows = 0;
    std::uint64_t citation_rows = 0;
    std::uint64_t duplicate_applications = 0;
    std::uint64_t duplicate_classifications = 0;
    std::uint64_t duplicate_citations = 0;
    std::uint64_t self_citations = 0;
    std::uint64_t dangling_classifications = 0;
    std::uint64_t dangling_citations = 0;
    std::uint64_t malformed_rows = 0;
};

/// Immutable in-memory index of one snapshot release. Build once via
/// ingest_snapshot; safe for unrestricted concurrent reads afterwards.
class SnapshotStore {
public:
    std::string label;
    std::vector<ApplicationRecord> applications; // sorted by appln_id
    // appln index -> sorted unique symbol keys
    std::vector<std::vector<std::uint64_t>> classifications;
    // cited appln index -> sorted unique citing appln indices
    std::vector<std::vector<std::uint32_t>> citations_by_cited;

    const ApplicationRecord* find_application(std::uint64_t appln_id) const;
    std::size_t index_of(std::uint64_t appln_id) const; // npos when absent
    static constexpr std::size_t npos = std::size_t(-1);

private:
    std::unordered_map<std::uint64_t, std::uint32_t> id_index_;
    friend struct StoreBuilder;
};

struct SnapshotPaths {
    std::string applications;
    std::string classifications;
    std::string citations;
};

/// Streams the three TSV dumps into an immutable store. Malformed rows are
/// skipped and counted; a bad header aborts with SchemaError.
SnapshotStore ingest_snapshot(const SnapshotPaths& paths, const std::string& label,
                              IngestReport& report);

/// Applications with filing year inside [from_year, to_year].
std::uint64_t validate_window(const SnapshotStore& store, int from_year, int to_year);

/// Versioned binary serialization of a built store (magic "PDST").
void save_store(const SnapshotStore& store, const std::string& path);
SnapshotStore load_store(const std::string& path);

} // namespace patdrift
