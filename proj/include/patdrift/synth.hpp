#pragma once

#include "patdrift/snapshot.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace patdrift {

struct GeneratorConfig {
    std::uint64_t seed = 1;
    std::uint64_t n_families = 1000;
    double green_share = 0.3;
    double reclass_rate = 0.092;   // |C| / (G - |D|)
    double expansion_rate = 0.106; // |D| / (G - |C|)
    double green_to_nongreen_rate = 0.01; // |A| relative to G
    int year_from = 1980;
    int year_to = 2016;
    std::map<std::string, double> office_weights = {
        {"US", 5}, {"CN", 5}, {"JP", 4}, {"KR", 3}, {"EP", 3},
        {"WO", 2}, {"DE", 2}, {"GB", 1}, {"FR", 1}, {"CA", 1}};
    int min_members = 1;
    double members_tail = 0.35; // geometric continuation probability
    double citation_intensity = 1.0; // expected citing families per family
    double class_size_exponent = 1.2; // power-law weight of non-green classes
    double expansion_asia_share = 0.8; // fraction of group D anchored in JP/CN/KR
    double class_migration_rate = 0.0; // per-family chance of a non-green class swap
    bool family_id_churn = false; // renumber a small slice of ids in the new snapshot

    void validate() const; // throws ConfigError
};

struct GroundTruthEntry {
    std::uint64_t family_id = 0;
    char group = 'N'; // A/B/C/D, or N for never-green
    bool is_green_old = false;
    bool is_green_new = false;
    std::vector<std::string> offices;
    int earliest_year = 0;
    std::uint32_t fwd_cit_5y_planted = 0; // new-snapshot count
};

struct GroundTruth {
    std::vector<GroundTruthEntry> entries; // ordered by family_id
    std::uint64_t count(char group) const;
};

struct SynthResult {
    SnapshotPaths old_paths;
    SnapshotPaths new_paths;
    std::string manifest_path;
    GroundTruth truth;
};

/// Renders a paired snapshot release under out_dir (old/ and new/
/// subdirectories plus manifest.csv). Deterministic for a fixed seed:
/// labels are drawn first, files are rendered from the frozen labels, so
/// the manifest is exact ground truth rather than an expectation.
SynthResult generate(const GeneratorConfig& config, const std::string& out_dir);

GeneratorConfig load_generator_config(const std::string& json_path);

} // namespace patdrift
