#pragma once

#include "patdrift/effects.hpp"

#include <map>
#include <string>
#include <vector>

namespace patdrift {

struct TrendSeries {
    std::string label;
    std::map<int, std::uint64_t> points; // every year of the window present
};

struct RankedEntry {
    std::string key; // Y02 group code or office code
    std::uint64_t absolute = 0;
    double share = 0.0; // count / reference count for the same key
    bool share_defined = false;
};

struct ClassReclassPoint {
    std::string class_code;
    std::uint64_t size_new = 0;
    std::uint64_t added = 0;
    std::uint64_t removed = 0;
};

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::size_t n_points = 0;
};

enum class TurbulenceMode { Absolute, Relative };

/// Count of families per earliest_year; missing years emitted as 0.
TrendSeries trend(const std::vector<const FamilyRecord*>& families, YearWindow window,
                  const std::string& label);

/// Per-Y02-group counts and shares; a family contributes to every distinct
/// Y02 group among its pooled codes. Share = count in ranked set / count in
/// reference set per group; groups with no reference families are excluded
/// from share ranking. Ordered descending by absolute count, ties by code.
std::vector<RankedEntry> rank_by_group(const std::vector<const FamilyRecord*>& ranked_set,
                                       const std::vector<const FamilyRecord*>& reference_set,
                                       std::size_t top_k);

/// Analogous ranking over offices. Share rankings are restricted to the
/// top_k offices by absolute count.
std::vector<RankedEntry> rank_by_office(const std::vector<const FamilyRecord*>& ranked_set,
                                        const std::vector<const FamilyRecord*>& reference_set,
                                        std::size_t top_k);

struct GeneralReclassification {
    std::vector<ClassReclassPoint> points; // ordered by class code
    double aggregate_rate = 0.0;           // sum(added+removed) / sum(size_new)
};

/// Per-class membership churn between snapshots at a truncation level.
/// added/removed are computed over families present in both snapshots;
/// size_new counts all new-snapshot families in the class.
GeneralReclassification general_reclassification(const std::vector<FamilyRecord>& old_families,
                                                 const std::vector<FamilyRecord>& new_families,
                                                 CpcLevel level, YearWindow window);

/// OLS on (log10 size, log10 count); points below min_size or with zero
/// count are dropped. Throws InsufficientPoints below 2 usable points.
FitResult loglog_fit(const std::vector<std::pair<double, double>>& points, double min_size = 1000);

/// Classes ranked by churn. Relative mode divides by size_new and drops
/// classes smaller than min_size.
std::vector<ClassReclassPoint> top_turbulent_classes(const std::vector<ClassReclassPoint>& points,
                                                     std::size_t top_k, TurbulenceMode mode,
                                                     std::uint64_t min_size = 1000);

} // namespace patdrift
