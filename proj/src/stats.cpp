#include "patdrift/stats.hpp"
#include "patdrift/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

namespace patdrift {

TrendSeries trend(const std::vector<const FamilyRecord*>& families, YearWindow window,
                  const std::string& label) {
    TrendSeries series;
    series.label = label;
    for (int year = window.from_year; year <= window.to_year; ++year) {
        series.points[year] = 0;
    }
    for (const auto* fam : families) {
        if (window.contains(fam->earliest_year)) {
            ++series.points[fam->earliest_year];
        }
    }
    return series;
}

namespace {

// Distinct attribution keys of one family under a key extractor that fills
// a sorted set of strings.
std::set<std::string> green_groups_of(const FamilyRecord& fam) {
    std::set<std::string> groups;
    for (std::uint64_t key : fam.symbol_keys) {
        CpcSymbol s = CpcSymbol::from_key(key);
        if (is_green(s) && s.main_group != 0) {
            groups.insert(truncate(s, CpcLevel::Group));
        }
    }
    return groups;
}

template <typename KeysOf>
std::map<std::string, std::uint64_t> count_by_key(const std::vector<const FamilyRecord*>& families,
                                                  KeysOf keys_of) {
    std::map<std::string, std::uint64_t> counts;
    for (const auto* fam : families) {
        for (const auto& key : keys_of(*fam)) {
            ++counts[key];
        }
    }
    return counts;
}

// Truncation to the top_k absolute counts also restricts share reporting to
// the leading keys, which is what the office rankings require.
std::vector<RankedEntry> rank_counts(const std::map<std::string, std::uint64_t>& ranked,
                                     const std::map<std::string, std::uint64_t>& reference,
                                     std::size_t top_k) {
    std::vector<RankedEntry> entries;
    entries.reserve(ranked.size());
    for (const auto& [key, count] : ranked) {
        RankedEntry entry;
        entry.key = key;
        entry.absolute = count;
        auto ref = reference.find(key);
        if (ref != reference.end() && ref->second > 0) {
            entry.share = double(count) / double(ref->second);
            entry.share_defined = true;
        }
        entries.push_back(std::move(entry));
    }
    std::sort(entries.begin(), entries.end(), [](const RankedEntry& a, const RankedEntry& b) {
        if (a.absolute != b.absolute) {
            return a.absolute > b.absolute;
        }
        return a.key < b.key;
    });
    if (entries.size() > top_k) {
        entries.resize(top_k);
    }
    return entries;
}

} // namespace

std::vector<RankedEntry> rank_by_group(const std::vector<const FamilyRecord*>& ranked_set,
                                       const std::vector<const FamilyRecord*>& reference_set,
                                       std::size_t top_k) {
    auto ranked = count_by_key(ranked_set, green_groups_of);
    auto reference = count_by_key(reference_set, green_groups_of);
    return rank_counts(ranked, reference, top_k);
}

std::vector<RankedEntry> rank_by_office(const std::vector<const FamilyRecord*>& ranked_set,
                                        const std::vector<const FamilyRecord*>& reference_set,
                                        std::size_t top_k) {
    auto offices = [](const FamilyRecord& fam) { return fam.offices; };
    auto ranked = count_by_key(ranked_set, offices);
    auto reference = count_by_key(reference_set, offices);
    return rank_counts(ranked, reference, top_k);
}

GeneralReclassification general_reclassification(const std::vector<FamilyRecord>& old_families,
                                                 const std::vector<FamilyRecord>& new_families,
                                                 CpcLevel level, YearWindow window) {
    auto classes_of = [level](const FamilyRecord& fam) {
        std::set<std::string> classes;
        for (std::uint64_t key : fam.symbol_keys) {
            classes.insert(truncate(CpcSymbol::from_key(key), level));
        }
        return classes;
    };

    std::unordered_map<std::uint64_t, const FamilyRecord*> old_by_id;
    old_by_id.reserve(old_families.size());
    for (const auto& fam : old_families) {
        old_by_id.emplace(fam.family_id, &fam);
    }

    std::map<std::string, ClassReclassPoint> by_class;
    for (const auto& fam : new_families) {
        if (!window.contains(fam.earliest_year)) {
            continue;
        }
        auto new_classes = classes_of(fam);
        for (const auto& cls : new_classes) {
            auto& point = by_class[cls];
            point.class_code = cls;
            ++point.size_new;
        }
        auto old_it = old_by_id.find(fam.family_id);
        if (old_it == old_by_id.end()) {
            continue;
        }
        auto old_classes = classes_of(*old_it->second);
        for (const auto& cls : new_classes) {
            if (!old_classes.contains(cls)) {
                auto& point = by_class[cls];
                point.class_code = cls;
                ++point.added;
            }
        }
        for (const auto& cls : old_classes) {
            if (!new_classes.contains(cls)) {
                auto& point = by_class[cls];
                point.class_code = cls;
                ++point.removed;
            }
        }
    }

    GeneralReclassification result;
    std::uint64_t churn = 0, total = 0;
    for (auto& [cls, point] : by_class) {
        churn += point.added + point.removed;
        total += point.size_new;
        result.points.push_back(point);
    }
    result.aggregate_rate = total == 0 ? 0.0 : double(churn) / double(total);
    return result;
}

FitResult loglog_fit(const std::vector<std::pair<double, double>>& points, double min_size) {
    std::vector<std::pair<double, double>> usable;
    for (const auto& [size, count] : points) {
        if (size >= min_size && count >= 1.0) {
            usable.emplace_back(std::log10(size), std::log10(count));
        }
    }
    if (usable.size() < 2) {
        throw InsufficientPoints("loglog_fit needs at least 2 points with size >= min_size and count >= 1");
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (const auto& [x, y] : usable) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    const double n = double(usable.size());
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) {
        throw InsufficientPoints("loglog_fit: degenerate x-variance");
    }
    FitResult fit;
    fit.n_points = usable.size();
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss_tot = syy - sy * sy / n;
    double ss_res = 0;
    for (const auto& [x, y] : usable) {
        double e = y - (fit.slope * x + fit.intercept);
        ss_res += e * e;
    }
    fit.r_squared = ss_tot == 0.0 ? 1.0 : std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0);
    return fit;
}

std::vector<ClassReclassPoint> top_turbulent_classes(const std::vector<ClassReclassPoint>& points,
                                                     std::size_t top_k, TurbulenceMode mode,
                                                     std::uint64_t min_size) {
    std::vector<ClassReclassPoint> ranked;
    for (const auto& point : points) {
        if (mode == TurbulenceMode::Relative && point.size_new < min_size) {
            continue;
        }
        ranked.push_back(point);
    }
    auto key = [mode](const ClassReclassPoint& p) {
        double churn = double(p.added + p.removed);
        return mode == TurbulenceMode::Absolute ? churn : churn / double(p.size_new);
    };
    std::sort(ranked.begin(), ranked.end(),
              [&](const ClassReclassPoint& a, const ClassReclassPoint& b) {
                  double ka = key(a), kb = key(b);
                  if (ka != kb) {
                      return ka > kb;
                  }
                  return a.class_code < b.class_code;
              });
    if (ranked.size() > top_k) {
        ranked.resize(top_k);
    }
    return ranked;
}

} // namespace patdrift
