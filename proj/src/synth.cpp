#include "patdrift/synth.hpp"
#include "patdrift/cpc.hpp"
#include "patdrift/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

namespace patdrift {

namespace {

// Hand-rolled samplers on top of the raw engine keep the byte stream
// identical across standard library implementations.
struct Rng {
    std::mt19937_64 eng;

    explicit Rng(std::uint64_t seed) : eng(seed) {}

    double u01() { return double(eng() >> 11) * 0x1.0p-53; }

    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : eng() % n; }

    std::uint32_t poisson(double lambda) {
        if (lambda <= 0.0) {
            return 0;
        }
        const double limit = std::exp(-lambda);
        std::uint32_t k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= u01();
        } while (p > limit);
        return k - 1;
    }
};

void check_ratio(double v, const char* name) {
    if (v < 0.0 || v > 1.0) {
        throw ConfigError(std::string(name) + " must be in [0,1]");
    }
}

struct FamilyDraft {
    std::uint64_t family_id_old = 0; // 0 when absent from the old snapshot
    std::uint64_t family_id_new = 0;
    char group = 'N';
    int base_year = 0;
    std::vector<std::string> offices;
    std::vector<std::uint64_t> member_ids;
    std::vector<int> member_years;
    std::vector<std::vector<std::string>> member_codes_old; // per member
    std::vector<std::vector<std::string>> member_codes_new;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> planted_citing; // (citing idx, count) unused
    std::uint32_t planted_cit = 0;
};

const char kGreenSubclasses[] = {'A', 'B', 'C', 'D', 'E', 'P', 'T', 'W'};

std::string random_green_code(Rng& rng) {
    CpcSymbol s;
    s.section = 'Y';
    s.class_num = 2;
    s.subclass = kGreenSubclasses[rng.below(8)];
    s.main_group = std::uint16_t(10 * (1 + rng.below(9)));
    s.subgroup = std::uint32_t(10 * rng.below(10));
    return render_symbol(s);
}

struct ClassPool {
    // Non-green subclass prefixes with power-law weights.
    std::vector<CpcSymbol> prefixes;
    std::vector<double> cumulative;

    explicit ClassPool(double exponent) {
        const char sections[] = {'A', 'B', 'C', 'D', 'E', 'F', 'G', 'H'};
        double total = 0;
        for (int i = 0; i < 48; ++i) {
            CpcSymbol s;
            s.section = sections[i % 8];
            s.class_num = std::uint8_t(1 + (i * 7) % 99);
            s.subclass = char('A' + (i / 8) % 20);
            prefixes.push_back(s);
            total += std::pow(double(i + 1), -exponent);
            cumulative.push_back(total);
        }
    }

    std::size_t pick(Rng& rng) const {
        double r = rng.u01() * cumulative.back();
        return std::size_t(std::lower_bound(cumulative.begin(), cumulative.end(), r) -
                           cumulative.begin());
    }

    std::string code(Rng& rng, std::size_t idx) const {
        CpcSymbol s = prefixes[idx];
        s.main_group = std::uint16_t(1 + rng.below(30));
        s.subgroup = std::uint32_t(10 * rng.below(8));
        return render_symbol(s);
    }
};

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw ConfigError("cannot write output file: " + path.string());
    }
    return out;
}

} // namespace

void GeneratorConfig::validate() const {
    check_ratio(green_share, "green_share");
    check_ratio(reclass_rate, "reclass_rate");
    check_ratio(expansion_rate, "expansion_rate");
    check_ratio(green_to_nongreen_rate, "green_to_nongreen_rate");
    check_ratio(members_tail, "members_tail");
    check_ratio(expansion_asia_share, "expansion_asia_share");
    check_ratio(class_migration_rate, "class_migration_rate");
    if (year_from > year_to) {
        throw ConfigError("year_from must not exceed year_to");
    }
    if (min_members < 1) {
        throw ConfigError("min_members must be >= 1");
    }
    if (citation_intensity < 0) {
        throw ConfigError("citation_intensity must be non-negative");
    }
    if (office_weights.empty()) {
        throw ConfigError("office_weights must not be empty");
    }
    double total = 0;
    for (const auto& [office, weight] : office_weights) {
        if (office.size() != 2 || weight < 0) {
            throw ConfigError("office weights need 2-letter codes and non-negative weights");
        }
        total += weight;
    }
    if (total <= 0) {
        throw ConfigError("office weights must not all be zero");
    }
    if (reclass_rate * expansion_rate >= 1.0) {
        throw ConfigError("reclass_rate * expansion_rate must be < 1");
    }
}

std::uint64_t GroundTruth::count(char group) const {
    std::uint64_t n = 0;
    for (const auto& entry : entries) {
        if (entry.group == group) {
            ++n;
        }
    }
    return n;
}

SynthResult generate(const GeneratorConfig& config, const std::string& out_dir) {
    config.validate();
    namespace fs = std::filesystem;
    fs::create_directories(fs::path(out_dir) / "old");
    fs::create_directories(fs::path(out_dir) / "new");

    Rng rng(config.seed);
    const std::uint64_t n = config.n_families;

    // Group sizes that realize the configured shares under the paper's
    // denominators: |C| = r(G-|D|) and |D| = e(G-|C|).
    const double r = config.reclass_rate;
    const double e = config.expansion_rate;
    const std::uint64_t green_total = std::uint64_t(std::llround(config.green_share * double(n)));
    const std::uint64_t n_c =
        std::uint64_t(std::llround(r * (1.0 - e) / (1.0 - r * e) * double(green_total)));
    const std::uint64_t n_d =
        std::uint64_t(std::llround(e * (1.0 - r) / (1.0 - r * e) * double(green_total)));
    if (n_c + n_d > green_total) {
        throw ConfigError("reclass_rate and expansion_rate leave no room for group B");
    }
    const std::uint64_t n_b = green_total - n_c - n_d;
    const std::uint64_t n_a =
        std::uint64_t(std::llround(config.green_to_nongreen_rate * double(green_total)));
    if (green_total + n_a > n) {
        throw ConfigError("green_share plus green_to_nongreen_rate exceed n_families");
    }

    std::vector<char> labels;
    labels.reserve(n);
    labels.insert(labels.end(), n_b, 'B');
    labels.insert(labels.end(), n_c, 'C');
    labels.insert(labels.end(), n_d, 'D');
    labels.insert(labels.end(), n_a, 'A');
    labels.insert(labels.end(), n - green_total - n_a, 'N');
    for (std::size_t i = labels.size(); i > 1; --i) { // Fisher-Yates
        std::swap(labels[i - 1], labels[rng.below(i)]);
    }

    std::vector<std::pair<std::string, double>> office_pool(config.office_weights.begin(),
                                                            config.office_weights.end());
    const std::vector<std::string> asia = {"JP", "CN", "KR"};
    ClassPool classes(config.class_size_exponent);

    std::vector<FamilyDraft> drafts(n);
    std::uint64_t next_appln_id = 1000;
    const std::uint64_t churn_offset = 1000000000ull;

    for (std::uint64_t i = 0; i < n; ++i) {
        FamilyDraft& fam = drafts[i];
        fam.group = labels[i];
        fam.family_id_new = i + 1;
        fam.family_id_old = fam.group == 'D' ? 0 : fam.family_id_new;
        if (config.family_id_churn && fam.group != 'D' && i % 100 == 7) {
            // Renumbered ids look like fresh families in the new release.
            fam.family_id_new = fam.family_id_old + churn_offset;
            if (fam.group == 'B' || fam.group == 'C') {
                fam.group = 'D';
            } else if (fam.group == 'A') {
                fam.group = 'N';
            }
        }
        fam.base_year =
            config.year_from + int(rng.below(std::uint64_t(config.year_to - config.year_from + 1)));

        // Heavy-tailed member count; offices sampled without replacement.
        int members = config.min_members;
        while (rng.u01() < config.members_tail && members < int(office_pool.size())) {
            ++members;
        }
        auto pool = office_pool;
        if (fam.group == 'D' && rng.u01() < config.expansion_asia_share) {
            const std::string& anchor = asia[rng.below(asia.size())];
            fam.offices.push_back(anchor);
            std::erase_if(pool, [&](const auto& p) { return p.first == anchor; });
        }
        while (int(fam.offices.size()) < members && !pool.empty()) {
            double total = 0;
            for (const auto& [office, weight] : pool) {
                total += weight;
            }
            double pickpoint = rng.u01() * total;
            std::size_t idx = 0;
            double acc = 0;
            for (; idx + 1 < pool.size(); ++idx) {
                acc += pool[idx].second;
                if (acc >= pickpoint) {
                    break;
                }
            }
            fam.offices.push_back(pool[idx].first);
            pool.erase(pool.begin() + std::ptrdiff_t(idx));
        }

        bool migrate = rng.u01() < config.class_migration_rate && fam.group != 'D';
        for (std::size_t m = 0; m < fam.offices.size(); ++m) {
            fam.member_ids.push_back(next_appln_id++);
            fam.member_years.push_back(m == 0 ? fam.base_year
                                              : fam.base_year + int(rng.below(4)));
            std::vector<std::string> codes;
            int n_codes = 1 + int(rng.below(3));
            for (int c = 0; c < n_codes; ++c) {
                codes.push_back(classes.code(rng, classes.pick(rng)));
            }
            std::vector<std::string> codes_new = codes;
            if (migrate && m == 0) {
                codes_new[0] = classes.code(rng, classes.pick(rng));
            }
            if (m == 0) {
                std::string green = random_green_code(rng);
                // A: green in old only; B: both; C/D: new only.
                if (fam.group == 'A' || fam.group == 'B') {
                    codes.push_back(green);
                }
                if (fam.group == 'B' || fam.group == 'C' || fam.group == 'D') {
                    codes_new.push_back(green);
                }
            }
            fam.member_codes_old.push_back(std::move(codes));
            fam.member_codes_new.push_back(std::move(codes_new));
        }
    }

    // Citations: planted per cited family as a set of distinct citing
    // families with earliest-year lag in [0, 5].
    std::map<int, std::vector<std::uint64_t>> families_by_year;
    for (std::uint64_t i = 0; i < n; ++i) {
        families_by_year[drafts[i].base_year].push_back(i);
    }
    struct CitationRow {
        std::uint64_t citing_appln;
        std::uint64_t cited_appln;
        bool citing_in_old;
        bool cited_in_old;
    };
    std::vector<CitationRow> citation_rows;
    for (std::uint64_t i = 0; i < n; ++i) {
        FamilyDraft& fam = drafts[i];
        std::uint32_t want = rng.poisson(config.citation_intensity);
        if (want == 0) {
            continue;
        }
        std::vector<std::uint64_t> candidates;
        for (int y = fam.base_year; y <= fam.base_year + 5; ++y) {
            auto it = families_by_year.find(y);
            if (it == families_by_year.end()) {
                continue;
            }
            for (std::uint64_t j : it->second) {
                if (j != i) {
                    candidates.push_back(j);
                }
            }
        }
        std::uint32_t take = std::min<std::uint32_t>(want, std::uint32_t(candidates.size()));
        for (std::uint32_t t = 0; t < take; ++t) { // partial Fisher-Yates
            std::uint64_t pick = t + rng.below(candidates.size() - t);
            std::swap(candidates[t], candidates[pick]);
        }
        fam.planted_cit = take;
        for (std::uint32_t t = 0; t < take; ++t) {
            const FamilyDraft& citing = drafts[candidates[t]];
            CitationRow row;
            row.citing_appln = citing.member_ids[rng.below(citing.member_ids.size())];
            row.cited_appln = fam.member_ids[rng.below(fam.member_ids.size())];
            row.citing_in_old = citing.family_id_old != 0;
            row.cited_in_old = fam.family_id_old != 0;
            citation_rows.push_back(row);
            if (rng.u01() < 0.05) {
                citation_rows.push_back(row); // duplicate row, de-duplicated on ingest
            }
        }
    }

    // Render the snapshot files from the frozen drafts.
    auto render = [&](bool old_snapshot, const fs::path& dir) {
        auto apps = open_out(dir / "applications.tsv");
        apps << "appln_id\tfamily_id\tauthority\tfiling_date\n";
        auto cls = open_out(dir / "classifications.tsv");
        cls << "appln_id\tcpc_symbol\n";
        for (const auto& fam : drafts) {
            std::uint64_t fid = old_snapshot ? fam.family_id_old : fam.family_id_new;
            if (fid == 0) {
                continue;
            }
            const auto& codes = old_snapshot ? fam.member_codes_old : fam.member_codes_new;
            for (std::size_t m = 0; m < fam.member_ids.size(); ++m) {
                apps << fam.member_ids[m] << '\t' << fid << '\t' << fam.offices[m] << '\t'
                     << fam.member_years[m] << "-06-15\n";
                for (const auto& code : codes[m]) {
                    cls << fam.member_ids[m] << '\t' << code << '\n';
                }
            }
        }
        auto cits = open_out(dir / "citations.tsv");
        cits << "citing_appln_id\tcited_appln_id\n";
        for (const auto& row : citation_rows) {
            if (old_snapshot && (!row.citing_in_old || !row.cited_in_old)) {
                continue;
            }
            cits << row.citing_appln << '\t' << row.cited_appln << '\n';
        }
    };
    render(true, fs::path(out_dir) / "old");
    render(false, fs::path(out_dir) / "new");

    SynthResult result;
    result.old_paths = {(fs::path(out_dir) / "old" / "applications.tsv").string(),
                        (fs::path(out_dir) / "old" / "classifications.tsv").string(),
                        (fs::path(out_dir) / "old" / "citations.tsv").string()};
    result.new_paths = {(fs::path(out_dir) / "new" / "applications.tsv").string(),
                        (fs::path(out_dir) / "new" / "classifications.tsv").string(),
                        (fs::path(out_dir) / "new" / "citations.tsv").string()};
    result.manifest_path = (fs::path(out_dir) / "manifest.csv").string();

    for (const auto& fam : drafts) {
        GroundTruthEntry entry;
        entry.family_id = fam.family_id_new;
        entry.group = fam.group;
        entry.is_green_old = fam.family_id_old != 0 && (fam.group == 'A' || fam.group == 'B');
        entry.is_green_new = fam.group == 'B' || fam.group == 'C' || fam.group == 'D';
        entry.offices = fam.offices;
        entry.earliest_year = fam.base_year;
        entry.fwd_cit_5y_planted = fam.planted_cit;
        result.truth.entries.push_back(std::move(entry));
    }
    std::sort(result.truth.entries.begin(), result.truth.entries.end(),
              [](const GroundTruthEntry& a, const GroundTruthEntry& b) {
                  return a.family_id < b.family_id;
              });

    auto manifest = open_out(result.manifest_path);
    manifest << "family_id,group,is_green_old,is_green_new,offices,earliest_year,fwd_cit_5y_planted\n";
    for (const auto& entry : result.truth.entries) {
        manifest << entry.family_id << ',' << entry.group << ',' << int(entry.is_green_old) << ','
                 << int(entry.is_green_new) << ',';
        for (std::size_t i = 0; i < entry.offices.size(); ++i) {
            if (i) {
                manifest << ';';
            }
            manifest << entry.offices[i];
        }
        manifest << ',' << entry.earliest_year << ',' << entry.fwd_cit_5y_planted << '\n';
    }
    return result;
}

GeneratorConfig load_generator_config(const std::string& json_path) {
    std::ifstream in(json_path);
    if (!in) {
        throw ConfigError("cannot open generator config: " + json_path);
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("bad generator config JSON: " + std::string(e.what()));
    }
    GeneratorConfig config;
    config.seed = j.value("seed", config.seed);
    config.n_families = j.value("n_families", config.n_families);
    config.green_share = j.value("green_share", config.green_share);
    config.reclass_rate = j.value("reclass_rate", config.reclass_rate);
    config.expansion_rate = j.value("expansion_rate", config.expansion_rate);
    config.green_to_nongreen_rate = j.value("green_to_nongreen_rate", config.green_to_nongreen_rate);
    if (j.contains("year_range")) {
        config.year_from = j["year_range"].at(0).get<int>();
        config.year_to = j["year_range"].at(1).get<int>();
    }
    if (j.contains("office_weights")) {
        config.office_weights.clear();
        for (const auto& [office, weight] : j["office_weights"].items()) {
            config.office_weights[office] = weight.get<double>();
        }
    }
    config.min_members = j.value("min_members", config.min_members);
    config.members_tail = j.value("members_tail", config.members_tail);
    config.citation_intensity = j.value("citation_intensity", config.citation_intensity);
    config.class_size_exponent = j.value("class_size_exponent", config.class_size_exponent);
    config.expansion_asia_share = j.value("expansion_asia_share", config.expansion_asia_share);
    config.class_migration_rate = j.value("class_migration_rate", config.class_migration_rate);
    config.family_id_churn = j.value("family_id_churn", config.family_id_churn);
    config.validate();
    return config;
}

} // namespace patdrift
