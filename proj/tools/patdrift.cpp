#include "patdrift/citations.hpp"
#include "patdrift/effects.hpp"
#include "patdrift/errors.hpp"
#include "patdrift/stats.hpp"
#include "patdrift/synth.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>
#include <unordered_set>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace patdrift;

namespace {

// Tracks files written by the current subcommand so a failure can remove
// partial outputs before exiting.
struct OutputSet {
    std::vector<std::string> files;

    std::ofstream create(const std::string& path) {
        fs::path p(path);
        if (p.has_parent_path()) {
            fs::create_directories(p.parent_path());
        }
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw SchemaError("cannot write output file: " + path);
        }
        files.push_back(path);
        return out;
    }

    void note(const std::string& path) { files.push_back(path); }

    void remove_all() {
        for (const auto& path : files) {
            std::error_code ec;
            fs::remove(path, ec);
        }
    }
};

std::uint64_t fnv1a(std::string_view text, std::uint64_t hash = 0xcbf29ce484222325ull) {
    for (char c : text) {
        hash ^= std::uint64_t(std::uint8_t(c));
        hash *= 0x100000001b3ull;
    }
    return hash;
}

void write_run_manifest(OutputSet& outputs, const std::string& dir,
                        const std::vector<std::string>& argv_copy) {
    json manifest;
    std::string joined;
    for (const auto& arg : argv_copy) {
        joined += arg;
        joined += '\0';
    }
    manifest["command_line"] = argv_copy;
    char hash_hex[32];
    std::snprintf(hash_hex, sizeof hash_hex, "%016llx",
                  static_cast<unsigned long long>(fnv1a(joined)));
    manifest["config_hash"] = hash_hex;
    manifest["timestamp_utc"] = std::chrono::duration_cast<std::chrono::seconds>(
                                    std::chrono::system_clock::now().time_since_epoch())
                                    .count();
    manifest["outputs"] = outputs.files;
    auto out = outputs.create((fs::path(dir) / "run_manifest.json").string());
    out << manifest.dump(2) << '\n';
}

std::string store_file(const std::string& dir_or_file) {
    if (fs::is_directory(dir_or_file)) {
        return (fs::path(dir_or_file) / "store.bin").string();
    }
    return dir_or_file;
}

struct LoadedSnapshot {
    SnapshotStore store;
    std::vector<FamilyRecord> families;
};

LoadedSnapshot load_snapshot(const std::string& dir) {
    LoadedSnapshot snap;
    snap.store = load_store(store_file(dir));
    snap.families = build_families(snap.store);
    populate_citations(snap.store, snap.families);
    return snap;
}

QualityFilter parse_filter(const std::string& name) {
    if (name == "none") return QualityFilter::NONE;
    if (name == "famsize") return QualityFilter::FAMSIZE_GT1;
    if (name == "cited") return QualityFilter::CITED_GT0;
    if (name == "epo") return QualityFilter::EPO;
    if (name == "uspto") return QualityFilter::USPTO;
    if (name == "triadic") return QualityFilter::TRIADIC;
    throw ConfigError("unknown filter: " + name);
}

std::vector<const FamilyRecord*> green_in_window(const std::vector<FamilyRecord>& families,
                                                 YearWindow window) {
    std::vector<const FamilyRecord*> out;
    for (const auto& fam : families) {
        if (fam.is_green && window.contains(fam.earliest_year)) {
            out.push_back(&fam);
        }
    }
    return out;
}

void write_trend_csv(OutputSet& outputs, const std::string& path, const TrendSeries& series) {
    auto out = outputs.create(path);
    out << "year,count\n";
    for (const auto& [year, count] : series.points) {
        out << year << ',' << count << '\n';
    }
}

void write_ranking_csv(OutputSet& outputs, const std::string& path,
                       const std::vector<RankedEntry>& entries) {
    auto out = outputs.create(path);
    out << "key,absolute,share\n";
    char buf[32];
    for (const auto& entry : entries) {
        out << entry.key << ',' << entry.absolute << ',';
        if (entry.share_defined) {
            std::snprintf(buf, sizeof buf, "%.6f", entry.share);
            out << buf;
        }
        out << '\n';
    }
}

int threads_option(int flag_value) {
    if (flag_value > 0) {
        return flag_value;
    }
    if (const char* env = std::getenv("PATDRIFT_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) {
            return v;
        }
    }
    return int(std::thread::hardware_concurrency());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"patdrift - snapshot drift analysis for green patent statistics"};
    app.require_subcommand(1);
    std::vector<std::string> argv_copy(argv, argv + argc);

    int threads = 0;
    app.add_option("--threads", threads, "worker thread bound (default: all available)");

    // ingest
    auto* cmd_ingest = app.add_subcommand("ingest", "build a snapshot store from TSV dumps");
    SnapshotPaths ingest_paths;
    std::string ingest_label, ingest_out;
    cmd_ingest->add_option("--applications", ingest_paths.applications)->required();
    cmd_ingest->add_option("--classifications", ingest_paths.classifications)->required();
    cmd_ingest->add_option("--citations", ingest_paths.citations)->required();
    cmd_ingest->add_option("--label", ingest_label)->required();
    cmd_ingest->add_option("--out", ingest_out)->required();

    // effects
    auto* cmd_effects = app.add_subcommand("effects", "decompose two snapshots into effect groups");
    std::string eff_old, eff_new, eff_out;
    int eff_from = 1980, eff_to = 2016;
    cmd_effects->add_option("--old", eff_old)->required();
    cmd_effects->add_option("--new", eff_new)->required();
    cmd_effects->add_option("--from", eff_from);
    cmd_effects->add_option("--to", eff_to);
    cmd_effects->add_option("--out", eff_out)->required();

    // table2
    auto* cmd_table2 = app.add_subcommand("table2", "per-filter combination matrix");
    std::string t2_old, t2_new, t2_out;
    int t2_from = 1980, t2_to = 2016;
    cmd_table2->add_option("--old", t2_old)->required();
    cmd_table2->add_option("--new", t2_new)->required();
    cmd_table2->add_option("--from", t2_from);
    cmd_table2->add_option("--to", t2_to);
    cmd_table2->add_option("--out", t2_out)->required();

    // trends
    auto* cmd_trends = app.add_subcommand("trends", "year series of green family counts");
    std::string tr_store, tr_old, tr_new, tr_group, tr_filter = "none", tr_out;
    int tr_from = 1980, tr_to = 2016;
    cmd_trends->add_option("--store", tr_store, "snapshot store directory");
    cmd_trends->add_option("--old", tr_old, "old store (for --group)");
    cmd_trends->add_option("--new", tr_new, "new store (for --group)");
    cmd_trends->add_option("--group", tr_group, "partition group a|b|c|d");
    cmd_trends->add_option("--filter", tr_filter, "none|famsize|cited|epo|uspto|triadic");
    cmd_trends->add_option("--from", tr_from);
    cmd_trends->add_option("--to", tr_to);
    cmd_trends->add_option("--out", tr_out)->required();

    // rank
    auto* cmd_rank = app.add_subcommand("rank", "office or Y02-group rankings with shares");
    std::string rk_by, rk_set, rk_old, rk_new, rk_filter = "none", rk_out;
    std::size_t rk_top = 10;
    int rk_from = 1980, rk_to = 2016;
    cmd_rank->add_option("--by", rk_by, "group|office")->required();
    cmd_rank->add_option("--set", rk_set, "reclass|expansion|filtered")->required();
    cmd_rank->add_option("--old", rk_old)->required();
    cmd_rank->add_option("--new", rk_new)->required();
    cmd_rank->add_option("--filter", rk_filter, "filter for --set filtered");
    cmd_rank->add_option("--top", rk_top);
    cmd_rank->add_option("--from", rk_from);
    cmd_rank->add_option("--to", rk_to);
    cmd_rank->add_option("--out", rk_out)->required();

    // classdrift
    auto* cmd_drift = app.add_subcommand("classdrift", "per-class churn, fits, turbulence");
    std::string cd_old, cd_new, cd_level = "class", cd_out;
    std::uint64_t cd_min_size = 1000;
    int cd_from = 1980, cd_to = 2016;
    std::size_t cd_top = 10;
    cmd_drift->add_option("--old", cd_old)->required();
    cmd_drift->add_option("--new", cd_new)->required();
    cmd_drift->add_option("--level", cd_level, "class|subclass");
    cmd_drift->add_option("--min-size", cd_min_size);
    cmd_drift->add_option("--top", cd_top);
    cmd_drift->add_option("--from", cd_from);
    cmd_drift->add_option("--to", cd_to);
    cmd_drift->add_option("--out", cd_out)->required();

    // schemediff
    auto* cmd_scheme = app.add_subcommand("schemediff", "diff two scheme TSV files");
    std::string sd_old, sd_new, sd_out;
    cmd_scheme->add_option("--old", sd_old)->required();
    cmd_scheme->add_option("--new", sd_new)->required();
    cmd_scheme->add_option("--out", sd_out)->required();

    // synth
    auto* cmd_synth = app.add_subcommand("synth", "generate a paired synthetic snapshot release");
    std::string sy_config, sy_out;
    cmd_synth->add_option("--config", sy_config)->required();
    cmd_synth->add_option("--out", sy_out)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    (void)threads_option(threads); // bound accepted; pipeline is deterministic for any N

    OutputSet outputs;
    try {
        if (*cmd_ingest) {
            IngestReport report;
            SnapshotStore store = ingest_snapshot(ingest_paths, ingest_label, report);
            fs::create_directories(ingest_out);
            save_store(store, (fs::path(ingest_out) / "store.bin").string());
            outputs.note((fs::path(ingest_out) / "store.bin").string());
            json j;
            j["label"] = ingest_label;
            j["application_rows"] = report.application_rows;
            j["classification_rows"] = report.classification_rows;
            j["citation_rows"] = report.citation_rows;
            j["duplicate_applications"] = report.duplicate_applications;
            j["duplicate_classifications"] = report.duplicate_classifications;
            j["duplicate_citations"] = report.duplicate_citations;
            j["self_citations"] = report.self_citations;
            j["dangling_classifications"] = report.dangling_classifications;
            j["dangling_citations"] = report.dangling_citations;
            j["malformed_rows"] = report.malformed_rows;
            j["applications_kept"] = store.applications.size();
            auto out = outputs.create((fs::path(ingest_out) / "ingest_report.json").string());
            out << j.dump(2) << '\n';
            write_run_manifest(outputs, ingest_out, argv_copy);
        } else if (*cmd_effects) {
            auto snap_old = load_snapshot(eff_old);
            auto snap_new = load_snapshot(eff_new);
            YearWindow window{eff_from, eff_to};
            auto partition = decompose(snap_old.families, snap_new.families, window);

            auto groups = outputs.create((fs::path(eff_out) / "groups.csv").string());
            groups << "family_id,group\n";
            auto dump_group = [&](const std::vector<std::uint64_t>& ids, char g) {
                for (auto id : ids) {
                    groups << id << ',' << g << '\n';
                }
            };
            dump_group(partition.group_a, 'A');
            dump_group(partition.group_b, 'B');
            dump_group(partition.group_c, 'C');
            dump_group(partition.group_d, 'D');

            auto hist = outputs.create((fs::path(eff_out) / "histograms.csv").string());
            hist << "year,group_a,group_b,group_c,group_d\n";
            for (int year = window.from_year; year <= window.to_year; ++year) {
                auto at = [&](const std::map<int, std::uint64_t>& h) {
                    auto it = h.find(year);
                    return it == h.end() ? std::uint64_t(0) : it->second;
                };
                hist << year << ',' << at(partition.hist_a) << ',' << at(partition.hist_b) << ','
                     << at(partition.hist_c) << ',' << at(partition.hist_d) << '\n';
            }

            std::uint64_t total = partition.new_green_total();
            json shares;
            shares["window"] = {window.from_year, window.to_year};
            shares["group_sizes"] = {{"a", partition.group_a.size()},
                                     {"b", partition.group_b.size()},
                                     {"c", partition.group_c.size()},
                                     {"d", partition.group_d.size()}};
            shares["new_green_total"] = total;
            shares["reclassification_share"] =
                total > partition.group_d.size() ? reclassification_share(partition, total) : 0.0;
            shares["set_expansion_share"] =
                total > partition.group_c.size() ? set_expansion_share(partition, total) : 0.0;
            shares["diagnostics"] = {
                {"new_green_outside_window", partition.new_green_outside_window},
                {"old_green_absent_from_new", partition.old_green_absent_from_new},
                {"window_disagreements", partition.window_disagreements}};
            auto out = outputs.create((fs::path(eff_out) / "shares.json").string());
            out << shares.dump(2) << '\n';
            write_run_manifest(outputs, eff_out, argv_copy);
        } else if (*cmd_table2) {
            auto snap_old = load_snapshot(t2_old);
            auto snap_new = load_snapshot(t2_new);
            YearWindow window{t2_from, t2_to};
            auto partition = decompose(snap_old.families, snap_new.families, window);
            auto rows = combination_table(snap_old.families, snap_new.families, partition);
            auto out = outputs.create(t2_out);
            out << "filter,count_" << snap_old.store.label << ",count_" << snap_new.store.label
                << ",reclassification,set_expansion\n";
            for (const auto& row : rows) {
                out << filter_name(row.filter) << ',' << row.count_old << ',' << row.count_new
                    << ',' << row.count_reclass << ',' << row.count_expansion << '\n';
            }
        } else if (*cmd_trends) {
            YearWindow window{tr_from, tr_to};
            if (!tr_group.empty()) {
                if (tr_old.empty() || tr_new.empty()) {
                    throw ConfigError("--group requires --old and --new stores");
                }
                auto snap_old = load_snapshot(tr_old);
                auto snap_new = load_snapshot(tr_new);
                auto partition = decompose(snap_old.families, snap_new.families, window);
                const std::map<int, std::uint64_t>* histogram = nullptr;
                if (tr_group == "a") histogram = &partition.hist_a;
                else if (tr_group == "b") histogram = &partition.hist_b;
                else if (tr_group == "c") histogram = &partition.hist_c;
                else if (tr_group == "d") histogram = &partition.hist_d;
                else throw ConfigError("unknown group: " + tr_group);
                TrendSeries series;
                series.label = "group_" + tr_group;
                for (int year = window.from_year; year <= window.to_year; ++year) {
                    auto it = histogram->find(year);
                    series.points[year] = it == histogram->end() ? 0 : it->second;
                }
                write_trend_csv(outputs, tr_out, series);
            } else {
                if (tr_store.empty()) {
                    throw ConfigError("trends needs --store or --group with --old/--new");
                }
                auto snap = load_snapshot(tr_store);
                QualityFilter f = parse_filter(tr_filter);
                auto greens = green_in_window(snap.families, window);
                std::erase_if(greens, [&](const FamilyRecord* fam) { return !filter_accepts(*fam, f); });
                write_trend_csv(outputs, tr_out, trend(greens, window, tr_filter));
            }
        } else if (*cmd_rank) {
            YearWindow window{rk_from, rk_to};
            auto snap_old = load_snapshot(rk_old);
            auto snap_new = load_snapshot(rk_new);
            auto partition = decompose(snap_old.families, snap_new.families, window);
            auto reference = green_in_window(snap_new.families, window);

            std::vector<const FamilyRecord*> ranked;
            if (rk_set == "reclass" || rk_set == "expansion") {
                const auto& ids = rk_set == "reclass" ? partition.group_c : partition.group_d;
                std::unordered_set<std::uint64_t> in_set(ids.begin(), ids.end());
                for (const auto* fam : reference) {
                    if (in_set.contains(fam->family_id)) {
                        ranked.push_back(fam);
                    }
                }
            } else if (rk_set == "filtered") {
                QualityFilter f = parse_filter(rk_filter);
                for (const auto* fam : reference) {
                    if (filter_accepts(*fam, f)) {
                        ranked.push_back(fam);
                    }
                }
            } else {
                throw ConfigError("unknown --set: " + rk_set);
            }

            std::vector<RankedEntry> entries;
            if (rk_by == "group") {
                entries = rank_by_group(ranked, reference, rk_top);
            } else if (rk_by == "office") {
                entries = rank_by_office(ranked, reference, rk_top);
            } else {
                throw ConfigError("unknown --by: " + rk_by);
            }
            write_ranking_csv(outputs, rk_out, entries);
        } else if (*cmd_drift) {
            auto snap_old = load_snapshot(cd_old);
            auto snap_new = load_snapshot(cd_new);
            CpcLevel level;
            if (cd_level == "class") level = CpcLevel::Class;
            else if (cd_level == "subclass") level = CpcLevel::Subclass;
            else throw ConfigError("unknown --level: " + cd_level);
            YearWindow window{cd_from, cd_to};
            auto drift = general_reclassification(snap_old.families, snap_new.families, level, window);

            auto points = outputs.create((fs::path(cd_out) / "class_points.csv").string());
            points << "class,size,added,removed\n";
            for (const auto& point : drift.points) {
                points << point.class_code << ',' << point.size_new << ',' << point.added << ','
                       << point.removed << '\n';
            }

            json fits;
            fits["aggregate_rate"] = drift.aggregate_rate;
            auto fit_of = [&](auto value_of, const char* key) {
                std::vector<std::pair<double, double>> xy;
                for (const auto& point : drift.points) {
                    xy.emplace_back(double(point.size_new), double(value_of(point)));
                }
                try {
                    FitResult fit = loglog_fit(xy, double(cd_min_size));
                    fits[key] = {{"slope", fit.slope},
                                 {"intercept", fit.intercept},
                                 {"r2", fit.r_squared},
                                 {"n", fit.n_points}};
                } catch (const InsufficientPoints&) {
                    fits[key] = nullptr;
                }
            };
            fit_of([](const ClassReclassPoint& p) { return p.added; }, "added_fit");
            fit_of([](const ClassReclassPoint& p) { return p.removed; }, "removed_fit");
            auto fit_out = outputs.create((fs::path(cd_out) / "fits.json").string());
            fit_out << fits.dump(2) << '\n';

            auto dump_turbulence = [&](TurbulenceMode mode, const std::string& name) {
                auto top = top_turbulent_classes(drift.points, cd_top, mode, cd_min_size);
                auto out = outputs.create((fs::path(cd_out) / name).string());
                out << "class,size,added,removed\n";
                for (const auto& point : top) {
                    out << point.class_code << ',' << point.size_new << ',' << point.added << ','
                        << point.removed << '\n';
                }
            };
            dump_turbulence(TurbulenceMode::Absolute, "turbulence_absolute.csv");
            dump_turbulence(TurbulenceMode::Relative, "turbulence_relative.csv");
            write_run_manifest(outputs, cd_out, argv_copy);
        } else if (*cmd_scheme) {
            auto deltas = scheme_diff(load_scheme_tsv(sd_old), load_scheme_tsv(sd_new));
            auto out = outputs.create(sd_out);
            out << "subclass,deleted,added,retitled,indent_changed\n";
            auto join = [](const std::vector<CpcSymbol>& symbols) {
                std::string s;
                for (std::size_t i = 0; i < symbols.size(); ++i) {
                    if (i) {
                        s += ';';
                    }
                    s += render_symbol(symbols[i]);
                }
                return s;
            };
            for (const auto& delta : deltas) {
                out << delta.subclass << ',' << join(delta.deleted) << ',' << join(delta.added)
                    << ',' << join(delta.retitled) << ',' << join(delta.indent_changed) << '\n';
            }
        } else if (*cmd_synth) {
            GeneratorConfig config = load_generator_config(sy_config);
            auto result = generate(config, sy_out);
            outputs.note(result.manifest_path);
            write_run_manifest(outputs, sy_out, argv_copy);
        }
    } catch (const SchemaError& e) {
        outputs.remove_all();
        std::cerr << json{{"error", "schema"}, {"message", e.what()}}.dump() << '\n';
        return 2;
    } catch (const ConfigError& e) {
        outputs.remove_all();
        std::cerr << json{{"error", "config"}, {"message", e.what()}}.dump() << '\n';
        return 3;
    } catch (const std::exception& e) {
        outputs.remove_all();
        std::cerr << json{{"error", "internal"}, {"message", e.what()}}.dump() << '\n';
        return 4;
    }
    return 0;
}
