#include "patdrift/citations.hpp"
#include "patdrift/effects.hpp"
#include "patdrift/stats.hpp"
#include "patdrift/synth.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace patdrift;

namespace {

std::vector<const FamilyRecord*> green_subset(const std::vector<FamilyRecord>& families,
                                              YearWindow window) {
    std::vector<const FamilyRecord*> out;
    for (const auto& fam : families) {
        if (fam.is_green && window.contains(fam.earliest_year)) {
            out.push_back(&fam);
        }
    }
    return out;
}

} // namespace

PYBIND11_MODULE(patdrift, m) {
    m.doc() = "Snapshot drift analysis for green patent statistics";

    py::class_<CpcSymbol>(m, "CpcSymbol")
        .def(py::init<>())
        .def_readwrite("section", &CpcSymbol::section)
        .def_readwrite("class_num", &CpcSymbol::class_num)
        .def_readwrite("subclass", &CpcSymbol::subclass)
        .def_readwrite("main_group", &CpcSymbol::main_group)
        .def_readwrite("subgroup", &CpcSymbol::subgroup)
        .def("__repr__", [](const CpcSymbol& s) { return "CpcSymbol(" + render_symbol(s) + ")"; })
        .def("__eq__", [](const CpcSymbol& a, const CpcSymbol& b) { return a == b; })
        .def("__lt__", [](const CpcSymbol& a, const CpcSymbol& b) { return a < b; });

    py::enum_<CpcLevel>(m, "CpcLevel")
        .value("SECTION", CpcLevel::Section)
        .value("CLASS", CpcLevel::Class)
        .value("SUBCLASS", CpcLevel::Subclass)
        .value("GROUP", CpcLevel::Group);

    m.def("parse_symbol", &parse_symbol, py::arg("raw"));
    m.def("render_symbol", &render_symbol, py::arg("symbol"));
    m.def("is_green", &is_green, py::arg("symbol"));
    m.def("truncate", &patdrift::truncate, py::arg("symbol"), py::arg("level"));

    py::class_<IngestReport>(m, "IngestReport")
        .def_readonly("application_rows", &IngestReport::application_rows)
        .def_readonly("classification_rows", &IngestReport::classification_rows)
        .def_readonly("citation_rows", &IngestReport::citation_rows)
        .def_readonly("duplicate_applications", &IngestReport::duplicate_applications)
        .def_readonly("duplicate_classifications", &IngestReport::duplicate_classifications)
        .def_readonly("duplicate_citations", &IngestReport::duplicate_citations)
        .def_readonly("dangling_classifications", &IngestReport::dangling_classifications)
        .def_readonly("dangling_citations", &IngestReport::dangling_citations)
        .def_readonly("malformed_rows", &IngestReport::malformed_rows);

    py::class_<SnapshotStore>(m, "SnapshotStore")
        .def_readonly("label", &SnapshotStore::label)
        .def_property_readonly("n_applications",
                               [](const SnapshotStore& s) { return s.applications.size(); });

    py::class_<SnapshotPaths>(m, "SnapshotPaths")
        .def(py::init<>())
        .def_readwrite("applications", &SnapshotPaths::applications)
        .def_readwrite("classifications", &SnapshotPaths::classifications)
        .def_readwrite("citations", &SnapshotPaths::citations);

    m.def(
        "ingest_snapshot",
        [](const SnapshotPaths& paths, const std::string& label) {
            IngestReport report;
            SnapshotStore store = ingest_snapshot(paths, label, report);
            return py::make_tuple(std::move(store), report);
        },
        py::arg("paths"), py::arg("label"));
    m.def(
        "ingest_snapshot",
        [](const std::string& applications, const std::string& classifications,
           const std::string& citations, const std::string& label) {
            IngestReport report;
            SnapshotStore store =
                ingest_snapshot({applications, classifications, citations}, label, report);
            return py::make_tuple(std::move(store), report);
        },
        py::arg("applications"), py::arg("classifications"), py::arg("citations"), py::arg("label"));
    m.def("validate_window", &validate_window, py::arg("store"), py::arg("from_year"),
          py::arg("to_year"));
    m.def("load_store", &load_store, py::arg("path"));
    m.def("save_store", &save_store, py::arg("store"), py::arg("path"));

    py::class_<FamilyRecord>(m, "FamilyRecord")
        .def_readonly("family_id", &FamilyRecord::family_id)
        .def_readonly("offices", &FamilyRecord::offices)
        .def_readonly("earliest_year", &FamilyRecord::earliest_year)
        .def_readonly("is_green", &FamilyRecord::is_green)
        .def_readonly("family_size", &FamilyRecord::family_size)
        .def_readonly("fwd_cit_5y", &FamilyRecord::fwd_cit_5y)
        .def_readonly("has_epo", &FamilyRecord::has_epo)
        .def_readonly("has_uspto", &FamilyRecord::has_uspto)
        .def_readonly("has_jpo", &FamilyRecord::has_jpo);

    py::enum_<QualityFilter>(m, "QualityFilter")
        .value("NONE", QualityFilter::NONE)
        .value("FAMSIZE_GT1", QualityFilter::FAMSIZE_GT1)
        .value("CITED_GT0", QualityFilter::CITED_GT0)
        .value("EPO", QualityFilter::EPO)
        .value("USPTO", QualityFilter::USPTO)
        .value("TRIADIC", QualityFilter::TRIADIC);

    m.def("build_families", &build_families, py::arg("store"));
    m.def("populate_citations", &populate_citations, py::arg("store"), py::arg("families"));
    m.def("forward_citations_5y", &forward_citations_5y, py::arg("store"), py::arg("families"));
    m.def(
        "apply_filter",
        [](const std::vector<FamilyRecord>& families, QualityFilter f) {
            std::vector<FamilyRecord> out;
            for (const auto* fam : apply_filter(families, f)) {
                out.push_back(*fam);
            }
            return out;
        },
        py::arg("families"), py::arg("filter"));
    m.def(
        "offices_of",
        [](const std::vector<FamilyRecord>& families) { return offices_of(families); },
        py::arg("families"));

    py::class_<YearWindow>(m, "YearWindow")
        .def(py::init<int, int>(), py::arg("from_year") = 1980, py::arg("to_year") = 2016)
        .def_readwrite("from_year", &YearWindow::from_year)
        .def_readwrite("to_year", &YearWindow::to_year);

    py::class_<EffectPartition>(m, "EffectPartition")
        .def_readonly("group_a", &EffectPartition::group_a)
        .def_readonly("group_b", &EffectPartition::group_b)
        .def_readonly("group_c", &EffectPartition::group_c)
        .def_readonly("group_d", &EffectPartition::group_d)
        .def_readonly("hist_c", &EffectPartition::hist_c)
        .def_readonly("hist_d", &EffectPartition::hist_d)
        .def_readonly("new_green_outside_window", &EffectPartition::new_green_outside_window)
        .def_readonly("old_green_absent_from_new", &EffectPartition::old_green_absent_from_new)
        .def_readonly("window_disagreements", &EffectPartition::window_disagreements)
        .def("new_green_total", &EffectPartition::new_green_total);

    py::class_<CombinationRow>(m, "CombinationRow")
        .def_property_readonly("filter", [](const CombinationRow& r) { return filter_name(r.filter); })
        .def_readonly("count_old", &CombinationRow::count_old)
        .def_readonly("count_new", &CombinationRow::count_new)
        .def_readonly("count_reclass", &CombinationRow::count_reclass)
        .def_readonly("count_expansion", &CombinationRow::count_expansion);

    m.def("decompose", &decompose, py::arg("old_families"), py::arg("new_families"),
          py::arg("window"));
    m.def("reclassification_share", &reclassification_share, py::arg("partition"),
          py::arg("new_green_total"));
    m.def("set_expansion_share", &set_expansion_share, py::arg("partition"),
          py::arg("new_green_total"));
    m.def("filtering_reduction", &filtering_reduction, py::arg("unfiltered"), py::arg("filtered"));
    m.def("combination_table", &combination_table, py::arg("old_families"), py::arg("new_families"),
          py::arg("partition"));
    m.def("table2_fixture", &table2_fixture);
    m.def("format_percent", &format_percent, py::arg("ratio"));

    py::class_<TrendSeries>(m, "TrendSeries")
        .def_readonly("label", &TrendSeries::label)
        .def_readonly("points", &TrendSeries::points);

    py::class_<FitResult>(m, "FitResult")
        .def_readonly("slope", &FitResult::slope)
        .def_readonly("intercept", &FitResult::intercept)
        .def_readonly("r_squared", &FitResult::r_squared)
        .def_readonly("n_points", &FitResult::n_points);

    m.def(
        "green_trend",
        [](const std::vector<FamilyRecord>& families, YearWindow window, const std::string& label) {
            return trend(green_subset(families, window), window, label);
        },
        py::arg("families"), py::arg("window"), py::arg("label") = "green");
    m.def("loglog_fit", &loglog_fit, py::arg("points"), py::arg("min_size") = 1000.0);

    py::class_<GeneratorConfig>(m, "GeneratorConfig")
        .def(py::init<>())
        .def_readwrite("seed", &GeneratorConfig::seed)
        .def_readwrite("n_families", &GeneratorConfig::n_families)
        .def_readwrite("green_share", &GeneratorConfig::green_share)
        .def_readwrite("reclass_rate", &GeneratorConfig::reclass_rate)
        .def_readwrite("expansion_rate", &GeneratorConfig::expansion_rate)
        .def_readwrite("citation_intensity", &GeneratorConfig::citation_intensity)
        .def("validate", &GeneratorConfig::validate);

    py::class_<GroundTruthEntry>(m, "GroundTruthEntry")
        .def_readonly("family_id", &GroundTruthEntry::family_id)
        .def_property_readonly("group",
                               [](const GroundTruthEntry& e) { return std::string(1, e.group); })
        .def_readonly("is_green_old", &GroundTruthEntry::is_green_old)
        .def_readonly("is_green_new", &GroundTruthEntry::is_green_new)
        .def_readonly("earliest_year", &GroundTruthEntry::earliest_year)
        .def_readonly("fwd_cit_5y_planted", &GroundTruthEntry::fwd_cit_5y_planted);

    py::class_<GroundTruth>(m, "GroundTruth")
        .def_readonly("entries", &GroundTruth::entries)
        .def("count", [](const GroundTruth& t, const std::string& g) {
            return t.count(g.empty() ? 'N' : g[0]);
        });

    py::class_<SynthResult>(m, "SynthResult")
        .def_readonly("old_paths", &SynthResult::old_paths)
        .def_readonly("new_paths", &SynthResult::new_paths)
        .def_readonly("truth", &SynthResult::truth)
        .def_property_readonly("manifest_path",
                               [](const SynthResult& r) { return r.manifest_path; });

    m.def("generate", &generate, py::arg("config"), py::arg("out_dir"));
}
