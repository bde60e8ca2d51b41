#pragma once

#include "patdrift/snapshot.hpp"

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace fixture {

// Scratch directory under the build tree, wiped per test case name.
inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "patdrift_tests" / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::string write_lines(const std::filesystem::path& path,
                               const std::vector<std::string>& lines) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    for (const auto& line : lines) {
        out << line << '\n';
    }
    return path.string();
}

// Writes the three snapshot TSVs into dir and returns their paths.
inline patdrift::SnapshotPaths write_snapshot(const std::filesystem::path& dir,
                                              const std::vector<std::string>& application_rows,
                                              const std::vector<std::string>& classification_rows,
                                              const std::vector<std::string>& citation_rows) {
    std::filesystem::create_directories(dir);
    patdrift::SnapshotPaths paths;
    std::vector<std::string> apps = {"appln_id\tfamily_id\tauthority\tfiling_date"};
    apps.insert(apps.end(), application_rows.begin(), application_rows.end());
    paths.applications = write_lines(dir / "applications.tsv", apps);
    std::vector<std::string> cls = {"appln_id\tcpc_symbol"};
    cls.insert(cls.end(), classification_rows.begin(), classification_rows.end());
    paths.classifications = write_lines(dir / "classifications.tsv", cls);
    std::vector<std::string> cits = {"citing_appln_id\tcited_appln_id"};
    cits.insert(cits.end(), citation_rows.begin(), citation_rows.end());
    paths.citations = write_lines(dir / "citations.tsv", cits);
    return paths;
}

} // namespace fixture
