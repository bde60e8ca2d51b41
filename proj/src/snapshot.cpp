#include "patdrift/snapshot.hpp"
#include "patdrift/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cstring>
#include <fstream>

namespace patdrift {

namespace {

bool parse_u64(std::string_view text, std::uint64_t& out) {
    if (text.empty()) {
        return false;
    }
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

// YYYY-MM-DD
bool parse_date(std::string_view text, std::int32_t& y, std::int32_t& m, std::int32_t& d) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        return false;
    }
    std::uint64_t yy = 0, mm = 0, dd = 0;
    if (!parse_u64(text.substr(0, 4), yy) || !parse_u64(text.substr(5, 2), mm) ||
        !parse_u64(text.substr(8, 2), dd)) {
        return false;
    }
    if (mm < 1 || mm > 12 || dd < 1 || dd > 31) {
        return false;
    }
    y = std::int32_t(yy);
    m = std::int32_t(mm);
    d = std::int32_t(dd);
    return true;
}

// Splits a line into exactly n tab-separated fields.
bool split_tabs(std::string_view line, std::string_view* fields, std::size_t n) {
    std::size_t start = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        auto tab = line.find('\t', start);
        if (tab == std::string_view::npos) {
            return false;
        }
        fields[i] = line.substr(start, tab - start);
        start = tab + 1;
    }
    std::string_view last = line.substr(start);
    if (last.find('\t') != std::string_view::npos) {
        return false;
    }
    fields[n - 1] = last;
    return true;
}

std::ifstream open_with_header(const std::string& path, std::string_view expected_header) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw SchemaError("cannot open input file: " + path);
    }
    std::string header;
    if (!std::getline(in, header)) {
        throw SchemaError("empty input file: " + path);
    }
    if (!header.empty() && header.back() == '\r') {
        header.pop_back();
    }
    if (header != expected_header) {
        throw SchemaError("bad header in " + path + ": expected '" + std::string(expected_header) +
                          "', got '" + header + "'");
    }
    return in;
}

void sort_unique(std::vector<std::uint64_t>& v, std::uint64_t& dup_counter) {
    std::sort(v.begin(), v.end());
    auto last = std::unique(v.begin(), v.end());
    dup_counter += std::uint64_t(v.end() - last);
    v.erase(last, v.end());
    v.shrink_to_fit();
}

void sort_unique32(std::vector<std::uint32_t>& v, std::uint64_t& dup_counter) {
    std::sort(v.begin(), v.end());
    auto last = std::unique(v.begin(), v.end());
    dup_counter += std::uint64_t(v.end() - last);
    v.erase(last, v.end());
    v.shrink_to_fit();
}

} // namespace

struct StoreBuilder {
    static void build_index(SnapshotStore& store) {
        store.id_index_.clear();
        store.id_index_.reserve(store.applications.size());
        for (std::size_t i = 0; i < store.applications.size(); ++i) {
            store.id_index_.emplace(store.applications[i].appln_id, std::uint32_t(i));
        }
    }
};

const ApplicationRecord* SnapshotStore::find_application(std::uint64_t appln_id) const {
    auto it = id_index_.find(appln_id);
    return it == id_index_.end() ? nullptr : &applications[it->second];
}

std::size_t SnapshotStore::index_of(std::uint64_t appln_id) const {
    auto it = id_index_.find(appln_id);
    return it == id_index_.end() ? npos : it->second;
}

SnapshotStore ingest_snapshot(const SnapshotPaths& paths, const std::string& label,
                              IngestReport& report) {
    SnapshotStore store;
    store.label = label;
    report = IngestReport{};

    // Pass 1: applications.
    {
        auto in = open_with_header(paths.applications, "appln_id\tfamily_id\tauthority\tfiling_date");
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') {
                line.pop_back();
            }
            if (line.empty()) {
                continue;
            }
            ++report.application_rows;
            std::string_view fields[4];
            ApplicationRecord rec;
            if (!split_tabs(line, fields, 4) || !parse_u64(fields[0], rec.appln_id) ||
                rec.appln_id == 0 || !parse_u64(fields[1], rec.family_id) || rec.family_id == 0 ||
                fields[2].size() != 2 || fields[2][0] < 'A' || fields[2][0] > 'Z' ||
                fields[2][1] < 'A' || fields[2][1] > 'Z' ||
                !parse_date(fields[3], rec.filing_year, rec.filing_month, rec.filing_day)) {
                ++report.malformed_rows;
                continue;
            }
            rec.authority[0] = fields[2][0];
            rec.authority[1] = fields[2][1];
            store.applications.push_back(rec);
        }
    }
    // Canonical order, independent of input row order. Duplicate ids keep the
    // smallest record under full-tuple comparison.
    std::sort(store.applications.begin(), store.applications.end(),
              [](const ApplicationRecord& a, const ApplicationRecord& b) {
                  return std::tie(a.appln_id, a.family_id, a.authority[0], a.authority[1],
                                  a.filing_year, a.filing_month, a.filing_day) <
                         std::tie(b.appln_id, b.family_id, b.authority[0], b.authority[1],
                                  b.filing_year, b.filing_month, b.filing_day);
              });
    {
        auto last = std::unique(store.applications.begin(), store.applications.end(),
                                [](const ApplicationRecord& a, const ApplicationRecord& b) {
                                    return a.appln_id == b.appln_id;
                                });
        report.duplicate_applications =
            std::uint64_t(store.applications.end() - last);
        store.applications.erase(last, store.applications.end());
        store.applications.shrink_to_fit();
    }
    StoreBuilder::build_index(store);

    // Pass 2: classifications.
    store.classifications.assign(store.applications.size(), {});
    {
        auto in = open_with_header(paths.classifications, "appln_id\tcpc_symbol");
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') {
                line.pop_back();
            }
            if (line.empty()) {
                continue;
            }
            ++report.classification_rows;
            std::string_view fields[2];
            std::uint64_t appln_id = 0;
            if (!split_tabs(line, fields, 2) || !parse_u64(fields[0], appln_id)) {
                ++report.malformed_rows;
                continue;
            }
            std::uint64_t key = 0;
            try {
                key = parse_symbol(fields[1]).key();
            } catch (const MalformedSymbol&) {
                ++report.malformed_rows;
                continue;
            }
            std::size_t idx = store.index_of(appln_id);
            if (idx == SnapshotStore::npos) {
                ++report.dangling_classifications;
                continue;
            }
            store.classifications[idx].push_back(key);
        }
        for (auto& v : store.classifications) {
            sort_unique(v, report.duplicate_classifications);
        }
    }

    // Pass 3: citations.
    store.citations_by_cited.assign(store.applications.size(), {});
    {
        auto in = open_with_header(paths.citations, "citing_appln_id\tcited_appln_id");
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') {
                line.pop_back();
            }
            if (line.empty()) {
                continue;
            }
            ++report.citation_rows;
            std::string_view fields[2];
            std::uint64_t citing = 0, cited = 0;
            if (!split_tabs(line, fields, 2) || !parse_u64(fields[0], citing) ||
                !parse_u64(fields[1], cited)) {
                ++report.malformed_rows;
                continue;
            }
            if (citing == cited) {
                ++report.self_citations;
                continue;
            }
            std::size_t citing_idx = store.index_of(citing);
            std::size_t cited_idx = store.index_of(cited);
            if (citing_idx == SnapshotStore::npos || cited_idx == SnapshotStore::npos) {
                ++report.dangling_citations;
                continue;
            }
            store.citations_by_cited[cited_idx].push_back(std::uint32_t(citing_idx));
        }
        for (auto& v : store.citations_by_cited) {
            sort_unique32(v, report.duplicate_citations);
        }
    }
    return store;
}

std::uint64_t validate_window(const SnapshotStore& store, int from_year, int to_year) {
    std::uint64_t count = 0;
    for (const auto& app : store.applications) {
        if (app.filing_year >= from_year && app.filing_year <= to_year) {
            ++count;
        }
    }
    return count;
}

namespace {

constexpr char kMagic[4] = {'P', 'D', 'S', 'T'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void write_pod(std::ofstream& out, const T& value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
void read_pod(std::ifstream& in, T& value) {
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in) {
        throw SchemaError("truncated store file");
    }
}

} // namespace

void save_store(const SnapshotStore& store, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw SchemaError("cannot write store file: " + path);
    }
    out.write(kMagic, 4);
    write_pod(out, kVersion);
    write_pod(out, std::uint64_t(store.label.size()));
    out.write(store.label.data(), std::streamsize(store.label.size()));
    write_pod(out, std::uint64_t(store.applications.size()));
    for (const auto& app : store.applications) {
        write_pod(out, app.appln_id);
        write_pod(out, app.family_id);
        out.write(app.authority, 2);
        write_pod(out, app.filing_year);
        write_pod(out, app.filing_month);
        write_pod(out, app.filing_day);
    }
    for (const auto& v : store.classifications) {
        write_pod(out, std::uint64_t(v.size()));
        out.write(reinterpret_cast<const char*>(v.data()),
                  std::streamsize(v.size() * sizeof(std::uint64_t)));
    }
    for (const auto& v : store.citations_by_cited) {
        write_pod(out, std::uint64_t(v.size()));
        out.write(reinterpret_cast<const char*>(v.data()),
                  std::streamsize(v.size() * sizeof(std::uint32_t)));
    }
    if (!out) {
        throw SchemaError("write failure on store file: " + path);
    }
}

SnapshotStore load_store(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw SchemaError("cannot open store file: " + path);
    }
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) {
        throw SchemaError("not a snapshot store file: " + path);
    }
    std::uint32_t version = 0;
    read_pod(in, version);
    if (version != kVersion) {
        throw SchemaError("unsupported store version " + std::to_string(version) + " in " + path);
    }
    SnapshotStore store;
    std::uint64_t label_size = 0;
    read_pod(in, label_size);
    store.label.resize(label_size);
    in.read(store.label.data(), std::streamsize(label_size));
    std::uint64_t n = 0;
    read_pod(in, n);
    store.applications.resize(n);
    for (auto& app : store.applications) {
        read_pod(in, app.appln_id);
        read_pod(in, app.family_id);
        in.read(app.authority, 2);
        read_pod(in, app.filing_year);
        read_pod(in, app.filing_month);
        read_pod(in, app.filing_day);
    }
    store.classifications.resize(n);
    for (auto& v : store.classifications) {
        std::uint64_t sz = 0;
        read_pod(in, sz);
        v.resize(sz);
        in.read(reinterpret_cast<char*>(v.data()), std::streamsize(sz * sizeof(std::uint64_t)));
    }
    store.citations_by_cited.resize(n);
    for (auto& v : store.citations_by_cited) {
        std::uint64_t sz = 0;
        read_pod(in, sz);
        v.resize(sz);
        in.read(reinterpret_cast<char*>(v.data()), std::streamsize(sz * sizeof(std::uint32_t)));
    }
    if (!in) {
        throw SchemaError("truncated store file: " + path);
    }
    StoreBuilder::build_index(store);
    return store;
}

} // namespace patdrift
