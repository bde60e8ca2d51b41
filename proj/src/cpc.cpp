#include "patdrift/cpc.hpp"
#include "patdrift/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace patdrift {

namespace {

bool valid_section(char c) { return (c >= 'A' && c <= 'H') || c == 'Y'; }

unsigned parse_digits(std::string_view text, std::string_view raw, unsigned max) {
    unsigned value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || value > max) {
        throw MalformedSymbol("bad group digits in CPC symbol: " + std::string(raw));
    }
    return value;
}

} // namespace

CpcSymbol parse_symbol(std::string_view raw) {
    if (raw.empty()) {
        throw MalformedSymbol("empty CPC symbol");
    }
    // Normalization strips internal whitespace, which also folds the padded
    // official form ("Y02E  60/10") into the compact one.
    std::string compact;
    compact.reserve(raw.size());
    for (char c : raw) {
        if (!std::isspace(static_cast<unsigned char>(c))) {
            compact.push_back(c);
        }
    }
    if (compact.size() < 4) {
        throw MalformedSymbol("CPC symbol too short: " + std::string(raw));
    }

    CpcSymbol s;
    s.section = compact[0];
    if (!valid_section(s.section)) {
        throw MalformedSymbol("bad section letter in CPC symbol: " + std::string(raw));
    }
    if (!std::isdigit(static_cast<unsigned char>(compact[1])) ||
        !std::isdigit(static_cast<unsigned char>(compact[2]))) {
        throw MalformedSymbol("bad class digits in CPC symbol: " + std::string(raw));
    }
    s.class_num = std::uint8_t((compact[1] - '0') * 10 + (compact[2] - '0'));
    s.subclass = compact[3];
    if (!std::isupper(static_cast<unsigned char>(s.subclass))) {
        throw MalformedSymbol("bad subclass letter in CPC symbol: " + std::string(raw));
    }
    if (compact.size() == 4) {
        return s; // subclass-level symbol
    }

    std::string_view rest = std::string_view(compact).substr(4);
    auto slash = rest.find('/');
    std::string_view group_part = rest.substr(0, slash == std::string_view::npos ? rest.size() : slash);
    if (group_part.empty()) {
        throw MalformedSymbol("missing main group in CPC symbol: " + std::string(raw));
    }
    s.main_group = std::uint16_t(parse_digits(group_part, raw, 9999));
    if (s.main_group == 0) {
        throw MalformedSymbol("main group must be 1-9999: " + std::string(raw));
    }
    if (slash != std::string_view::npos) {
        std::string_view sub_part = rest.substr(slash + 1);
        if (sub_part.empty()) {
            throw MalformedSymbol("missing subgroup after '/': " + std::string(raw));
        }
        s.subgroup = parse_digits(sub_part, raw, 999999);
    }
    return s;
}

std::string render_symbol(const CpcSymbol& s) {
    std::string out;
    out.push_back(s.section);
    out.push_back(char('0' + s.class_num / 10));
    out.push_back(char('0' + s.class_num % 10));
    out.push_back(s.subclass);
    if (s.main_group == 0) {
        return out;
    }
    out += std::to_string(s.main_group);
    out.push_back('/');
    // CPC subgroups are printed with at least two digits ("/00", "/02").
    std::string sub = std::to_string(s.subgroup);
    if (sub.size() < 2) {
        sub.insert(sub.begin(), '0');
    }
    out += sub;
    return out;
}

bool is_green(const CpcSymbol& s) {
    return s.section == 'Y' && s.class_num == 2;
}

std::string truncate(const CpcSymbol& s, CpcLevel level) {
    std::string out;
    out.push_back(s.section);
    if (level == CpcLevel::Section) {
        return out;
    }
    out.push_back(char('0' + s.class_num / 10));
    out.push_back(char('0' + s.class_num % 10));
    if (level == CpcLevel::Class) {
        return out;
    }
    out.push_back(s.subclass);
    if (level == CpcLevel::Subclass) {
        return out;
    }
    if (s.main_group != 0) {
        out += std::to_string(s.main_group);
    }
    return out;
}

std::vector<SchemeDelta> scheme_diff(const std::vector<SchemeEntry>& old_scheme,
                                     const std::vector<SchemeEntry>& new_scheme) {
    auto index = [](const std::vector<SchemeEntry>& scheme) {
        std::map<CpcSymbol, const SchemeEntry*> by_symbol;
        for (const auto& entry : scheme) {
            auto [it, inserted] = by_symbol.emplace(entry.symbol, &entry);
            if (!inserted) {
                throw DuplicateSymbol("scheme lists symbol twice: " + render_symbol(entry.symbol));
            }
        }
        return by_symbol;
    };
    auto old_by_symbol = index(old_scheme);
    auto new_by_symbol = index(new_scheme);

    std::map<std::string, SchemeDelta> deltas;
    auto delta_for = [&](const CpcSymbol& s) -> SchemeDelta& {
        std::string sc = truncate(s, CpcLevel::Subclass);
        auto& d = deltas[sc];
        d.subclass = sc;
        return d;
    };

    for (const auto& [symbol, entry] : old_by_symbol) {
        auto it = new_by_symbol.find(symbol);
        if (it == new_by_symbol.end()) {
            delta_for(symbol).deleted.push_back(symbol);
        } else {
            if (entry->title != it->second->title) {
                delta_for(symbol).retitled.push_back(symbol);
            }
            if (entry->indent_level != it->second->indent_level) {
                delta_for(symbol).indent_changed.push_back(symbol);
            }
        }
    }
    for (const auto& [symbol, entry] : new_by_symbol) {
        if (!old_by_symbol.contains(symbol)) {
            delta_for(symbol).added.push_back(symbol);
        }
    }

    std::vector<SchemeDelta> out;
    for (auto& [subclass, delta] : deltas) {
        if (!delta.empty()) {
            out.push_back(std::move(delta));
        }
    }
    return out;
}

std::vector<SchemeEntry> load_scheme_tsv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw SchemaError("cannot open scheme file: " + path);
    }
    std::string line;
    if (!std::getline(in, line) || line != "symbol\tindent_level\ttitle") {
        throw SchemaError("bad scheme TSV header in " + path);
    }
    std::vector<SchemeEntry> entries;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        auto t1 = line.find('\t');
        auto t2 = line.find('\t', t1 == std::string::npos ? t1 : t1 + 1);
        if (t1 == std::string::npos || t2 == std::string::npos) {
            throw SchemaError("bad scheme TSV row: " + line);
        }
        SchemeEntry entry;
        entry.symbol = parse_symbol(line.substr(0, t1));
        entry.indent_level = int(parse_digits(std::string_view(line).substr(t1 + 1, t2 - t1 - 1), line, 1000));
        entry.title = line.substr(t2 + 1);
        entries.push_back(std::move(entry));
    }
    return entries;
}

} // namespace patdrift
