#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace patdrift {

/// Hierarchical CPC classification symbol. A subgroup of 0 encodes absence,
/// so subclass-level symbols ("Y02E") carry main_group = 0, subgroup = 0.
struct CpcSymbol {
    char section = 'A';        // A-H or Y
    std::uint8_t class_num = 0; // two-digit class, 0-99
    char subclass = 'A';
    std::uint16_t main_group = 0; // 0-9999, 0 = subclass-level symbol
    std::uint32_t subgroup = 0;   // 0-999999, 0 = group-level symbol

    auto operator<=>(const CpcSymbol&) const = default;

    /// Packs the symbol into a single integer preserving the total order.
    std::uint64_t key() const {
        return (std::uint64_t(section) << 56) | (std::uint64_t(class_num) << 48) |
               (std::uint64_t(subclass) << 40) | (std::uint64_t(main_group) << 20) |
               std::uint64_t(subgroup);
    }
    static CpcSymbol from_key(std::uint64_t k) {
        CpcSymbol s;
        s.section = char((k >> 56) & 0xff);
        s.class_num = std::uint8_t((k >> 48) & 0xff);
        s.subclass = char((k >> 40) & 0xff);
        s.main_group = std::uint16_t((k >> 20) & 0xfffff);
        s.subgroup = std::uint32_t(k & 0xfffff);
        return s;
    }
};

enum class CpcLevel { Section, Class, Subclass, Group };

/// Parses a CPC symbol in compact ("Y02E60/10") or padded official form
/// ("Y02E  60/10"). Throws MalformedSymbol on bad input.
CpcSymbol parse_symbol(std::string_view raw);

/// Canonical compact rendering; parse(render(s)) == s for every valid symbol.
std::string render_symbol(const CpcSymbol& s);

/// True iff the symbol carries the Y02 climate-mitigation tag.
bool is_green(const CpcSymbol& s);

/// Canonical truncation, e.g. group level of Y02E60/10 is "Y02E60".
std::string truncate(const CpcSymbol& s, CpcLevel level);

struct SchemeEntry {
    CpcSymbol symbol;
    std::string title;
    int indent_level = 0;
};

/// Per-subclass change set between two scheme versions.
struct SchemeDelta {
    std::string subclass; // 4-character code, e.g. "Y02E"
    std::vector<CpcSymbol> deleted;
    std::vector<CpcSymbol> added;
    std::vector<CpcSymbol> retitled;
    std::vector<CpcSymbol> indent_changed;

    bool empty() const {
        return deleted.empty() && added.empty() && retitled.empty() && indent_changed.empty();
    }
};

/// Diffs two scheme versions into per-subclass deltas, one per affected
/// subclass, ordered by subclass code. Throws DuplicateSymbol when a scheme
/// lists the same symbol twice.
std::vector<SchemeDelta> scheme_diff(const std::vector<SchemeEntry>& old_scheme,
                                     const std::vector<SchemeEntry>& new_scheme);

/// Loads a scheme TSV (header: symbol\tindent_level\ttitle).
std::vector<SchemeEntry> load_scheme_tsv(const std::string& path);

} // namespace patdrift
