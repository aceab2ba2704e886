#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rerisk {

/// Plain-text configuration: `[section]` or `[section name]` headers,
/// `key = value` lines, `#` or `;` comments. Keys before the first header
/// belong to the unnamed section "". Section and key order is preserved.
class Config {
public:
    struct Entry {
        std::string key;
        std::string value;
        int line = 0;
    };
    struct Section {
        std::string name;  ///< e.g. "panel" for "[panel reits]"
        std::string tag;   ///< e.g. "reits"; empty when absent
        int line = 0;
        std::vector<Entry> entries;

        [[nodiscard]] bool has(std::string_view key) const;
        [[nodiscard]] const Entry* find(std::string_view key) const;
        /// Throws ValidationError naming the section when the key is missing.
        [[nodiscard]] const std::string& get(std::string_view key) const;
        [[nodiscard]] std::string get_or(std::string_view key, std::string fallback) const;
        [[nodiscard]] double get_double(std::string_view key) const;
        [[nodiscard]] double get_double_or(std::string_view key, double fallback) const;
        [[nodiscard]] long long get_int(std::string_view key) const;
        [[nodiscard]] long long get_int_or(std::string_view key, long long fallback) const;
        [[nodiscard]] std::uint64_t get_u64_or(std::string_view key, std::uint64_t fallback) const;
        [[nodiscard]] bool get_bool_or(std::string_view key, bool fallback) const;
        /// Comma-separated numbers.
        [[nodiscard]] std::vector<double> get_doubles(std::string_view key) const;
        [[nodiscard]] std::vector<double> get_doubles_or(std::string_view key, std::vector<double> fallback) const;
        /// Comma-separated words, each trimmed.
        [[nodiscard]] std::vector<std::string> get_list(std::string_view key) const;
        [[nodiscard]] std::string describe() const;
    };

    /// Throws ParseError with `source:line` for malformed lines and
    /// duplicate keys within a section.
    static Config parse(std::string_view text, const std::string& source = "config");
    static Config load(const std::string& path);

    [[nodiscard]] const std::vector<Section>& sections() const { return sections_; }
    [[nodiscard]] const Section* find(std::string_view name, std::string_view tag = {}) const;
    [[nodiscard]] std::vector<const Section*> all(std::string_view name) const;
    [[nodiscard]] const std::string& source() const { return source_; }

private:
    std::string source_;
    std::vector<Section> sections_;
};

/// Strict number parsing (whole string, std::from_chars); nullopt on failure.
[[nodiscard]] std::optional<double> parse_double(std::string_view s);
[[nodiscard]] std::optional<long long> parse_int(std::string_view s);
[[nodiscard]] std::string_view trim(std::string_view s);
[[nodiscard]] std::vector<std::string_view> split(std::string_view s, char sep);

}  // namespace rerisk
