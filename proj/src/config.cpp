#include "rerisk/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "rerisk/error.hpp"

namespace rerisk {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::optional<double> parse_double(std::string_view s) {
    s = trim(s);
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::optional<long long> parse_int(std::string_view s) {
    s = trim(s);
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

bool Config::Section::has(std::string_view key) const { return find(key) != nullptr; }

const Config::Entry* Config::Section::find(std::string_view key) const {
    for (const auto& e : entries) {
        if (e.key == key) return &e;
    }
    return nullptr;
}

std::string Config::Section::describe() const {
    return "[" + name + (tag.empty() ? "" : " " + tag) + "]";
}

const std::string& Config::Section::get(std::string_view key) const {
    if (const auto* e = find(key)) return e->value;
    throw ValidationError(describe() + " is missing required key '" + std::string(key) + "'");
}

std::string Config::Section::get_or(std::string_view key, std::string fallback) const {
    const auto* e = find(key);
    return e ? e->value : std::move(fallback);
}

double Config::Section::get_double(std::string_view key) const {
    const auto* e = find(key);
    if (!e) (void)get(key);
    const auto v = parse_double(e->value);
    if (!v) {
        throw ValidationError(describe() + " line " + std::to_string(e->line) + ": '" + std::string(key) +
                              "' is not a number");
    }
    return *v;
}

double Config::Section::get_double_or(std::string_view key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

long long Config::Section::get_int(std::string_view key) const {
    const auto* e = find(key);
    if (!e) (void)get(key);
    const auto v = parse_int(e->value);
    if (!v) {
        throw ValidationError(describe() + " line " + std::to_string(e->line) + ": '" + std::string(key) +
                              "' is not an integer");
    }
    return *v;
}

long long Config::Section::get_int_or(std::string_view key, long long fallback) const {
    return has(key) ? get_int(key) : fallback;
}

std::uint64_t Config::Section::get_u64_or(std::string_view key, std::uint64_t fallback) const {
    const auto* e = find(key);
    if (!e) return fallback;
    const std::string_view s = trim(e->value);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ValidationError(describe() + " line " + std::to_string(e->line) + ": '" + std::string(key) +
                              "' is not an unsigned integer");
    }
    return v;
}

bool Config::Section::get_bool_or(std::string_view key, bool fallback) const {
    const auto* e = find(key);
    if (!e) return fallback;
    if (e->value == "true" || e->value == "yes" || e->value == "1" || e->value == "on") return true;
    if (e->value == "false" || e->value == "no" || e->value == "0" || e->value == "off") return false;
    throw ValidationError(describe() + " line " + std::to_string(e->line) + ": '" + std::string(key) +
                          "' is not a boolean");
}

std::vector<double> Config::Section::get_doubles(std::string_view key) const {
    const auto* e = find(key);
    if (!e) (void)get(key);
    std::vector<double> out;
    for (const auto field : split(e->value, ',')) {
        const auto v = parse_double(field);
        if (!v) {
            throw ValidationError(describe() + " line " + std::to_string(e->line) + ": '" + std::string(key) +
                                  "' has a non-numeric entry '" + std::string(trim(field)) + "'");
        }
        out.push_back(*v);
    }
    return out;
}

std::vector<double> Config::Section::get_doubles_or(std::string_view key, std::vector<double> fallback) const {
    return has(key) ? get_doubles(key) : std::move(fallback);
}

std::vector<std::string> Config::Section::get_list(std::string_view key) const {
    std::vector<std::string> out;
    for (const auto field : split(get(key), ',')) {
        const auto t = trim(field);
        if (!t.empty()) out.emplace_back(t);
    }
    return out;
}

Config Config::parse(std::string_view text, const std::string& source) {
    Config cfg;
    cfg.source_ = source;
    cfg.sections_.push_back({"", "", 0, {}});
    int line_no = 0;
    for (const auto raw : split(text, '\n')) {
        ++line_no;
        const auto line = trim(raw);
        if (line.empty() || line.front() == '#' || line.front() == ';') continue;
        const auto where = source + ":" + std::to_string(line_no);
        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError(where + ": unterminated section header");
            const auto inner = trim(line.substr(1, line.size() - 2));
            if (inner.empty()) throw ParseError(where + ": empty section name");
            const auto space = inner.find_first_of(" \t");
            Section s;
            s.name = std::string(inner.substr(0, space));
            s.tag = space == std::string_view::npos ? "" : std::string(trim(inner.substr(space)));
            s.line = line_no;
            for (const auto& existing : cfg.sections_) {
                if (existing.name == s.name && existing.tag == s.tag) {
                    throw ParseError(where + ": duplicate section " + s.describe());
                }
            }
            cfg.sections_.push_back(std::move(s));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(where + ": expected 'key = value'");
        const auto key = trim(line.substr(0, eq));
        if (key.empty()) throw ParseError(where + ": empty key");
        auto& section = cfg.sections_.back();
        if (section.has(key)) {
            throw ParseError(where + ": duplicate key '" + std::string(key) + "' in " + section.describe());
        }
        section.entries.push_back({std::string(key), std::string(trim(line.substr(eq + 1))), line_no});
    }
    return cfg;
}

Config Config::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open config file " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str(), path);
}

const Config::Section* Config::find(std::string_view name, std::string_view tag) const {
    for (const auto& s : sections_) {
        if (s.name == name && s.tag == tag) return &s;
    }
    return nullptr;
}

std::vector<const Config::Section*> Config::all(std::string_view name) const {
    std::vector<const Section*> out;
    for (const auto& s : sections_) {
        if (s.name == name) out.push_back(&s);
    }
    return out;
}

}  // namespace rerisk
