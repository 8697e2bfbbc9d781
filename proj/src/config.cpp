#include "vgrsi/config.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

#include "vgrsi/error.hpp"

namespace vgrsi {
namespace {

KeyValueDocument from_items(const std::vector<CLI::ConfigItem>& items) {
    KeyValueDocument doc;
    for (const auto& item : items) {
        // CLI11 emits "++"/"--" markers when entering and leaving sections.
        if (item.name == "++" || item.name == "--") continue;
        std::string value;
        for (std::size_t i = 0; i < item.inputs.size(); ++i) {
            if (i) value += ',';
            value += item.inputs[i];
        }
        doc.set(item.fullname(), value);
    }
    return doc;
}

// CLI11 does not accept a comment after a section header.
std::string strip_header_comments(std::istream& in) {
    std::string out, line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t");
        if (first != std::string::npos && line[first] == '[') {
            const auto close = line.find(']', first);
            const auto hash = line.find('#');
            if (close != std::string::npos && hash != std::string::npos && hash > close) line.erase(close + 1);
        }
        out += line;
        out += '\n';
    }
    return out;
}

KeyValueDocument parse(std::istream& in) {
    std::istringstream cleaned(strip_header_comments(in));
    return from_items(CLI::ConfigTOML{}.from_config(cleaned));
}

}  // namespace

KeyValueDocument KeyValueDocument::from_file(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw Error("config file not found: " + path.string());
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file " + path.string());
    try {
        return parse(in);
    } catch (const CLI::Error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

KeyValueDocument KeyValueDocument::from_string(std::string_view text) {
    std::istringstream in{std::string(text)};
    try {
        return parse(in);
    } catch (const CLI::Error& e) {
        throw ParseError(e.what());
    }
}

bool KeyValueDocument::contains(std::string_view key) const { return values_.find(key) != values_.end(); }

std::optional<std::string> KeyValueDocument::get(std::string_view key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::string> KeyValueDocument::lookup(std::string_view section, std::string_view key) const {
    std::string full{section};
    full += '.';
    full += key;
    if (auto v = get(full)) return v;
    return get(key);
}

std::string KeyValueDocument::get_string(std::string_view key, std::string fallback) const {
    auto v = get(key);
    return v ? *v : std::move(fallback);
}

double KeyValueDocument::get_double(std::string_view key, double fallback) const {
    auto v = get(key);
    return v ? parse_double(*v, key) : fallback;
}

long long KeyValueDocument::get_int(std::string_view key, long long fallback) const {
    auto v = get(key);
    return v ? parse_int(*v, key) : fallback;
}

bool KeyValueDocument::get_bool(std::string_view key, bool fallback) const {
    auto v = get(key);
    if (!v) return fallback;
    if (*v == "true" || *v == "1" || *v == "yes" || *v == "on") return true;
    if (*v == "false" || *v == "0" || *v == "no" || *v == "off") return false;
    throw ParseError("not a boolean for '" + std::string(key) + "': " + *v);
}

double parse_double(std::string_view text, std::string_view what) {
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\r')) text.remove_suffix(1);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
        throw ParseError("invalid number for " + std::string(what) + ": '" + std::string(text) + "'");
    return value;
}

long long parse_int(std::string_view text, std::string_view what) {
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\r')) text.remove_suffix(1);
    long long value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
        throw ParseError("invalid integer for " + std::string(what) + ": '" + std::string(text) + "'");
    return value;
}

}  // namespace vgrsi
