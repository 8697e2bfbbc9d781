#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace vgrsi {

/// Flat view over a key/value config file. Keys inside a [section] are stored
/// as "section.key".
class KeyValueDocument {
public:
    KeyValueDocument() = default;

    static KeyValueDocument from_file(const std::filesystem::path& path);
    static KeyValueDocument from_string(std::string_view text);

    bool contains(std::string_view key) const;
    std::optional<std::string> get(std::string_view key) const;

    std::string get_string(std::string_view key, std::string fallback) const;
    double get_double(std::string_view key, double fallback) const;
    long long get_int(std::string_view key, long long fallback) const;
    bool get_bool(std::string_view key, bool fallback) const;

    /// Value of `key` inside `section`, falling back to the bare top-level key.
    std::optional<std::string> lookup(std::string_view section, std::string_view key) const;

    void set(std::string key, std::string value) { values_[std::move(key)] = std::move(value); }
    const std::map<std::string, std::string, std::less<>>& values() const { return values_; }

private:
    std::map<std::string, std::string, std::less<>> values_;
};

double parse_double(std::string_view text, std::string_view what);
long long parse_int(std::string_view text, std::string_view what);

}  // namespace vgrsi
