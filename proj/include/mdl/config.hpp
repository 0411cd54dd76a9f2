#pragma once

#include "mdl/error.hpp"

#include <cstdint>
#include <istream>
#include <map>
#include <string>
#include <vector>

namespace mdl {

/// Flat key-value text config: one `key = value` per line, '#' comments.
/// Doubles are written with 17 significant digits so serialization is
/// lossless; write() emits keys sorted, which makes the text canonical and
/// fingerprintable.
class Config {
public:
    Config() = default;

    static Config parse(std::istream& in);
    static Config parse_string(const std::string& text);
    static Config load(const std::string& path);

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    std::int64_t get_int(const std::string& key) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    std::uint64_t get_uint(const std::string& key) const;
    std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_doubles(const std::string& key) const; // comma-separated
    std::vector<std::uint32_t> get_uints(const std::string& key) const;

    void set(const std::string& key, const std::string& value);
    void set(const std::string& key, const char* value) { set(key, std::string(value)); }
    void set(const std::string& key, std::int64_t value);
    void set(const std::string& key, std::uint64_t value);
    void set(const std::string& key, std::uint32_t value) { set(key, std::uint64_t(value)); }
    void set(const std::string& key, double value);
    void set(const std::string& key, const std::vector<double>& values);
    void set(const std::string& key, const std::vector<std::uint32_t>& values);

    /// Canonical text (sorted keys).
    std::string write() const;
    void save(const std::string& path) const;

    /// FNV-1a over the canonical text, as 16 hex digits.
    std::string fingerprint() const;

    const std::map<std::string, std::string>& entries() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

/// Shortest round-tripping decimal form of a double.
std::string format_double(double v);

} // namespace mdl
