#include "mdl/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace mdl {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Config Config::parse(std::istream& in) {
    Config cfg;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw invalid_input("config: missing '=' on line " + std::to_string(line_no));
        std::string key = trim(t.substr(0, eq));
        if (key.empty())
            throw invalid_input("config: empty key on line " + std::to_string(line_no));
        cfg.values_[key] = trim(t.substr(eq + 1));
    }
    return cfg;
}

Config Config::parse_string(const std::string& text) {
    std::istringstream in(text);
    return parse(in);
}

Config Config::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw invalid_input("config: cannot open " + path);
    return parse(in);
}

std::string Config::get_string(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw invalid_input("config: missing key '" + key + "'");
    return it->second;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

std::int64_t Config::get_int(const std::string& key) const {
    try {
        return std::stoll(get_string(key));
    } catch (const std::logic_error&) {
        throw invalid_input("config: key '" + key + "' is not an integer");
    }
}

std::int64_t Config::get_int(const std::string& key, std::int64_t fallback) const {
    return has(key) ? get_int(key) : fallback;
}

std::uint64_t Config::get_uint(const std::string& key) const {
    try {
        return std::stoull(get_string(key));
    } catch (const std::logic_error&) {
        throw invalid_input("config: key '" + key + "' is not an unsigned integer");
    }
}

std::uint64_t Config::get_uint(const std::string& key, std::uint64_t fallback) const {
    return has(key) ? get_uint(key) : fallback;
}

double Config::get_double(const std::string& key) const {
    try {
        return std::stod(get_string(key));
    } catch (const std::logic_error&) {
        throw invalid_input("config: key '" + key + "' is not a number");
    }
}

double Config::get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    std::string v = get_string(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw invalid_input("config: key '" + key + "' is not a boolean");
}

std::vector<double> Config::get_doubles(const std::string& key) const {
    std::vector<double> out;
    std::istringstream in(get_string(key));
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::logic_error&) {
            throw invalid_input("config: key '" + key + "' has a non-numeric entry");
        }
    }
    return out;
}

std::vector<std::uint32_t> Config::get_uints(const std::string& key) const {
    std::vector<std::uint32_t> out;
    std::istringstream in(get_string(key));
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            out.push_back(static_cast<std::uint32_t>(std::stoul(item)));
        } catch (const std::logic_error&) {
            throw invalid_input("config: key '" + key + "' has a non-integer entry");
        }
    }
    return out;
}

void Config::set(const std::string& key, const std::string& value) { values_[key] = value; }

void Config::set(const std::string& key, std::int64_t value) {
    values_[key] = std::to_string(value);
}

void Config::set(const std::string& key, std::uint64_t value) {
    values_[key] = std::to_string(value);
}

void Config::set(const std::string& key, double value) { values_[key] = format_double(value); }

void Config::set(const std::string& key, const std::vector<double>& values) {
    std::string joined;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) joined += ',';
        joined += format_double(values[i]);
    }
    values_[key] = joined;
}

void Config::set(const std::string& key, const std::vector<std::uint32_t>& values) {
    std::string joined;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) joined += ',';
        joined += std::to_string(values[i]);
    }
    values_[key] = joined;
}

std::string Config::write() const {
    std::string out;
    for (const auto& [key, value] : values_) {
        out += key;
        out += " = ";
        out += value;
        out += '\n';
    }
    return out;
}

void Config::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw invalid_input("config: cannot write " + path);
    out << write();
}

std::string Config::fingerprint() const {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : write()) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace mdl
