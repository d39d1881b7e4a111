#include "mpdo/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mpdo/errors.hpp"

namespace mpdo {
namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

// strips a # comment that is not inside a quoted string
std::string strip_comment(const std::string& line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') quoted = !quoted;
        if (line[i] == '#' && !quoted) return line.substr(0, i);
    }
    return line;
}

bool valid_key(const std::string& k) {
    if (k.empty()) return false;
    for (char c : k)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-' && c != '.')
            return false;
    return true;
}

double parse_number(const std::string& tok, const std::string& where) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size())
        throw ConfigError("config " + where + ": malformed number '" + tok + "'");
    return v;
}

bool looks_integral(const std::string& tok) {
    std::size_t i = (tok[0] == '+' || tok[0] == '-') ? 1 : 0;
    if (i == tok.size()) return false;
    for (; i < tok.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(tok[i]))) return false;
    return true;
}

Config::Value parse_value(const std::string& tok, const std::string& where) {
    if (tok.size() >= 2 && tok.front() == '"' && tok.back() == '"')
        return tok.substr(1, tok.size() - 2);
    if (tok == "true") return true;
    if (tok == "false") return false;
    if (tok.front() == '[') {
        if (tok.back() != ']') throw ConfigError("config " + where + ": unterminated array");
        std::vector<double> out;
        std::string inner = tok.substr(1, tok.size() - 2);
        std::stringstream ss(inner);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty()) throw ConfigError("config " + where + ": empty array element");
            out.push_back(parse_number(item, where));
        }
        return out;
    }
    if (looks_integral(tok)) return static_cast<long long>(std::stoll(tok));
    return parse_number(tok, where);
}

const char* kind_name(const Config::Value& v) {
    switch (v.index()) {
        case 0: return "integer";
        case 1: return "float";
        case 2: return "boolean";
        case 3: return "string";
        default: return "array";
    }
}

} // namespace

std::string fnv1a_hex(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Config Config::parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_string(ss.str(), path);
}

Config Config::parse_string(std::string text, const std::string& origin) {
    Config c;
    c.text_ = std::move(text);
    std::stringstream lines(c.text_);
    std::string raw, section;
    int lineno = 0;
    while (std::getline(lines, raw)) {
        ++lineno;
        const std::string where = origin + ":" + std::to_string(lineno);
        std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("config " + where + ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (!valid_key(section)) throw ConfigError("config " + where + ": bad section name");
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("config " + where + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (!valid_key(key)) throw ConfigError("config " + where + ": bad key '" + key + "'");
        if (val.empty()) throw ConfigError("config " + where + ": missing value for '" + key + "'");
        const std::string full = section.empty() ? key : section + "." + key;
        if (c.values_.count(full)) throw ConfigError("config " + where + ": duplicate key '" + full + "'");
        c.values_.emplace(full, parse_value(val, where));
    }
    return c;
}

const Config::Value& Config::at(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("config: missing key '" + key + "'");
    return it->second;
}

long long Config::get_int(const std::string& key) const {
    const Value& v = at(key);
    if (const auto* p = std::get_if<long long>(&v)) return *p;
    throw ConfigError("config: key '" + key + "' should be an integer, found " + kind_name(v));
}
long long Config::get_int(const std::string& key, long long fallback) const {
    return has(key) ? get_int(key) : fallback;
}

double Config::get_double(const std::string& key) const {
    const Value& v = at(key);
    if (const auto* p = std::get_if<double>(&v)) return *p;
    if (const auto* p = std::get_if<long long>(&v)) return static_cast<double>(*p);
    throw ConfigError("config: key '" + key + "' should be a number, found " + kind_name(v));
}
double Config::get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

bool Config::get_bool(const std::string& key) const {
    const Value& v = at(key);
    if (const auto* p = std::get_if<bool>(&v)) return *p;
    throw ConfigError("config: key '" + key + "' should be a boolean, found " + kind_name(v));
}
bool Config::get_bool(const std::string& key, bool fallback) const {
    return has(key) ? get_bool(key) : fallback;
}

std::string Config::get_string(const std::string& key) const {
    const Value& v = at(key);
    if (const auto* p = std::get_if<std::string>(&v)) return *p;
    throw ConfigError("config: key '" + key + "' should be a string, found " + kind_name(v));
}
std::string Config::get_string(const std::string& key, const std::string& fallback) const {
    return has(key) ? get_string(key) : fallback;
}

std::vector<double> Config::get_array(const std::string& key) const {
    const Value& v = at(key);
    if (const auto* p = std::get_if<std::vector<double>>(&v)) return *p;
    throw ConfigError("config: key '" + key + "' should be an array, found " + kind_name(v));
}
std::vector<double> Config::get_array(const std::string& key, std::vector<double> fallback) const {
    return has(key) ? get_array(key) : fallback;
}

std::map<std::string, double> Config::numeric_section(const std::string& section) const {
    std::map<std::string, double> out;
    const std::string prefix = section + ".";
    for (const auto& [k, v] : values_) {
        if (k.rfind(prefix, 0) != 0) continue;
        if (const auto* p = std::get_if<double>(&v))
            out.emplace(k.substr(prefix.size()), *p);
        else if (const auto* p2 = std::get_if<long long>(&v))
            out.emplace(k.substr(prefix.size()), static_cast<double>(*p2));
        else if (const auto* p3 = std::get_if<bool>(&v))
            out.emplace(k.substr(prefix.size()), *p3 ? 1.0 : 0.0);
    }
    return out;
}

std::string format_sig17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("csv: cannot open '" + path + "' for writing");
    for (std::size_t i = 0; i < header.size(); ++i)
        out << header[i] << (i + 1 < header.size() ? "," : "");
    out << "\n";
    for (const auto& row : rows) {
        if (row.size() != header.size()) throw ConfigError("csv: row width differs from header");
        for (std::size_t i = 0; i < row.size(); ++i)
            out << row[i] << (i + 1 < row.size() ? "," : "");
        out << "\n";
    }
    if (!out) throw ConfigError("csv: write failed for '" + path + "'");
}

} // namespace mpdo
