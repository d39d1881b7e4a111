#pragma once

#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <cstdint>

namespace mpdo {

// FNV-1a over bytes, as a fixed-width hex string.
std::string fnv1a_hex(std::string_view bytes);

// Key-value experiment description.  Parses the TOML subset the configs use:
// [section] headers, bare keys, strings, booleans, integers, floats, and flat
// numeric arrays, with # comments.  Keys are exposed as "section.key".
class Config {
  public:
    using Value = std::variant<long long, double, bool, std::string, std::vector<double>>;

    static Config parse_file(const std::string& path);
    static Config parse_string(std::string text, const std::string& origin = "<string>");

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    long long get_int(const std::string& key) const;
    long long get_int(const std::string& key, long long fallback) const;
    double get_double(const std::string& key) const; // integers promote
    double get_double(const std::string& key, double fallback) const;
    bool get_bool(const std::string& key) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    std::vector<double> get_array(const std::string& key) const;
    std::vector<double> get_array(const std::string& key, std::vector<double> fallback) const;

    // keys under "section." with the prefix stripped
    std::map<std::string, double> numeric_section(const std::string& section) const;

    const std::string& text() const { return text_; }
    std::string hash() const { return fnv1a_hex(text_); }

  private:
    const Value& at(const std::string& key) const;
    std::map<std::string, Value> values_;
    std::string text_;
};

// 17-significant-digit, round-trip-safe decimal rendering for CSV cells.
std::string format_sig17(double v);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

} // namespace mpdo
