#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lidarwx/types.hpp"

namespace lidarwx {

/// Plain-text key=value configuration with dotted section prefixes
/// (weather.*, filter.*, wavelet.*, projection.*, sensor.*). '#' starts a
/// comment. Unknown keys are rejected against the caller's allowed set.
class Config {
  public:
    Config() = default;

    static Config parse_file(const std::string& path);
    static Config parse_string(const std::string& text);

    bool has(const std::string& key) const { return values_.count(key) > 0; }
    std::optional<std::string> get(const std::string& key) const;
    std::string get_or(const std::string& key, const std::string& fallback) const;
    std::optional<double> get_double(const std::string& key) const;
    std::optional<long long> get_int(const std::string& key) const;
    /// "[a,b,c]" or "a,b,c" -> vector of doubles.
    std::optional<std::vector<double>> get_doubles(const std::string& key) const;

    void set(const std::string& key, const std::string& value) { values_[key] = value; }

    /// Throws listing every key not in `allowed`.
    void validate_keys(const std::set<std::string>& allowed) const;

    /// Sorted key=value lines; parse(canonical_string()) == *this.
    std::string canonical_string() const;

    bool operator==(const Config&) const = default;

  private:
    std::map<std::string, std::string> values_;
};

}  // namespace lidarwx
