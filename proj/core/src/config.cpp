#include "lidarwx/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lidarwx {

namespace {
std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}
}  // namespace

Config Config::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_string(buffer.str());
}

Config Config::parse_string(const std::string& text) {
    Config config;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            std::ostringstream msg;
            msg << "config line " << lineno << ": expected key=value, got '" << line << "'";
            throw InvalidArgument(msg.str());
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            std::ostringstream msg;
            msg << "config line " << lineno << ": empty key";
            throw InvalidArgument(msg.str());
        }
        config.values_[key] = value;
    }
    return config;
}

std::optional<std::string> Config::get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

std::string Config::get_or(const std::string& key, const std::string& fallback) const {
    return get(key).value_or(fallback);
}

std::optional<double> Config::get_double(const std::string& key) const {
    const auto raw = get(key);
    if (!raw) return std::nullopt;
    try {
        std::size_t used = 0;
        const double value = std::stod(*raw, &used);
        if (used != raw->size()) throw std::invalid_argument("trailing characters");
        return value;
    } catch (const std::logic_error&) {
        throw InvalidArgument("config key " + key + ": not a number");
    }
}

std::optional<long long> Config::get_int(const std::string& key) const {
    const auto raw = get(key);
    if (!raw) return std::nullopt;
    try {
        std::size_t used = 0;
        const long long value = std::stoll(*raw, &used);
        if (used != raw->size()) throw std::invalid_argument("trailing characters");
        return value;
    } catch (const std::logic_error&) {
        throw InvalidArgument("config key " + key + ": not an integer");
    }
}

std::optional<std::vector<double>> Config::get_doubles(const std::string& key) const {
    auto raw = get(key);
    if (!raw) return std::nullopt;
    std::string body = trim(*raw);
    if (!body.empty() && body.front() == '[' && body.back() == ']') {
        body = body.substr(1, body.size() - 2);
    }
    std::vector<double> values;
    std::istringstream in(body);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        try {
            std::size_t used = 0;
            values.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument("trailing characters");
        } catch (const std::logic_error&) {
            throw InvalidArgument("config key " + key + ": bad list element '" + item + "'");
        }
    }
    return values;
}

void Config::validate_keys(const std::set<std::string>& allowed) const {
    std::vector<std::string> unknown;
    for (const auto& [key, value] : values_) {
        if (!allowed.count(key)) unknown.push_back(key);
    }
    if (!unknown.empty()) {
        std::ostringstream msg;
        msg << "unknown config key(s):";
        for (const auto& key : unknown) msg << ' ' << key;
        throw InvalidArgument(msg.str());
    }
}

std::string Config::canonical_string() const {
    std::ostringstream out;
    for (const auto& [key, value] : values_) out << key << '=' << value << '\n';
    return out.str();
}

}  // namespace lidarwx
