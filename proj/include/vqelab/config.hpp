// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace vqelab {

/// Flat-section key/value document:
///
///   # comment
///   [section]
///   key = value
///   list = 0.1 0.05 0.01
///
/// Typed getters collect problems into `errors()` (tagged with
/// "section.key") instead of throwing, so a bad config reports every invalid
/// field at once.
class ConfigReader {
  public:
    static ConfigReader parse_file(const std::filesystem::path& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open config file " + path.string());
        std::stringstream buffer;
        buffer << in.rdbuf();
        return parse_string(buffer.str(), path.string());
    }

    static ConfigReader parse_string(const std::string& text, const std::string& origin = "<string>") {
        ConfigReader reader;
        reader.origin_ = origin;
        std::istringstream in(text);
        std::string line;
        std::string section;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            const auto comment = line.find('#');
            if (comment != std::string::npos) line.erase(comment);
            trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']' || line.size() < 3) {
                    throw std::runtime_error(origin + ":" + std::to_string(line_no) +
                                             ": malformed section header '" + line + "'");
                }
                section = line.substr(1, line.size() - 2);
                trim(section);
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                throw std::runtime_error(origin + ":" + std::to_string(line_no) +
                                         ": expected 'key = value', got '" + line + "'");
            }
            std::string key = line.substr(0, eq);
            std::string value = line.substr(eq + 1);
            trim(key);
            trim(value);
            if (key.empty()) {
                throw std::runtime_error(origin + ":" + std::to_string(line_no) + ": empty key");
            }
            reader.values_[section.empty() ? key : section + "." + key] = value;
        }
        return reader;
    }

    bool has(const std::string& section, const std::string& key) const {
        return values_.count(qualify(section, key)) > 0;
    }

    std::optional<std::string> raw(const std::string& section, const std::string& key) const {
        const auto it = values_.find(qualify(section, key));
        if (it == values_.end()) return std::nullopt;
        return it->second;
    }

    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const {
        return raw(section, key).value_or(fallback);
    }

    std::string require_string(const std::string& section, const std::string& key) {
        const auto v = raw(section, key);
        if (!v) {
            record_error(section, key, "missing required value");
            return {};
        }
        return *v;
    }

    double get_double(const std::string& section, const std::string& key, double fallback) {
        const auto v = raw(section, key);
        if (!v) return fallback;
        return parse_double(section, key, *v).value_or(fallback);
    }

    double require_double(const std::string& section, const std::string& key) {
        const auto v = raw(section, key);
        if (!v) {
            record_error(section, key, "missing required value");
            return 0.0;
        }
        return parse_double(section, key, *v).value_or(0.0);
    }

    long get_long(const std::string& section, const std::string& key, long fallback) {
        const auto v = raw(section, key);
        if (!v) return fallback;
        return parse_long(section, key, *v).value_or(fallback);
    }

    std::uint64_t get_u64(const std::string& section, const std::string& key,
                          std::uint64_t fallback) {
        const auto v = raw(section, key);
        if (!v) return fallback;
        try {
            return std::stoull(*v);
        } catch (const std::exception&) {
            record_error(section, key, "not an unsigned integer: '" + *v + "'");
            return fallback;
        }
    }

    bool get_bool(const std::string& section, const std::string& key, bool fallback) {
        const auto v = raw(section, key);
        if (!v) return fallback;
        std::string s = *v;
        std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
        if (s == "true" || s == "yes" || s == "on" || s == "1") return true;
        if (s == "false" || s == "no" || s == "off" || s == "0") return false;
        record_error(section, key, "not a boolean: '" + *v + "'");
        return fallback;
    }

    std::vector<double> get_double_list(const std::string& section, const std::string& key,
                                        std::vector<double> fallback = {}) {
        const auto v = raw(section, key);
        if (!v) return fallback;
        std::vector<double> out;
        std::istringstream ss(*v);
        std::string token;
        while (ss >> token) {
            try {
                std::size_t used = 0;
                out.push_back(std::stod(token, &used));
                if (used != token.size()) throw std::invalid_argument("trailing characters");
            } catch (const std::exception&) {
                record_error(section, key, "not a number: '" + token + "'");
                return fallback;
            }
        }
        return out;
    }

    std::vector<std::string> get_string_list(const std::string& section, const std::string& key,
                                             std::vector<std::string> fallback = {}) const {
        const auto v = raw(section, key);
        if (!v) return fallback;
        std::vector<std::string> out;
        std::istringstream ss(*v);
        std::string token;
        while (ss >> token) out.push_back(token);
        return out;
    }

    void record_error(const std::string& section, const std::string& key,
                      const std::string& message) {
        errors_.push_back(origin_ + ": [" + (section.empty() ? "<top>" : section) + "] " + key +
                          ": " + message);
    }

    const std::vector<std::string>& errors() const { return errors_; }

    /// Throws with every collected problem listed, one per line.
    void throw_if_errors() const {
        if (errors_.empty()) return;
        std::string message = "invalid configuration:";
        for (const auto& e : errors_) message += "\n  " + e;
        throw std::runtime_error(message);
    }

  private:
    static void trim(std::string& s) {
        const auto not_space = [](unsigned char c) { return !std::isspace(c); };
        s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
        s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    }

    static std::string qualify(const std::string& section, const std::string& key) {
        return section.empty() ? key : section + "." + key;
    }

    std::optional<double> parse_double(const std::string& section, const std::string& key,
                                       const std::string& value) {
        try {
            std::size_t used = 0;
            const double parsed = std::stod(value, &used);
            if (used != value.size()) throw std::invalid_argument("trailing characters");
            return parsed;
        } catch (const std::exception&) {
            record_error(section, key, "not a number: '" + value + "'");
            return std::nullopt;
        }
    }

    std::optional<long> parse_long(const std::string& section, const std::string& key,
                                   const std::string& value) {
        try {
            std::size_t used = 0;
            const long parsed = std::stol(value, &used);
            if (used != value.size()) throw std::invalid_argument("trailing characters");
            return parsed;
        } catch (const std::exception&) {
            record_error(section, key, "not an integer: '" + value + "'");
            return std::nullopt;
        }
    }

    std::string origin_;
    std::map<std::string, std::string> values_;
    std::vector<std::string> errors_;
};

} // namespace vqelab
