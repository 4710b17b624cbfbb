// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace vqelab {

/// 17 significant digits: enough to round-trip any double.
inline std::string csv_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string csv_number(long v) { return std::to_string(v); }
inline std::string csv_number(int v) { return std::to_string(v); }

/// Comma-separated writer with a single header row. Values are numeric or
/// plain identifiers, so no quoting is needed.
class CsvWriter {
  public:
    CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string> header)
        : out_(path), columns_(header.size()) {
        if (!out_) throw std::runtime_error("cannot write " + path.string());
        std::string line;
        for (const auto& h : header) {
            if (!line.empty()) line += ',';
            line += h;
        }
        out_ << line << '\n';
    }

    void row(const std::vector<std::string>& fields) {
        if (fields.size() != columns_) {
            throw std::invalid_argument("CsvWriter: expected " + std::to_string(columns_) +
                                        " fields, got " + std::to_string(fields.size()));
        }
        std::string line;
        for (const auto& f : fields) {
            if (!line.empty()) line += ',';
            line += f;
        }
        out_ << line << '\n';
        out_.flush(); // partial results survive an aborted run
    }

    bool good() const { return static_cast<bool>(out_); }

  private:
    std::ofstream out_;
    std::size_t columns_;
};

} // namespace vqelab
