#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace mmcache::experiments {

// CSV builder enforcing the output contract: declared header, finite values,
// probability-like columns inside [0, 1]. Comma separated, '.' decimal, LF.
class Csv {
public:
    explicit Csv(std::vector<std::string> columns) : columns_(std::move(columns)) {
        for (const auto& c : columns_) prob_like_.push_back(is_probability_name(c));
    }

    void add_row(const std::vector<double>& row) {
        if (row.size() != columns_.size())
            throw std::logic_error("csv: row width differs from header");
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (!std::isfinite(row[i]))
                throw std::logic_error("csv: non-finite value in column " + columns_[i]);
            if (prob_like_[i] && (row[i] < -1e-12 || row[i] > 1.0 + 1e-12))
                throw std::logic_error("csv: probability out of range in " + columns_[i]);
        }
        rows_.push_back(row);
    }

    std::string str() const {
        std::string out;
        for (std::size_t i = 0; i < columns_.size(); ++i) {
            if (i) out += ',';
            out += columns_[i];
        }
        out += '\n';
        char buf[48];
        for (const auto& row : rows_) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) out += ',';
                std::snprintf(buf, sizeof buf, "%.12g", row[i]);
                out += buf;
            }
            out += '\n';
        }
        return out;
    }

    std::size_t row_count() const { return rows_.size(); }

    static bool is_probability_name(const std::string& name) {
        for (const char* tag : {"ccdf", "cdf", "pmf", "prob", "fraction", "ci"})
            if (name.find(tag) != std::string::npos) return true;
        return false;
    }

private:
    std::vector<std::string> columns_;
    std::vector<bool> prob_like_;
    std::vector<std::vector<double>> rows_;
};

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

// FNV-1a 64-bit content fingerprint, used to stamp manifests.
inline std::uint64_t content_hash(const std::string& text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace mmcache::experiments
