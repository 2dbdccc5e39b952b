#pragma once

#include "mfx/error.hpp"

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace mfx::io {

inline constexpr const char* kToolVersion = "mfx 1.0.0";

/// 17 significant digits: round-trips every double.
[[nodiscard]] inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// FNV-1a 64-bit digest as 16 hex digits.
[[nodiscard]] inline std::string fnv1a64_hex(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

/// Minimal CSV builder; fields never contain separators here.
class CsvWriter {
public:
    explicit CsvWriter(const std::string& config_hash) { out_ += "# config_hash=" + config_hash + "\n"; }

    void header(const std::vector<std::string>& columns) { row(columns); }

    void row(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i > 0) {
                out_ += ',';
            }
            out_ += fields[i];
        }
        out_ += '\n';
    }

    void comment(const std::string& text) { out_ += "# " + text + "\n"; }

    [[nodiscard]] const std::string& str() const noexcept { return out_; }

private:
    std::string out_;
};

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw Error("cannot open " + path.string() + " for writing");
    }
    f << content;
    if (!f) {
        throw Error("failed writing " + path.string());
    }
}

} // namespace mfx::io
