#pragma once

// Atomic output writing and the run manifest: every produced file is
// listed with a checksum so a run can be audited after the fact.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "orwalk/errors.hpp"
#include "orwalk/version.hpp"

namespace orwalk {

inline std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

inline std::string checksum_hex(const std::string& bytes) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError("cannot read: " + p.string());
    std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return s;
}

// Write-then-rename so partially written outputs are never observable.
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write: " + tmp.string());
        out << content;
        if (!out) throw IoError("write failed: " + tmp.string());
    }
    fs::rename(tmp, path, ec);
    if (ec) throw IoError("rename failed for " + path.string() + ": " + ec.message());
}

struct RunManifest {
    nlohmann::json config_echo;
    std::string version = kVersion;
    double wall_seconds = 0.0;
    std::vector<std::pair<std::string, std::string>> outputs;  // (file, checksum)

    void record(const std::filesystem::path& file, const std::string& content) {
        outputs.emplace_back(file.filename().string(), checksum_hex(content));
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["tool"] = "orwalk";
        j["version"] = version;
        j["wall_seconds"] = wall_seconds;
        j["config"] = config_echo;
        nlohmann::json files = nlohmann::json::object();
        for (const auto& [f, c] : outputs) files[f] = c;
        j["outputs"] = files;
        return j;
    }
};

}  // namespace orwalk
