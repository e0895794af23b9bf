#pragma once

// JSONL artifact helpers. Every artifact starts with a header line carrying
// at least {"schema":1}; data lines follow, one JSON object per line.
// Serialization is canonical (nlohmann sorted keys, compact dump) so equal
// logs produce byte-equal files.

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace bitb::jsonl {

struct File {
    nlohmann::json header;
    std::vector<nlohmann::json> lines;
};

std::string dump(const File& file);
void write(const std::filesystem::path& path, const File& file);
File read(const std::filesystem::path& path);

}  // namespace bitb::jsonl
