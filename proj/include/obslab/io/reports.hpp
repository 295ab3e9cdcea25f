#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace obslab {

/// CSV with one header row; every data cell is a double printed with 12
/// significant digits.
void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);

void write_json(const std::string& path, const nlohmann::json& doc);

uint64_t fnv1a(const void* data, size_t n);
uint64_t checksum_file(const std::string& path);

struct StageTiming {
    std::string name;
    double seconds{0.0};
};

/// manifest.json: config hash, tool version, stage timings, and a checksummed
/// inventory of every emitted file.
void write_manifest(const std::string& path, const nlohmann::json& config,
                    const std::vector<std::string>& files,
                    const std::vector<StageTiming>& timings);

}  // namespace obslab
