#include "obslab/io/reports.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace obslab {

namespace {
constexpr const char* kToolVersion = "obslab 1.0";
}

void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open for writing: " + path);
    for (size_t i = 0; i < columns.size(); ++i)
        out << (i ? "," : "") << columns[i];
    out << "\n";
    out << std::setprecision(12);
    for (const auto& row : rows) {
        if (row.size() != columns.size())
            throw std::invalid_argument("csv row width disagrees with header");
        for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << "\n";
    }
    if (!out) throw std::runtime_error("short write: " + path);
}

void write_json(const std::string& path, const nlohmann::json& doc) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open for writing: " + path);
    out << doc.dump(2) << "\n";
    if (!out) throw std::runtime_error("short write: " + path);
}

uint64_t fnv1a(const void* data, size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    uint64_t h = 0xcbf29ce484222325ULL;
    for (size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

uint64_t checksum_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open for checksum: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string bytes = ss.str();
    return fnv1a(bytes.data(), bytes.size());
}

void write_manifest(const std::string& path, const nlohmann::json& config,
                    const std::vector<std::string>& files,
                    const std::vector<StageTiming>& timings) {
    nlohmann::json doc;
    const std::string cfg = config.dump();
    doc["tool"] = kToolVersion;
    doc["config_hash"] = fnv1a(cfg.data(), cfg.size());
    doc["timings"] = nlohmann::json::array();
    for (const StageTiming& t : timings)
        doc["timings"].push_back({{"stage", t.name}, {"seconds", t.seconds}});
    doc["files"] = nlohmann::json::array();
    for (const std::string& f : files)
        doc["files"].push_back({{"path", f}, {"fnv1a", checksum_file(f)}});
    write_json(path, doc);
}

}  // namespace obslab
