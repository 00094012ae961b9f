#ifndef FJSP_MANIFEST_HPP
#define FJSP_MANIFEST_HPP

#include <map>
#include <string>
#include <vector>

namespace fjsp {

inline constexpr const char* kToolVersion = "fjsp 0.1.0";

// Reproducibility sidecar written next to every artifact: the command, its
// fully resolved configuration (seeds included) and digests of all inputs.
// Replaying a manifest re-runs the command and must reproduce every
// non-timing output bit for bit.
struct RunManifest {
    std::string tool_version = kToolVersion;
    std::string command;
    std::map<std::string, std::string> config;
    std::map<std::string, std::string> input_digests; // path -> fnv1a64 hex
    std::vector<std::string> outputs;
};

std::string fnv1a64_hex(const std::string& bytes);
std::string file_digest_hex(const std::string& path);

void write_manifest(const RunManifest& manifest, const std::string& path);
RunManifest read_manifest(const std::string& path);

} // namespace fjsp

#endif // FJSP_MANIFEST_HPP
