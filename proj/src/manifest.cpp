#include "fjsp/manifest.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace fjsp {

std::string fnv1a64_hex(const std::string& bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

std::string file_digest_hex(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file for digest: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return fnv1a64_hex(buf.str());
}

void write_manifest(const RunManifest& manifest, const std::string& path) {
    nlohmann::json j{{"tool_version", manifest.tool_version},
                     {"command", manifest.command},
                     {"config", manifest.config},
                     {"input_digests", manifest.input_digests},
                     {"outputs", manifest.outputs}};
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write manifest: " + path);
    out << j.dump(2) << '\n';
}

RunManifest read_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open manifest: " + path);
    nlohmann::json j;
    in >> j;
    RunManifest m;
    m.tool_version = j.at("tool_version").get<std::string>();
    m.command = j.at("command").get<std::string>();
    m.config = j.at("config").get<std::map<std::string, std::string>>();
    m.input_digests = j.at("input_digests").get<std::map<std::string, std::string>>();
    m.outputs = j.at("outputs").get<std::vector<std::string>>();
    return m;
}

} // namespace fjsp
