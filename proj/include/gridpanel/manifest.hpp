#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace gridpanel {

std::uint64_t fnv1a64(std::string_view bytes);
std::string fnv1a64_hex(std::string_view bytes);  // 16 lowercase hex digits
std::string digest_file(const std::filesystem::path& path);

const std::map<std::string, std::string>& module_versions();

// One manifest per command run: digests of what went in and what came out,
// plus counters and stage timings. Timings vary run to run; every digest is
// a pure function of the bytes involved.
struct RunManifest {
  std::string command;
  std::string config_digest;
  std::map<std::string, std::string> input_digests;   // path -> digest
  std::map<std::string, std::string> output_digests;  // path -> digest
  std::map<std::string, std::int64_t> counters;
  std::map<std::string, double> stage_seconds;

  void add_input(const std::filesystem::path& path);
  void add_output(const std::filesystem::path& path);
};

void write_manifest(const RunManifest& manifest, const std::filesystem::path& path);

}  // namespace gridpanel
