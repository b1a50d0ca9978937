#include "gridpanel/manifest.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gridpanel/errors.hpp"

namespace gridpanel {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 14695981039346656037ULL;
  for (unsigned char b : bytes) {
    hash ^= b;
    hash *= 1099511628211ULL;
  }
  return hash;
}

std::string fnv1a64_hex(std::string_view bytes) {
  static const char* digits = "0123456789abcdef";
  std::uint64_t h = fnv1a64(bytes);
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[h & 0xF];
    h >>= 4;
  }
  return out;
}

std::string digest_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string() + " for digesting");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("failed reading " + path.string());
  return fnv1a64_hex(buf.str());
}

const std::map<std::string, std::string>& module_versions() {
  static const std::map<std::string, std::string> versions = {
      {"ingest", "0.1.0"},      {"align", "0.1.0"},  {"metrics", "0.1.0"},
      {"scenarios", "0.1.0"},   {"panel", "0.1.0"},  {"fit", "0.1.0"},
      {"displacement", "0.1.0"}, {"synth", "0.1.0"},
  };
  return versions;
}

void RunManifest::add_input(const std::filesystem::path& path) {
  input_digests[path.string()] = digest_file(path);
}

void RunManifest::add_output(const std::filesystem::path& path) {
  output_digests[path.string()] = digest_file(path);
}

void write_manifest(const RunManifest& m, const std::filesystem::path& path) {
  nlohmann::ordered_json j;
  j["command"] = m.command;
  j["config_digest"] = m.config_digest;
  j["input_digests"] = m.input_digests;
  j["output_digests"] = m.output_digests;
  j["module_versions"] = module_versions();
  j["counters"] = m.counters;
  j["stage_seconds"] = m.stage_seconds;

  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
  if (!out.good()) throw IoError("failed writing " + path.string());
}

}  // namespace gridpanel
