#include "sumeval/artifact.hpp"

#include <algorithm>
#include <fstream>

#include "sumeval/error.hpp"
#include "sumeval/hash.hpp"

namespace sumeval {

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out.flush()) {
      std::filesystem::remove(tmp);
      throw DataError("write failed for " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

namespace {

// Digest over the sorted relative paths and content hashes of every regular
// file below `root`.
std::string tree_hash(const std::filesystem::path& root) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(root)) {
    if (entry.is_regular_file()) files.push_back(entry.path().lexically_relative(root));
  }
  std::sort(files.begin(), files.end());
  std::string listing;
  for (const auto& f : files) listing += f.generic_string() + '\0' + sha256_file(root / f) + '\n';
  return sha256_hex(listing);
}

}  // namespace

Json make_manifest(std::string_view command, const Config& cfg,
                   const std::vector<std::pair<std::string, std::filesystem::path>>& inputs) {
  Json m;
  m["tool"] = "sumeval";
  m["version"] = std::string(kToolVersion);
  m["command"] = std::string(command);
  m["config_sha256"] = config_hash(cfg);
  m["config"] = canonical_config(cfg);
  m["seed"] = cfg.seed;
  Json list = Json::array();
  for (const auto& [role, path] : inputs) {
    const std::string digest = std::filesystem::is_directory(path) ? tree_hash(path) : sha256_file(path);
    const auto name = path.has_filename() ? path.filename() : path.parent_path().filename();
    list.push_back({{"role", role}, {"file", name.string()}, {"sha256", digest}});
  }
  m["inputs"] = list;
  return m;
}

std::string dump_json(const Json& value) { return value.dump(2) + "\n"; }

std::filesystem::path manifest_path(const std::filesystem::path& artifact) {
  std::filesystem::path p = artifact;
  p += ".manifest.json";
  return p;
}

}  // namespace sumeval
