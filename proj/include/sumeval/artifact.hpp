#pragma once

// Output files and the reproducibility manifest attached to each of them.

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sumeval/config.hpp"

namespace sumeval {

using Json = nlohmann::ordered_json;

/// Writes to a sibling temporary file and renames it into place, so readers
/// never see a partial file.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// {tool, version, command, config_sha256, config, seed, inputs: [{role,
/// file, sha256}]}. Input entries record the file name only, so moving a
/// study directory keeps the manifest stable.
Json make_manifest(std::string_view command, const Config& cfg,
                   const std::vector<std::pair<std::string, std::filesystem::path>>& inputs);

/// Two-space indented JSON with a trailing newline.
std::string dump_json(const Json& value);

/// "<path>.manifest.json"
std::filesystem::path manifest_path(const std::filesystem::path& artifact);

}  // namespace sumeval
