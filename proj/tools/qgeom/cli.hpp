#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace qgeom::cli {

/// Everything needed to re-execute a run bit for bit.
struct RunManifest {
  std::string command;
  std::map<std::string, std::string> parameters;  // flag name (no dashes) -> value
  std::optional<std::uint64_t> seed;
  std::string tool_version;
  std::vector<std::string> output_paths;
};

std::string to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const std::string& text);
RunManifest load_manifest(const std::string& path);

/// Command-line entry point; args excludes the program name.
/// Returns 0 on success, 1 on domain errors, 2 on usage errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qgeom::cli
