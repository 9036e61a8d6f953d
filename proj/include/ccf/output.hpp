#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace ccf::cli {

std::uint64_t fnv1a64(std::string_view bytes);

/// 16 lowercase hex digits.
std::string hex64(std::uint64_t value);

/// Two-space indented dump with a trailing newline.
std::string dump_json(const nlohmann::json& doc);

/// Writes via a sibling temp file and rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

/// Output directory <root>/<command>-<hash>, hash = fnv1a64 of the command
/// name and the canonical config. Files are staged in memory and published
/// together by commit(); an existing directory is never touched.
class ArtifactDir {
 public:
  ArtifactDir(const std::filesystem::path& root, std::string command, const nlohmann::json& canonical);

  [[nodiscard]] const std::filesystem::path& path() const noexcept { return path_; }
  [[nodiscard]] const std::string& hash() const noexcept { return hash_; }
  [[nodiscard]] bool exists() const;

  void add(std::string name, std::string contents);

  /// Writes the staged files plus meta.json. Returns false if the directory
  /// already existed (nothing is written in that case).
  bool commit(const nlohmann::json& meta_extra);

 private:
  std::filesystem::path root_;
  std::string command_;
  nlohmann::json canonical_;
  std::string hash_;
  std::filesystem::path path_;
  std::vector<std::pair<std::string, std::string>> files_;
};

}  // namespace ccf::cli
