#include "ccf/output.hpp"

#include <cstdio>
#include <fstream>
#include <system_error>

#include <unistd.h>

#include "ccf/error.hpp"

namespace ccf::cli {

namespace fs = std::filesystem;

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::string dump_json(const nlohmann::json& doc) { return doc.dump(2) + "\n"; }

namespace {

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ResourceError("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.close();
  if (!out) throw ResourceError("write failed for " + path.string());
}

std::string temp_suffix() { return ".tmp-" + std::to_string(::getpid()); }

}  // namespace

void write_file_atomic(const fs::path& path, const std::string& contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + temp_suffix();
  write_file(tmp, contents);
  fs::rename(tmp, path);
}

ArtifactDir::ArtifactDir(const fs::path& root, std::string command, const nlohmann::json& canonical)
    : root_(root), command_(std::move(command)), canonical_(canonical) {
  hash_ = hex64(fnv1a64(command_ + "\n" + canonical_.dump()));
  path_ = root_ / (command_ + "-" + hash_);
}

bool ArtifactDir::exists() const { return fs::exists(path_); }

void ArtifactDir::add(std::string name, std::string contents) {
  files_.emplace_back(std::move(name), std::move(contents));
}

bool ArtifactDir::commit(const nlohmann::json& meta_extra) {
  if (exists()) return false;
  fs::create_directories(root_);
  const fs::path staging = root_ / ("." + command_ + "-" + hash_ + temp_suffix());
  fs::remove_all(staging);
  fs::create_directory(staging);

  nlohmann::json names = nlohmann::json::array();
  for (const auto& [name, contents] : files_) {
    write_file(staging / name, contents);
    names.push_back(name);
  }
  nlohmann::json meta = meta_extra;
  meta["command"] = command_;
  meta["config_hash"] = hash_;
  meta["config"] = canonical_;
  meta["files"] = names;
  write_file(staging / "meta.json", dump_json(meta));

  std::error_code ec;
  fs::rename(staging, path_, ec);
  if (ec) {
    fs::remove_all(staging);
    if (exists()) return false;  // lost a race to an identical run
    throw ResourceError("cannot publish " + path_.string() + ": " + ec.message());
  }
  return true;
}

}  // namespace ccf::cli
