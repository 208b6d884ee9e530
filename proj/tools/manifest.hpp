#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace wcr::cli {

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

// Run record written as manifest.json next to a command's outputs.
// Contains no timestamps or absolute output paths, so identical runs produce
// identical manifests.
class Manifest {
 public:
  explicit Manifest(std::string command) : command_(std::move(command)) {}

  void set_config(nlohmann::json config) { config_ = std::move(config); }
  void add_input(const std::string& path);
  void add_output(const std::string& relative_path);

  // Hashes the outputs, writes out_dir/manifest.json and returns the
  // manifest's own digest.
  std::string write(const std::filesystem::path& out_dir) const;

 private:
  std::string command_;
  nlohmann::json config_ = nlohmann::json::object();
  std::vector<std::string> inputs_;
  std::vector<std::string> outputs_;
};

}  // namespace wcr::cli
