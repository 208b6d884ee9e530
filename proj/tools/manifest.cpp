#include "manifest.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <iterator>

#include <openssl/evp.h>

#include "wcr/error.hpp"
#include "wcr/report.hpp"

namespace wcr::cli {

std::string sha256_hex(const std::string& bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw IoError("sha256 failed");
  }
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "' for hashing");
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return sha256_hex(bytes);
}

void Manifest::add_input(const std::string& path) {
  if (std::find(inputs_.begin(), inputs_.end(), path) == inputs_.end()) inputs_.push_back(path);
}

void Manifest::add_output(const std::string& relative_path) {
  if (std::find(outputs_.begin(), outputs_.end(), relative_path) == outputs_.end()) outputs_.push_back(relative_path);
}

std::string Manifest::write(const std::filesystem::path& out_dir) const {
  nlohmann::json inputs = nlohmann::json::array();
  for (const auto& p : inputs_) inputs.push_back({{"path", p}, {"sha256", sha256_file(p)}});

  std::vector<std::string> outs = outputs_;
  std::sort(outs.begin(), outs.end());
  nlohmann::json outputs = nlohmann::json::array();
  for (const auto& p : outs) outputs.push_back({{"path", p}, {"sha256", sha256_file(out_dir / p)}});

  const nlohmann::json j = {{"tool", "wcr"},
                            {"version", "0.1.0"},
                            {"command", command_},
                            {"config", config_},
                            {"seed", config_.value("seed", nlohmann::json())},
                            {"inputs", inputs},
                            {"outputs", outputs}};
  const std::string text = j.dump(2) + "\n";
  write_file(out_dir / "manifest.json", text);
  return sha256_hex(text);
}

}  // namespace wcr::cli
