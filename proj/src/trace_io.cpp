#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "wcr/cachesim.hpp"
#include "wcr/error.hpp"

namespace wcr {

namespace {

constexpr std::size_t kRecordBytes = 9;

AccessKind kind_from_code(std::uint8_t code, std::size_t record) {
  if (code > 2) throw ValidationError("trace record " + std::to_string(record) + ": bad kind code " + std::to_string(code));
  return static_cast<AccessKind>(code);
}

AccessKind kind_from_token(const std::string& tok, std::size_t line_no) {
  std::string k;
  for (char c : tok) k.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (k == "i" || k == "ifetch" || k == "f") return AccessKind::IFetch;
  if (k == "l" || k == "load" || k == "r") return AccessKind::Load;
  if (k == "s" || k == "store" || k == "w") return AccessKind::Store;
  throw ValidationError("trace line " + std::to_string(line_no) + ": bad access kind '" + tok + "'");
}

char kind_char(AccessKind k) {
  switch (k) {
    case AccessKind::IFetch: return 'I';
    case AccessKind::Load: return 'L';
    case AccessKind::Store: return 'S';
  }
  return 'L';
}

AccessTrace apply_sidecar(std::vector<Access> all, const std::string& sidecar_path) {
  AccessTrace t;
  if (sidecar_path.empty()) {
    if (all.empty()) throw ValidationError("trace is empty");
    t.segments.push_back({1.0, std::move(all)});
    return t;
  }
  std::ifstream in(sidecar_path);
  if (!in) throw IoError("cannot open trace sidecar '" + sidecar_path + "'");
  nlohmann::json j;
  try {
    in >> j;
    for (const auto& s : j.at("segments")) {
      const auto offset = s.at("offset").get<std::uint64_t>();
      const auto count = s.at("count").get<std::uint64_t>();
      if (count == 0 || offset > all.size() || count > all.size() - offset) {
        throw ValidationError("trace sidecar '" + sidecar_path + "': segment out of range");
      }
      TraceSegment seg;
      seg.weight = s.at("weight").get<double>();
      seg.accesses.assign(all.begin() + static_cast<std::ptrdiff_t>(offset),
                          all.begin() + static_cast<std::ptrdiff_t>(offset + count));
      t.segments.push_back(std::move(seg));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("trace sidecar '" + sidecar_path + "': " + e.what());
  }
  check_trace(t);
  return t;
}

void write_sidecar(const std::string& path, const AccessTrace& trace) {
  nlohmann::json segs = nlohmann::json::array();
  std::uint64_t offset = 0;
  for (const auto& s : trace.segments) {
    segs.push_back({{"offset", offset}, {"count", s.accesses.size()}, {"weight", s.weight}});
    offset += s.accesses.size();
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write trace sidecar '" + path + "'");
  out << nlohmann::json{{"segments", segs}}.dump(2) << '\n';
}

}  // namespace

AccessTrace read_binary_trace(const std::string& path, const std::string& sidecar_path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open trace '" + path + "'");
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() % kRecordBytes != 0) {
    throw ValidationError("trace '" + path + "': size is not a multiple of " + std::to_string(kRecordBytes) + " bytes");
  }
  std::vector<Access> all(bytes.size() / kRecordBytes);
  for (std::size_t r = 0; r < all.size(); ++r) {
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data() + r * kRecordBytes);
    std::uint64_t addr = 0;
    for (int b = 7; b >= 0; --b) addr = (addr << 8) | p[b];
    all[r] = {addr, kind_from_code(p[8], r)};
  }
  return apply_sidecar(std::move(all), sidecar_path);
}

void write_binary_trace(const std::string& path, const AccessTrace& trace, const std::string& sidecar_path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write trace '" + path + "'");
  char rec[kRecordBytes];
  for (const auto& seg : trace.segments) {
    for (const auto& a : seg.accesses) {
      for (int b = 0; b < 8; ++b) rec[b] = static_cast<char>((a.address >> (8 * b)) & 0xff);
      rec[8] = static_cast<char>(a.kind);
      out.write(rec, kRecordBytes);
    }
  }
  if (!out) throw IoError("write failed for trace '" + path + "'");
  if (!sidecar_path.empty()) write_sidecar(sidecar_path, trace);
}

AccessTrace read_text_trace(const std::string& path, const std::string& sidecar_path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open trace '" + path + "'");
  std::vector<Access> all;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t b = 0;
    while (b < line.size() && std::isspace(static_cast<unsigned char>(line[b]))) ++b;
    if (b == line.size() || line[b] == '#') continue;
    std::size_t e = b;
    while (e < line.size() && !std::isspace(static_cast<unsigned char>(line[e]))) ++e;
    const AccessKind kind = kind_from_token(line.substr(b, e - b), line_no);
    while (e < line.size() && std::isspace(static_cast<unsigned char>(line[e]))) ++e;
    std::string_view hex(line.data() + e, line.size() - e);
    while (!hex.empty() && std::isspace(static_cast<unsigned char>(hex.back()))) hex.remove_suffix(1);
    if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
    std::uint64_t addr = 0;
    const auto [p, ec] = std::from_chars(hex.data(), hex.data() + hex.size(), addr, 16);
    if (hex.empty() || ec != std::errc{} || p != hex.data() + hex.size()) {
      throw ValidationError("trace line " + std::to_string(line_no) + ": bad address");
    }
    all.push_back({addr, kind});
  }
  return apply_sidecar(std::move(all), sidecar_path);
}

void write_text_trace(const std::string& path, const AccessTrace& trace) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write trace '" + path + "'");
  char buf[32];
  for (const auto& seg : trace.segments) {
    for (const auto& a : seg.accesses) {
      std::snprintf(buf, sizeof buf, "%c %llx\n", kind_char(a.kind), static_cast<unsigned long long>(a.address));
      out << buf;
    }
  }
}

AccessTrace read_trace(const std::string& path) {
  namespace fs = std::filesystem;
  const std::string sidecar = fs::exists(path + ".json") ? path + ".json" : "";
  if (fs::path(path).extension() == ".bin") return read_binary_trace(path, sidecar);
  return read_text_trace(path, sidecar);
}

}  // namespace wcr
