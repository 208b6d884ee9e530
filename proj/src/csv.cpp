#include "wcr/csv.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>

namespace wcr::csv {

namespace {

std::string_view strip(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void bad(std::size_t line_no, std::string_view field, std::string_view value) {
  throw ValidationError("line " + std::to_string(line_no) + ": bad " + std::string(field) + " '" +
                        std::string(value) + "'");
}

}  // namespace

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.emplace_back(strip(line.substr(start, pos == std::string_view::npos ? line.size() - start : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

bool next_line(std::istream& in, std::string& line, std::size_t& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!strip(line).empty()) return true;
  }
  return false;
}

double to_double(std::string_view s, std::size_t line_no, std::string_view field) {
  s = strip(s);
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || p != s.data() + s.size() || !std::isfinite(v)) bad(line_no, field, s);
  return v;
}

std::int64_t to_int(std::string_view s, std::size_t line_no, std::string_view field) {
  s = strip(s);
  std::int64_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || p != s.data() + s.size()) bad(line_no, field, s);
  return v;
}

std::uint64_t to_uint(std::string_view s, std::size_t line_no, std::string_view field) {
  s = strip(s);
  std::uint64_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || p != s.data() + s.size()) bad(line_no, field, s);
  return v;
}

std::size_t expect_header(std::istream& in, std::size_t& line_no, const std::vector<std::string>& expected,
                          const std::vector<std::string>& optional_extra) {
  std::string line;
  if (!next_line(in, line, line_no)) throw ValidationError("missing CSV header");
  const auto cols = split(line);
  bool ok = cols.size() >= expected.size() && cols.size() <= expected.size() + optional_extra.size();
  for (std::size_t i = 0; ok && i < cols.size(); ++i) {
    const auto& want = i < expected.size() ? expected[i] : optional_extra[i - expected.size()];
    ok = cols[i] == want;
  }
  if (!ok) {
    std::string want;
    for (const auto& c : expected) want += (want.empty() ? "" : ",") + c;
    throw ValidationError("line " + std::to_string(line_no) + ": expected header '" + want + "', got '" + line + "'");
  }
  return cols.size();
}

std::string fixed4(double v) {
  // Avoid emitting "-0.0000".
  if (std::fabs(v) < 0.00005) v = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace wcr::csv
