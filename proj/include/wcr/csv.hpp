#pragma once

// Minimal CSV helpers for the toolkit's flat, unquoted tables.

#include <charconv>
#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wcr/error.hpp"

namespace wcr::csv {

std::vector<std::string> split(std::string_view line, char sep = ',');

// Reads the next non-blank line, stripping a trailing '\r'. Returns false at
// end of input. `line_no` is advanced for every physical line consumed.
bool next_line(std::istream& in, std::string& line, std::size_t& line_no);

// Throws ValidationError naming `line_no` and `field` on malformed input.
double to_double(std::string_view s, std::size_t line_no, std::string_view field);
std::int64_t to_int(std::string_view s, std::size_t line_no, std::string_view field);
std::uint64_t to_uint(std::string_view s, std::size_t line_no, std::string_view field);

// Checks that the first line equals `expected` (optionally followed by the
// listed extra columns). Returns the number of columns present.
std::size_t expect_header(std::istream& in, std::size_t& line_no, const std::vector<std::string>& expected,
                          const std::vector<std::string>& optional_extra = {});

// Fixed 4-decimal formatting used by every emitted table.
std::string fixed4(double v);

}  // namespace wcr::csv
