#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace fedscreen::csv {

// Splits one line on commas. No quoting: none of our file formats need it.
std::vector<std::string> split_line(std::string_view line);

std::string join(const std::vector<std::string>& fields);

// Shortest decimal form that round-trips to the same double. Keeps files
// byte-stable across runs and locales.
std::string format_double(double value);

// Fixed-point with the given number of decimal places (report files).
std::string format_fixed(double value, int places);

// Hex float form ("1.8p+1"); bit-exact round trip for checkpoints.
std::string format_hex(double value);

// Strict parsers: the whole field must be consumed. `context` names the
// file location for error messages.
double parse_double(std::string_view field, const std::string& context);
long long parse_int(std::string_view field, const std::string& context);
double parse_hex(std::string_view field, const std::string& context);

}  // namespace fedscreen::csv
