#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "saferoute/model.hpp"

namespace saferoute {

// Shortest decimal text that parses back to the same double.
std::string format_number(double value);
double parse_number(std::string_view token, int line);

// The instance interchange format (version 1). See docs/formats.md.
void write_instance(std::ostream& out, const Instance& instance);
std::string write_instance(const Instance& instance);
Instance read_instance(std::istream& in);
Instance read_instance_text(std::string_view text);
Instance read_instance_file(const std::string& path);
void write_instance_file(const std::string& path, const Instance& instance);

// "speed 1 2 ... 24" or "speed const 1"; used by profile blocks.
std::string format_profile_line(std::string_view key, const TimeProfile& profile);

}  // namespace saferoute
