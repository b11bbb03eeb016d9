#pragma once
// Minimal CSV helpers for numeric tables.

#include <string>
#include <string_view>
#include <vector>

namespace ordsoft::csv {

std::vector<std::string> split(std::string_view line, char sep = ',');

// Shortest representation that round-trips.
std::string format_double(double v);

double parse_double(std::string_view text);
int parse_int(std::string_view text);

}  // namespace ordsoft::csv
