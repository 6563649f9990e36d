#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace optval {

/// Printf "%.6g": every numeric field the tools emit goes through here.
std::string fmt6(double value);

/// Value rounded to 6 significant digits (for structured output).
double round6(double value);

/// Splits one delimited line; no quoting support beyond stripping a pair of
/// surrounding double quotes and whitespace from each field.
std::vector<std::string> split_fields(std::string_view line, char delimiter);

/// Strict decimal parse of a whole field. Returns false on trailing garbage.
bool parse_double(std::string_view field, double& out);

}  // namespace optval
