#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace causal_atlas {

/// Shortest decimal text that parses back to the identical double.
std::string format_double(double value);
/// Parses a full-field double; returns false on trailing garbage.
bool parse_double(std::string_view text, double& out);

std::vector<std::string> split(std::string_view text, char sep);
std::string trim(std::string_view text);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace causal_atlas
