#include "trunkenness/error.hpp"

#include <sstream>

namespace trunk {

namespace {

std::string render(const std::vector<ConfigIssue>& issues) {
  std::ostringstream out;
  for (size_t i = 0; i < issues.size(); ++i) {
    const auto& issue = issues[i];
    if (i > 0) out << "\n";
    if (issue.line > 0) out << "line " << issue.line << ": ";
    if (!issue.field.empty()) out << issue.field << ": ";
    out << issue.message;
  }
  return out.str();
}

}  // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : Error(render(issues)), issues_(std::move(issues)) {}

}  // namespace trunk
