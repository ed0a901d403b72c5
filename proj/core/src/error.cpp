#include "mirrorforge/error.hpp"

namespace mirrorforge {

SyntaxError::SyntaxError(const std::string& message, std::size_t position)
    : Error(message + " at position " + std::to_string(position)), position_(position) {}

ConfigError::ConfigError(const std::string& message, int line)
    : Error(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}

}  // namespace mirrorforge
