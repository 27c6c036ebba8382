#pragma once

#include <functional>
#include <string>

namespace brach::expr {

/// Parses a single-variable arithmetic expression in `u`.
/// Grammar: + - * / ^ (right-assoc), unary minus, parentheses, numeric
/// literals, `pi`, and the functions cos sin cosh sinh exp sqrt log.
/// Throws Error(Errc::parse_error) on malformed input.
std::function<double(double)> parse_unary(const std::string& text);

}  // namespace brach::expr
