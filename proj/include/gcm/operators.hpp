#pragma once

#include <string>
#include <string_view>

namespace gcm {

/// Operators that can be assembled in either quantization.
enum class Operator { H0, Hprime, H, L2 };

std::string to_string(Operator op);

/// Accepts "H0", "Hprime" (or "H'"), "H", "L2"; throws std::invalid_argument.
Operator operator_from_string(std::string_view name);

}  // namespace gcm
