#include "gcm/operators.hpp"

#include <stdexcept>

namespace gcm {

std::string to_string(Operator op) {
  switch (op) {
    case Operator::H0: return "H0";
    case Operator::Hprime: return "Hprime";
    case Operator::H: return "H";
    case Operator::L2: return "L2";
  }
  return "?";
}

Operator operator_from_string(std::string_view name) {
  if (name == "H0" || name == "h0") return Operator::H0;
  if (name == "Hprime" || name == "hprime" || name == "H'") return Operator::Hprime;
  if (name == "H" || name == "h") return Operator::H;
  if (name == "L2" || name == "l2") return Operator::L2;
  throw std::invalid_argument("unknown operator '" + std::string(name) + "'");
}

}  // namespace gcm
