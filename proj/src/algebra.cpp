#include "relcalc/algebra.hpp"

#include <algorithm>

namespace relcalc {

void FiniteAlgebra::validate() const {
  for (const auto& [symbol, op] : operations) {
    if (op.base_size() != size()) {
      throw InvalidStructure("operation " + symbol + " is tabulated over " + std::to_string(op.base_size()) +
                             " elements but the universe has " + std::to_string(size()));
    }
  }
}

bool FiniteAlgebra::is_idempotent() const {
  return std::ranges::all_of(operations, [](const auto& kv) { return kv.second.is_idempotent(); });
}

std::size_t FiniteAlgebra::max_arity() const {
  std::size_t m = 0;
  for (const auto& [symbol, op] : operations) m = std::max(m, op.arity());
  return m;
}

FiniteAlgebra two_element_algebra(std::map<std::string, OperationTable> operations) {
  FiniteAlgebra a{{"0", "1"}, std::move(operations)};
  a.validate();
  return a;
}

}  // namespace relcalc
