#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "relcalc/homsearch.hpp"

namespace relcalc {

/// Finite universe 0..k-1 with total basic operation tables, keyed by symbol.
struct FiniteAlgebra {
  std::vector<std::string> labels;
  std::map<std::string, OperationTable> operations;

  std::size_t size() const noexcept { return labels.size(); }
  /// Throws InvalidStructure when a table is sized for a different universe.
  void validate() const;
  bool is_idempotent() const;
  std::size_t max_arity() const;
};

/// Two-element algebra on {0,1} with labels "0","1".
FiniteAlgebra two_element_algebra(std::map<std::string, OperationTable> operations = {});

}  // namespace relcalc
