#pragma once

#include <algorithm>
#include <string>

#include "relcalc/algebra.hpp"
#include "relcalc/homsearch.hpp"

namespace fixtures {

inline std::string data(const std::string& relative) { return std::string(RELCALC_DATA_DIR) + "/" + relative; }

inline relcalc::OperationTable meet() {
  return relcalc::OperationTable(2, 2, {0, 0, 0, 1});
}
inline relcalc::OperationTable join() {
  return relcalc::OperationTable(2, 2, {0, 1, 1, 1});
}
inline relcalc::OperationTable majority() {
  return relcalc::OperationTable::from_function(3, 2, [](auto a) { return a[0] + a[1] + a[2] >= 2 ? 1u : 0u; });
}
inline relcalc::OperationTable minority() {
  return relcalc::OperationTable::from_function(3, 2, [](auto a) { return (a[0] + a[1] + a[2]) % 2; });
}

inline relcalc::FiniteAlgebra semilattice() { return relcalc::two_element_algebra({{"meet", meet()}}); }
inline relcalc::FiniteAlgebra lattice() { return relcalc::two_element_algebra({{"join", join()}, {"meet", meet()}}); }
inline relcalc::FiniteAlgebra empty_signature() { return relcalc::two_element_algebra({}); }
inline relcalc::FiniteAlgebra majority_algebra() { return relcalc::two_element_algebra({{"t", majority()}}); }
inline relcalc::FiniteAlgebra minority_algebra() { return relcalc::two_element_algebra({{"p", minority()}}); }

/// Three-element chain with min.
inline relcalc::FiniteAlgebra chain3() {
  relcalc::FiniteAlgebra a{{"0", "1", "2"}, {}};
  a.operations.emplace("meet", relcalc::OperationTable::from_function(
                                   2, 3, [](auto v) { return std::min(v[0], v[1]); }));
  return a;
}

}  // namespace fixtures
