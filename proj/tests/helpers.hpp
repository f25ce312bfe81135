#pragma once

#include <initializer_list>
#include <vector>

#include "dnfkit/formula.hpp"

namespace testing_util {

/// Raw formula from 1-based signed literal lists.
inline dnfkit::DnfFormula dnf(std::size_t n, std::initializer_list<std::initializer_list<int>> terms) {
  std::vector<dnfkit::Term> ts;
  for (auto t : terms) {
    const std::vector<int> lits(t);
    ts.push_back(dnfkit::Term::from_dimacs(n, lits));
  }
  return dnfkit::DnfFormula(n, std::move(ts));
}

}  // namespace testing_util
