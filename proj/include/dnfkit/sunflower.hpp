#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "dnfkit/bias.hpp"
#include "dnfkit/exact.hpp"
#include "dnfkit/formula.hpp"

namespace dnfkit {

/// (1/5) (m / w!)^(1/w), the quasi-sunflower strength guaranteed in a unate
/// width-w formula with m terms.
double gamma_bound(double m, std::size_t w);

/// Terms whose variable sets pairwise intersect exactly in `core`.
struct Sunflower {
  std::vector<std::size_t> term_indices;  // ascending, k >= 3
  VarSet core;
};

/// Erdős–Rado search on the variable sets of a unate formula: take k pairwise
/// disjoint terms if a greedy pass finds them, otherwise move into the link of
/// the most frequent variable. Succeeds whenever m > w!(k-1)^w.
std::optional<Sunflower> find_sunflower(const DnfFormula& f, std::size_t k);
bool verify_sunflower(const DnfFormula& f, const Sunflower& s);

struct QuasiSunflower {
  std::vector<std::size_t> term_indices;  // ascending, k >= 2
  Term core;                              // exact intersection of the chosen terms
  BiasValue petal_zero_prob;              // Pr_x[every petal T \ core is 0]
  double gamma = 0;                       // -ln(petal_zero_prob)
  bool meets_goal = true;

  std::size_t k() const { return term_indices.size(); }
};

/// Candidate cores: the empty core together with every intersection of two or
/// more terms. Sorted by width, then literal order.
std::vector<Term> candidate_cores(const DnfFormula& f);

/// Formula of petals T_i \ core for the given term indices (raw).
DnfFormula petal_formula(const DnfFormula& f, const std::vector<std::size_t>& indices, const Term& core);

/// Scans candidate cores in order; each core Y is evaluated on the family of
/// all terms containing Y. Returns the first candidate with gamma >=
/// gamma_goal, otherwise the strongest one with meets_goal = false. Empty when
/// f has fewer than two terms. f must be unate and canonical.
std::optional<QuasiSunflower> find_quasi_sunflower(const DnfFormula& f, double gamma_goal,
                                                   std::size_t support_cap = kDefaultBiasSupportCap);

/// Strongest candidate (smallest petal-zero probability; ties to larger k,
/// then the lexicographically smallest index set).
std::optional<QuasiSunflower> best_quasi_sunflower(const DnfFormula& f,
                                                   std::size_t support_cap = kDefaultBiasSupportCap);

/// Recomputes the core and the petal-zero probability from scratch.
bool verify_quasi_sunflower(const DnfFormula& f, const QuasiSunflower& q,
                            std::size_t support_cap = kDefaultBiasSupportCap);

/// Set-system reading of a quasi-sunflower: with W holding each variable
/// independently with probability 1/2, Pr[some petal misses W]. For a unate
/// family (W = variables whose literal is false) this equals the probability
/// that some petal is satisfied.
BiasValue set_system_hit_probability(const DnfFormula& f, const std::vector<std::size_t>& indices,
                                     const Term& core);

}  // namespace dnfkit
