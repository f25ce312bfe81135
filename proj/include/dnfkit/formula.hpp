#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dnfkit/bits.hpp"

namespace dnfkit {

struct Literal {
  std::uint32_t var = 0;
  bool positive = true;

  /// 1-based signed integer as used in the on-disk format.
  int dimacs() const { return positive ? static_cast<int>(var) + 1 : -(static_cast<int>(var) + 1); }
  static Literal from_dimacs(int lit) {
    return lit > 0 ? Literal{static_cast<std::uint32_t>(lit - 1), true}
                   : Literal{static_cast<std::uint32_t>(-lit - 1), false};
  }
  friend auto operator<=>(const Literal&, const Literal&) = default;
};

/// Conjunction of literals over a universe of n variables, stored as a
/// positive-variable mask and a negative-variable mask.
class Term {
 public:
  Term() = default;
  explicit Term(std::size_t n) : pos_(n), neg_(n) {}
  Term(std::size_t n, std::initializer_list<Literal> lits);
  Term(VarSet positive, VarSet negative);

  /// Builds a term from 1-based signed literals.
  static Term from_dimacs(std::size_t n, std::span<const int> lits);

  void add(Literal lit);

  std::size_t num_vars() const { return pos_.size(); }
  const VarSet& positive() const { return pos_; }
  const VarSet& negative() const { return neg_; }
  VarSet variables() const { return pos_ | neg_; }
  std::size_t width() const { return pos_.count() + neg_.count(); }
  bool empty() const { return pos_.none() && neg_.none(); }
  bool contradictory() const { return pos_.intersects(neg_); }

  /// Literal-set inclusion: every literal of *this appears in other.
  bool is_subset_of(const Term& other) const {
    return pos_.is_subset_of(other.pos_) && neg_.is_subset_of(other.neg_);
  }
  Term intersect(const Term& other) const { return Term(pos_ & other.pos_, neg_ & other.neg_); }
  Term minus(const Term& other) const { return Term(pos_ - other.pos_, neg_ - other.neg_); }

  bool satisfied_by(const VarSet& x) const { return pos_.is_subset_of(x) && !neg_.intersects(x); }

  std::vector<Literal> literals() const;
  std::vector<int> dimacs() const;
  std::string to_string() const;

  friend bool operator==(const Term&, const Term&) = default;
  friend std::strong_ordering operator<=>(const Term& a, const Term& b) {
    if (auto c = a.pos_ <=> b.pos_; c != 0) return c;
    return a.neg_ <=> b.neg_;
  }

 private:
  VarSet pos_;
  VarSet neg_;
};

/// A DNF over variables 0..n-1.
///
/// The constructor accepts any term list (a "raw" formula); canonicalize()
/// produces the minimal representation the algorithms expect. The constant
/// true formula is a flag with an empty term list, never an empty term.
class DnfFormula {
 public:
  DnfFormula() = default;
  DnfFormula(std::size_t n, std::vector<Term> terms);

  static DnfFormula constant(std::size_t n, bool value);

  std::size_t num_vars() const { return n_; }
  std::size_t size() const { return terms_.size(); }
  std::size_t width() const;
  const std::vector<Term>& terms() const { return terms_; }
  const Term& term(std::size_t i) const { return terms_[i]; }

  bool is_constant_true() const { return constant_true_; }
  bool is_constant_false() const { return !constant_true_ && terms_.empty(); }
  bool is_constant() const { return constant_true_ || terms_.empty(); }

  bool evaluate(const VarSet& x) const;
  /// Fast path for n <= 64: bit i of x is variable i.
  bool evaluate_word(std::uint64_t x) const {
    if (constant_true_) return true;
    const std::size_t m = pos_words_.size();
    for (std::size_t i = 0; i < m; ++i)
      if ((pos_words_[i] & ~x) == 0 && (neg_words_[i] & x) == 0) return true;
    return false;
  }
  bool evaluate(std::span<const bool> x) const;

  /// Variables that occur in some term.
  VarSet support() const;
  /// No variable occurs in both polarities.
  bool is_unate() const;
  /// Minimal representation: no contradictory, empty, duplicate or subsumed terms.
  bool is_canonical() const;

  /// Terms at the given indices, in the given order.
  DnfFormula subformula(std::span<const std::size_t> indices) const;
  /// Raw disjunction (term lists concatenated).
  DnfFormula disjoin(const DnfFormula& other) const;

  std::string to_string() const;

  friend bool operator==(const DnfFormula& a, const DnfFormula& b) {
    return a.n_ == b.n_ && a.constant_true_ == b.constant_true_ && a.terms_ == b.terms_;
  }

 private:
  void cache_words();

  std::size_t n_ = 0;
  std::vector<Term> terms_;
  bool constant_true_ = false;
  std::vector<std::uint64_t> pos_words_;
  std::vector<std::uint64_t> neg_words_;
};

struct CanonicalizeReport {
  std::size_t contradictory = 0;
  std::size_t subsumed = 0;  // includes duplicates
  bool became_constant_true = false;
};

/// Minimal representation of raw; term order of survivors is preserved.
DnfFormula canonicalize(const DnfFormula& raw, CanonicalizeReport* report = nullptr);

enum class Assign : std::uint8_t { Zero, One, Star };

/// Partial assignment rho in {0,1,*}^n; the *-positions form the live set.
class Restriction {
 public:
  Restriction() = default;
  /// All-star restriction.
  explicit Restriction(std::size_t n) : live_(VarSet::full(n)), ones_(n) {}
  explicit Restriction(std::span<const Assign> values);
  /// Parses "01*" strings.
  static Restriction parse(const std::string& text);

  std::size_t size() const { return live_.size(); }
  Assign operator[](std::size_t i) const {
    return live_.test(i) ? Assign::Star : (ones_.test(i) ? Assign::One : Assign::Zero);
  }
  void set(std::size_t i, Assign a);

  const VarSet& live() const { return live_; }
  const VarSet& fixed_ones() const { return ones_; }
  VarSet fixed_zeros() const { return VarSet::full(size()) - live_ - ones_; }
  std::size_t num_live() const { return live_.count(); }
  std::vector<std::uint32_t> live_indices() const;

  std::string to_string() const;
  friend bool operator==(const Restriction&, const Restriction&) = default;

 private:
  VarSet live_;
  VarSet ones_;
};

/// f restricted by rho, over the live variables renumbered 0..|L|-1 in
/// increasing order, re-canonicalized.
DnfFormula restrict(const DnfFormula& f, const Restriction& rho);

/// Fixes one variable, keeping the variable count; canonical output.
DnfFormula substitute(const DnfFormula& f, std::size_t var, bool value);

struct Compacted {
  DnfFormula formula;                   // over support().count() variables
  std::vector<std::uint32_t> original;  // new index -> old index
};

/// Renumbers the support of f to 0..s-1 (order preserving).
Compacted compact(const DnfFormula& f);

/// Extends an assignment of the live variables to a full assignment.
VarSet complete(const Restriction& rho, const VarSet& live_values);

}  // namespace dnfkit
