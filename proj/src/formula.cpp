#include "dnfkit/formula.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace dnfkit {

Term::Term(std::size_t n, std::initializer_list<Literal> lits) : pos_(n), neg_(n) {
  for (const Literal& l : lits) add(l);
}

Term::Term(VarSet positive, VarSet negative) : pos_(std::move(positive)), neg_(std::move(negative)) {
  if (pos_.size() != neg_.size()) throw std::invalid_argument("term masks over different universes");
}

Term Term::from_dimacs(std::size_t n, std::span<const int> lits) {
  Term t(n);
  for (int lit : lits) {
    if (lit == 0) throw std::invalid_argument("literal 0 inside a term");
    t.add(Literal::from_dimacs(lit));
  }
  return t;
}

void Term::add(Literal lit) {
  if (lit.var >= pos_.size())
    throw std::out_of_range("literal variable " + std::to_string(lit.var) + " outside universe of " +
                            std::to_string(pos_.size()));
  (lit.positive ? pos_ : neg_).set(lit.var);
}

std::vector<Literal> Term::literals() const {
  std::vector<Literal> out;
  const VarSet vars = variables();
  vars.for_each([&](std::size_t v) {
    if (pos_.test(v)) out.push_back({static_cast<std::uint32_t>(v), true});
    if (neg_.test(v)) out.push_back({static_cast<std::uint32_t>(v), false});
  });
  return out;
}

std::vector<int> Term::dimacs() const {
  std::vector<int> out;
  for (const Literal& l : literals()) out.push_back(l.dimacs());
  return out;
}

std::string Term::to_string() const {
  std::string s = "(";
  bool first = true;
  for (const Literal& l : literals()) {
    if (!first) s += " & ";
    first = false;
    if (!l.positive) s += "~";
    s += "x" + std::to_string(l.var + 1);
  }
  return s + ")";
}

DnfFormula::DnfFormula(std::size_t n, std::vector<Term> terms) : n_(n), terms_(std::move(terms)) {
  for (const Term& t : terms_)
    if (t.num_vars() != n_) throw std::invalid_argument("term universe does not match formula");
  cache_words();
}

DnfFormula DnfFormula::constant(std::size_t n, bool value) {
  DnfFormula f(n, {});
  f.constant_true_ = value;
  return f;
}

void DnfFormula::cache_words() {
  pos_words_.clear();
  neg_words_.clear();
  if (n_ > 64) return;
  pos_words_.reserve(terms_.size());
  neg_words_.reserve(terms_.size());
  for (const Term& t : terms_) {
    pos_words_.push_back(t.positive().low_word());
    neg_words_.push_back(t.negative().low_word());
  }
}

std::size_t DnfFormula::width() const {
  std::size_t w = 0;
  for (const Term& t : terms_) w = std::max(w, t.width());
  return w;
}

bool DnfFormula::evaluate(const VarSet& x) const {
  if (x.size() != n_) throw std::invalid_argument("assignment length does not match formula");
  if (constant_true_) return true;
  if (n_ <= 64) return evaluate_word(x.low_word());
  return std::any_of(terms_.begin(), terms_.end(), [&](const Term& t) { return t.satisfied_by(x); });
}

bool DnfFormula::evaluate(std::span<const bool> x) const {
  if (x.size() != n_) throw std::invalid_argument("assignment length does not match formula");
  VarSet bits(n_);
  for (std::size_t i = 0; i < n_; ++i)
    if (x[i]) bits.set(i);
  return evaluate(bits);
}

VarSet DnfFormula::support() const {
  VarSet s(n_);
  for (const Term& t : terms_) {
    s |= t.positive();
    s |= t.negative();
  }
  return s;
}

bool DnfFormula::is_unate() const {
  VarSet pos(n_), neg(n_);
  for (const Term& t : terms_) {
    pos |= t.positive();
    neg |= t.negative();
  }
  return !pos.intersects(neg);
}

bool DnfFormula::is_canonical() const {
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].empty() || terms_[i].contradictory()) return false;
    for (std::size_t j = 0; j < terms_.size(); ++j)
      if (i != j && terms_[j].is_subset_of(terms_[i])) return false;
  }
  return true;
}

DnfFormula DnfFormula::subformula(std::span<const std::size_t> indices) const {
  std::vector<Term> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(terms_.at(i));
  return DnfFormula(n_, std::move(out));
}

DnfFormula DnfFormula::disjoin(const DnfFormula& other) const {
  if (other.n_ != n_) throw std::invalid_argument("disjunction over different universes");
  if (constant_true_ || other.constant_true_) return constant(n_, true);
  std::vector<Term> out = terms_;
  out.insert(out.end(), other.terms_.begin(), other.terms_.end());
  return DnfFormula(n_, std::move(out));
}

std::string DnfFormula::to_string() const {
  if (constant_true_) return "1";
  if (terms_.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i) s += " | ";
    s += terms_[i].to_string();
  }
  return s;
}

DnfFormula canonicalize(const DnfFormula& raw, CanonicalizeReport* report) {
  CanonicalizeReport local;
  CanonicalizeReport& rep = report ? *report : local;
  rep = {};
  const std::size_t n = raw.num_vars();
  if (raw.is_constant_true()) return DnfFormula::constant(n, true);

  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const Term& t = raw.term(i);
    if (t.contradictory()) {
      ++rep.contradictory;
      continue;
    }
    if (t.empty()) {
      rep.became_constant_true = true;
      return DnfFormula::constant(n, true);
    }
    order.push_back(i);
  }

  // Narrow terms first, so a kept term can only be subsumed by an earlier kept one.
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return raw.term(a).width() < raw.term(b).width(); });
  std::vector<std::size_t> kept;
  for (std::size_t i : order) {
    const Term& t = raw.term(i);
    const bool subsumed =
        std::any_of(kept.begin(), kept.end(), [&](std::size_t k) { return raw.term(k).is_subset_of(t); });
    if (subsumed)
      ++rep.subsumed;
    else
      kept.push_back(i);
  }
  std::sort(kept.begin(), kept.end());
  return raw.subformula(kept);
}

Restriction::Restriction(std::span<const Assign> values) : live_(values.size()), ones_(values.size()) {
  for (std::size_t i = 0; i < values.size(); ++i) set(i, values[i]);
}

Restriction Restriction::parse(const std::string& text) {
  std::vector<Assign> v;
  for (char c : text) {
    switch (c) {
      case '0': v.push_back(Assign::Zero); break;
      case '1': v.push_back(Assign::One); break;
      case '*': v.push_back(Assign::Star); break;
      default: throw std::invalid_argument(std::string("bad restriction symbol '") + c + "'");
    }
  }
  return Restriction(v);
}

void Restriction::set(std::size_t i, Assign a) {
  live_.set(i, a == Assign::Star);
  ones_.set(i, a == Assign::One);
}

std::vector<std::uint32_t> Restriction::live_indices() const {
  std::vector<std::uint32_t> out;
  live_.for_each([&](std::size_t i) { out.push_back(static_cast<std::uint32_t>(i)); });
  return out;
}

std::string Restriction::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < size(); ++i) {
    const Assign a = (*this)[i];
    s += a == Assign::Star ? '*' : (a == Assign::One ? '1' : '0');
  }
  return s;
}

namespace {

// Maps the bits of s selected by `keep` to positions 0..|keep|-1.
VarSet gather(const VarSet& s, std::span<const std::uint32_t> keep) {
  VarSet out(keep.size());
  for (std::size_t j = 0; j < keep.size(); ++j)
    if (s.test(keep[j])) out.set(j);
  return out;
}

}  // namespace

DnfFormula restrict(const DnfFormula& f, const Restriction& rho) {
  if (rho.size() != f.num_vars()) throw std::invalid_argument("restriction length does not match formula");
  const std::vector<std::uint32_t> live = rho.live_indices();
  if (f.is_constant_true()) return DnfFormula::constant(live.size(), true);
  const VarSet& ones = rho.fixed_ones();
  const VarSet zeros = rho.fixed_zeros();
  std::vector<Term> out;
  for (const Term& t : f.terms()) {
    if (t.positive().intersects(zeros) || t.negative().intersects(ones)) continue;
    out.emplace_back(gather(t.positive(), live), gather(t.negative(), live));
  }
  return canonicalize(DnfFormula(live.size(), std::move(out)));
}

DnfFormula substitute(const DnfFormula& f, std::size_t var, bool value) {
  if (f.is_constant()) return f;
  std::vector<Term> out;
  out.reserve(f.size());
  for (const Term& t : f.terms()) {
    const bool pos = t.positive().test(var);
    const bool neg = t.negative().test(var);
    if ((pos && !value) || (neg && value)) continue;
    if (!pos && !neg) {
      out.push_back(t);
      continue;
    }
    VarSet p = t.positive(), q = t.negative();
    p.reset(var);
    q.reset(var);
    out.emplace_back(std::move(p), std::move(q));
  }
  return canonicalize(DnfFormula(f.num_vars(), std::move(out)));
}

Compacted compact(const DnfFormula& f) {
  Compacted c;
  f.support().for_each([&](std::size_t v) { c.original.push_back(static_cast<std::uint32_t>(v)); });
  if (f.is_constant_true()) {
    c.formula = DnfFormula::constant(0, true);
    return c;
  }
  std::vector<Term> out;
  out.reserve(f.size());
  for (const Term& t : f.terms()) out.emplace_back(gather(t.positive(), c.original), gather(t.negative(), c.original));
  c.formula = DnfFormula(c.original.size(), std::move(out));
  return c;
}

VarSet complete(const Restriction& rho, const VarSet& live_values) {
  const std::vector<std::uint32_t> live = rho.live_indices();
  if (live_values.size() != live.size()) throw std::invalid_argument("completion length does not match live set");
  VarSet x = rho.fixed_ones();
  for (std::size_t j = 0; j < live.size(); ++j)
    if (live_values.test(j)) x.set(live[j]);
  return x;
}

}  // namespace dnfkit
