#include "dnfkit/dnf_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

namespace dnfkit {

namespace {

bool parse_int(std::string_view tok, long long& out) {
  const char* first = tok.data();
  if (!tok.empty() && tok.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

}  // namespace

ParsedDnf parse_dnf(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  long long n = 0, m = 0;
  std::vector<Term> terms;
  std::vector<int> current;
  std::size_t term_line = 0;

  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::string tok;
    if (!(ss >> tok)) continue;
    if (tok[0] == 'c') continue;
    if (tok == "p") {
      if (have_header) throw ParseError(lineno, "duplicate header");
      std::string kind, ntok, mtok, extra;
      if (!(ss >> kind >> ntok >> mtok) || kind != "dnf" || !parse_int(ntok, n) || !parse_int(mtok, m) || n < 0 ||
          m < 0 || (ss >> extra))
        throw ParseError(lineno, "malformed header, expected 'p dnf <n> <m>'");
      have_header = true;
      continue;
    }
    if (!have_header) throw ParseError(lineno, "term before 'p dnf' header");
    do {
      long long lit = 0;
      if (!parse_int(tok, lit)) throw ParseError(lineno, "not an integer literal: '" + tok + "'");
      if (lit == 0) {
        if (static_cast<long long>(terms.size()) >= m)
          throw ParseError(lineno, "term count mismatch: more than " + std::to_string(m) + " terms");
        terms.push_back(Term::from_dimacs(static_cast<std::size_t>(n), current));
        current.clear();
        continue;
      }
      if (lit > n || lit < -n) throw ParseError(lineno, "literal " + tok + " out of range for n=" + std::to_string(n));
      if (current.empty()) term_line = lineno;
      current.push_back(static_cast<int>(lit));
    } while (ss >> tok);
  }
  if (!have_header) throw ParseError(lineno, "missing 'p dnf <n> <m>' header");
  if (!current.empty()) throw ParseError(term_line, "term not terminated by 0");
  if (static_cast<long long>(terms.size()) != m)
    throw ParseError(lineno, "term count mismatch: header says " + std::to_string(m) + ", found " +
                                 std::to_string(terms.size()));

  ParsedDnf out;
  out.raw = DnfFormula(static_cast<std::size_t>(n), std::move(terms));
  CanonicalizeReport rep;
  out.formula = canonicalize(out.raw, &rep);
  if (rep.contradictory)
    out.warnings.push_back("dropped " + std::to_string(rep.contradictory) + " contradictory term(s)");
  if (rep.subsumed) out.warnings.push_back("dropped " + std::to_string(rep.subsumed) + " subsumed term(s)");
  if (rep.became_constant_true) out.warnings.push_back("empty term present: formula is constant true");
  return out;
}

ParsedDnf parse_dnf(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_dnf(in);
}

ParsedDnf parse_dnf_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return parse_dnf(in);
}

void write_dnf(std::ostream& out, const DnfFormula& f, const std::vector<std::string>& comments) {
  for (const std::string& c : comments) out << "c " << c << '\n';
  if (f.is_constant_true()) {
    out << "p dnf " << f.num_vars() << " 1\n0\n";
    return;
  }
  out << "p dnf " << f.num_vars() << ' ' << f.size() << '\n';
  for (const Term& t : f.terms()) {
    for (int lit : t.dimacs()) out << lit << ' ';
    out << "0\n";
  }
}

std::string to_dnf_string(const DnfFormula& f, const std::vector<std::string>& comments) {
  std::ostringstream out;
  write_dnf(out, f, comments);
  return out.str();
}

}  // namespace dnfkit
