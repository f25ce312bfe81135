#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dnfkit/formula.hpp"

namespace dnfkit {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct ParsedDnf {
  DnfFormula formula;  // canonical
  DnfFormula raw;      // terms exactly as written
  std::vector<std::string> warnings;
};

/// Reads the `p dnf <n> <m>` text format: comment lines start with `c`, each
/// term is a list of nonzero signed 1-based literals terminated by 0. A bare
/// `0` is the empty (always true) term.
ParsedDnf parse_dnf(std::istream& in);
ParsedDnf parse_dnf(std::string_view text);
ParsedDnf parse_dnf_file(const std::filesystem::path& path);

void write_dnf(std::ostream& out, const DnfFormula& f, const std::vector<std::string>& comments = {});
std::string to_dnf_string(const DnfFormula& f, const std::vector<std::string>& comments = {});

}  // namespace dnfkit
