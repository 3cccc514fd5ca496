#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nearlat/algebra.hpp"

namespace nearlat {

// Text format for finite algebras. Lines, '#' starts a comment:
//
//   size N
//   elements a b ... 1          (optional; defaults to 0..N-1)
//
// then either a cover list (the operation is synthesized from the order)
//
//   a < x
//
// or a full operation table, one cell per line, all N^3 cells required:
//
//   m a b c = d
//
// plus optional declarations in either style:
//
//   const top = 1
//   box a = b                    (one line per element if present)
struct AlgebraParseError : std::runtime_error {
  int line;
  AlgebraParseError(const std::string& what, int line_no)
      : std::runtime_error("line " + std::to_string(line_no) + ": " + what),
        line(line_no) {}
};

FiniteAlgebra read_algebra(std::istream& in);
FiniteAlgebra read_algebra_file(const std::string& path);

void write_algebra(std::ostream& out, const FiniteAlgebra& a);
void write_algebra_file(const std::string& path, const FiniteAlgebra& a);

// A class argument names either one .alg file (with or without the suffix)
// or a directory, which contributes every *.alg inside it in name order.
// Labels are the file stems.
std::vector<std::pair<std::string, FiniteAlgebra>> load_class_path(
    const std::string& path);

}  // namespace nearlat
