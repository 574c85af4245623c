#pragma once

#include "qfock/word.hpp"

#include <stdexcept>
#include <string>

namespace qfock {

struct ParseError : std::runtime_error {
  std::size_t position;
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " at position " + std::to_string(pos)),
        position(pos) {}
};

/// Word grammar, shared by the command line and the biprocess files:
///
///   poly    := term (('+' | '-') term)*    |  '0'
///   term    := coeff factor*  |  factor+
///   coeff   := '(' complex ')'
///   factor  := 'a*(' ident ')' | 'a(' ident ')'
///            | 'L(' 'mu' '=' complex ';' ident ')' | 'G(' complex ')' | '1'
///   complex := re | re'+'im'j' | re'-'im'j' | im'j'
///
/// The printer emits canonical normal forms in the same grammar and
/// parse(print(p)) == p holds exactly (coefficients are printed with just
/// enough digits to round-trip).
Polynomial parse_polynomial(const std::string& text);

std::string print_polynomial(const Polynomial& p);
std::string print_word(const Word& w);

Complex parse_complex(const std::string& text);
std::string print_complex(Complex c);
std::string print_double(double x);

}  // namespace qfock
