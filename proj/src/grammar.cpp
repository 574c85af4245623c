#include "qfock/grammar.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace qfock {

std::string print_double(double x) {
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

std::string print_complex(Complex c) {
  if (c.imag() == 0.0) return print_double(c.real());
  if (c.real() == 0.0) return print_double(c.imag()) + "j";
  std::string s = print_double(c.real());
  if (c.imag() >= 0.0) s += "+";
  return s + print_double(c.imag()) + "j";
}

namespace {

class Cursor {
 public:
  explicit Cursor(const std::string& s) : s_(s) {}

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }
  bool done() {
    skip_ws();
    return pos_ >= s_.size();
  }
  char peek() { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  std::size_t pos() const { return pos_; }

  bool try_consume(const char* lit) {
    skip_ws();
    const std::size_t n = std::strlen(lit);
    if (s_.compare(pos_, n, lit) == 0) {
      pos_ += n;
      return true;
    }
    return false;
  }

  void expect(const char* lit) {
    if (!try_consume(lit))
      throw ParseError(std::string("expected '") + lit + "'", pos_);
  }

  double number() {
    skip_ws();
    const char* start = s_.c_str() + pos_;
    char* end = nullptr;
    double v = std::strtod(start, &end);
    if (end == start) throw ParseError("expected a number", pos_);
    pos_ += static_cast<std::size_t>(end - start);
    return v;
  }

  // re | re+imj | re-imj | [sign] imj
  Complex complex() {
    skip_ws();
    const std::size_t at = pos_;
    double first = number();
    if (pos_ < s_.size() && s_[pos_] == 'j') {
      ++pos_;
      return Complex(0.0, first);
    }
    skip_ws();
    if (peek() == '+' || peek() == '-') {
      const std::size_t save = pos_;
      double second = number();
      if (pos_ < s_.size() && s_[pos_] == 'j') {
        ++pos_;
        return Complex(first, second);
      }
      pos_ = save;  // the sign belongs to the next term
    }
    (void)at;
    return Complex(first, 0.0);
  }

  std::string ident() {
    skip_ws();
    const std::size_t start = pos_;
    auto ok_first = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; };
    auto ok_rest = [](char c) {
      return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' ||
             c == '^' || c == '[' || c == ']' || c == ',' || c == '@';
    };
    if (pos_ >= s_.size() || !ok_first(s_[pos_]))
      throw ParseError("expected an identifier", pos_);
    ++pos_;
    while (pos_ < s_.size() && ok_rest(s_[pos_])) ++pos_;
    return s_.substr(start, pos_ - start);
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;
};

// a factor, or nothing if the cursor does not sit on one
bool try_factor(Cursor& cur, Word& w) {
  if (cur.try_consume("a*(")) {
    w.push_back(make_create(cur.ident()));
    cur.expect(")");
    return true;
  }
  if (cur.try_consume("a(")) {
    w.push_back(make_annihilate(cur.ident()));
    cur.expect(")");
    return true;
  }
  if (cur.try_consume("L(")) {
    cur.expect("mu");
    cur.expect("=");
    const std::size_t at = cur.pos();
    Complex mu = cur.complex();
    cur.expect(";");
    std::string id = cur.ident();
    cur.expect(")");
    try {
      w.push_back(make_lambda(mu, std::move(id)));
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), at);
    }
    return true;
  }
  if (cur.try_consume("G(")) {
    const std::size_t at = cur.pos();
    Complex mu = cur.complex();
    cur.expect(")");
    try {
      w.push_back(make_gamma(mu));
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), at);
    }
    return true;
  }
  if (cur.try_consume("1")) return true;  // identity factor
  return false;
}

}  // namespace

Polynomial parse_polynomial(const std::string& text) {
  Cursor cur(text);
  Polynomial out;
  if (cur.done()) return out;  // empty input parses to the zero polynomial
  {
    // a lone "0" is the zero polynomial; "0.5 ..." still parses as a number
    const std::size_t save = cur.pos();
    if (cur.try_consume("0") && cur.done()) return out;
    if (cur.pos() != save && !cur.done())
      throw ParseError("unexpected characters after '0'", cur.pos());
  }
  bool first = true;
  for (;;) {
    Complex sign(1.0, 0.0);
    if (!first) {
      if (cur.try_consume("+")) {
      } else if (cur.try_consume("-")) {
        sign = Complex(-1.0, 0.0);
      } else {
        throw ParseError("expected '+' or '-'", cur.pos());
      }
    } else if (cur.try_consume("-")) {
      sign = Complex(-1.0, 0.0);
    }
    first = false;

    Complex coeff(1.0, 0.0);
    bool have_any = false;
    if (cur.try_consume("(")) {
      coeff = cur.complex();
      cur.expect(")");
      have_any = true;
    }
    Word w;
    while (try_factor(cur, w)) have_any = true;
    if (!have_any) throw ParseError("expected a coefficient or factor", cur.pos());
    out.add_term(std::move(w), sign * coeff);

    if (cur.done()) break;
  }
  return out;
}

std::string print_word(const Word& w) {
  if (w.empty()) return "1";
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += " ";
    const Generator& g = w[i];
    switch (g.kind) {
      case GenKind::Create: s += "a*(" + g.id + ")"; break;
      case GenKind::Annihilate: s += "a(" + g.id + ")"; break;
      case GenKind::Lambda: s += "L(mu=" + print_complex(g.mu) + "; " + g.id + ")"; break;
      case GenKind::Gamma: s += "G(" + print_complex(g.mu) + ")"; break;
    }
  }
  return s;
}

std::string print_polynomial(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [w, c] : p.terms()) {
    if (!first) s += " + ";
    first = false;
    s += "(" + print_complex(c) + ") " + print_word(w);
  }
  return s;
}

Complex parse_complex(const std::string& text) {
  Cursor cur(text);
  Complex c = cur.complex();
  if (!cur.done()) throw ParseError("trailing characters after complex literal", cur.pos());
  return c;
}

}  // namespace qfock
