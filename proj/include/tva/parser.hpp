// Expression parser for algebra elements.  The grammar accepts exactly what
// HopfElement::to_string emits, plus the obvious liberalizations (redundant
// parentheses, unary minus, arbitrary whitespace):
//
//   expr    := term (('+' | '-') term)*
//   term    := ['-'] factor ('*' factor)*
//   factor  := prefix* atom  |  scalar  |  '(' expr ')'
//   prefix  := 'D' '^' '(' int ')'  |  'T' ['^' int]
//   atom    := 'phi' | 'psi' | 'h' | 'e' '{' int '}'
//   scalar  := rational  |  rational '*' 'eps' ['^' int]  |  'eps' ['^' int]
//
// Errors are reported as ParseError with a character position and a message
// naming what was expected.  A twist power at or above the algebra order, a
// derivation applied to a lattice grouplike, and symbols absent from the
// requested ambient are all rejected.
#pragma once

#include <cctype>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tva/hopf.hpp"

namespace tva {

struct ParseError : std::runtime_error {
  std::size_t pos;
  ParseError(std::size_t p, const std::string& msg)
      : std::runtime_error(msg + " at position " + std::to_string(p)), pos(p) {}
};

namespace detail_ps {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, LBrace, RBrace, End };

struct Token {
  Tok kind;
  std::size_t pos;
  std::string text;  // identifier spelling or digit run
};

inline std::vector<Token> tokenize(const std::string& src) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) { ++i; continue; }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Tok::Number, i, src.substr(i, j - i)});
      i = j;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isalpha(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Tok::Ident, i, src.substr(i, j - i)});
      i = j;
      continue;
    }
    Tok k;
    switch (c) {
      case '+': k = Tok::Plus; break;
      case '-': k = Tok::Minus; break;
      case '*': k = Tok::Star; break;
      case '/': k = Tok::Slash; break;
      case '^': k = Tok::Caret; break;
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      case '{': k = Tok::LBrace; break;
      case '}': k = Tok::RBrace; break;
      default: throw ParseError(i, std::string("unexpected character '") + c + "'");
    }
    out.push_back({k, i, std::string(1, c)});
    ++i;
  }
  out.push_back({Tok::End, src.size(), ""});
  return out;
}

class Parser {
 public:
  Parser(const std::string& src, int order, Ambient amb)
      : toks_(tokenize(src)), order_(order), amb_(amb) {}

  HopfElement run() {
    HopfElement e = expr();
    expect(Tok::End, "end of input");
    return e;
  }

 private:
  std::vector<Token> toks_;
  std::size_t at_ = 0;
  int order_;
  Ambient amb_;

  const Token& peek() const { return toks_[at_]; }
  const Token& next() { return toks_[at_++]; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++at_;
    return true;
  }
  const Token& expect(Tok k, const std::string& what) {
    if (peek().kind != k)
      throw ParseError(peek().pos, "expected " + what + ", found '" +
                                       (peek().kind == Tok::End ? std::string("end of input")
                                                                : peek().text) +
                                       "'");
    return next();
  }

  long integer(const std::string& what) {
    bool neg = accept(Tok::Minus);
    const Token& t = expect(Tok::Number, what);
    long v = std::stol(t.text);
    return neg ? -v : v;
  }

  HopfElement expr() {
    HopfElement e = term();
    for (;;) {
      if (accept(Tok::Plus)) e = e + term();
      else if (accept(Tok::Minus)) e = e - term();
      else return e;
    }
  }

  HopfElement term() {
    bool neg = accept(Tok::Minus);
    HopfElement e = factor();
    if (neg) e = e.scaled(-Cyclo::one(order_));
    while (accept(Tok::Star)) e = e * factor();
    return e;
  }

  HopfElement factor() {
    const Token& t = peek();
    if (t.kind == Tok::LParen) {
      next();
      HopfElement e = expr();
      expect(Tok::RParen, "')'");
      return e;
    }
    if (t.kind == Tok::Number) return scalar();
    if (t.kind == Tok::Ident) {
      if (t.text == "eps") return scalar();
      return generator_factor();
    }
    throw ParseError(t.pos, "expected a generator, scalar, or '('");
  }

  // rational or rational 'eps^k' (the '*' between them is consumed by term())
  HopfElement scalar() {
    Cyclo c = Cyclo::one(order_);
    if (peek().kind == Tok::Number) {
      const Token& p = next();
      Rational r(p.text);
      if (accept(Tok::Slash)) {
        const Token& q = expect(Tok::Number, "a denominator");
        Rational d(q.text);
        if (d == 0) throw ParseError(q.pos, "zero denominator");
        r /= d;
      }
      c = Cyclo(order_, r);
    } else {
      next();  // 'eps'
      long k = 1;
      if (accept(Tok::Caret)) k = integer("an exponent");
      if (k < 0) throw ParseError(peek().pos, "negative twist-root exponent");
      c = Cyclo::eps_pow(order_, k);
    }
    return HopfElement::unit(order_, amb_).scaled(c);
  }

  // prefix* (phi | psi | h | e{m})
  HopfElement generator_factor() {
    struct Prefix {
      bool isD;
      int arg;
      std::size_t pos;
    };
    std::vector<Prefix> prefixes;
    for (;;) {
      const Token& t = peek();
      if (t.kind != Tok::Ident) break;
      if (t.text == "D") {
        next();
        expect(Tok::Caret, "'^' after D");
        expect(Tok::LParen, "'(' in D^(n)");
        long n = integer("a derivation degree");
        expect(Tok::RParen, "')' in D^(n)");
        if (n < 0) throw ParseError(t.pos, "negative derivation degree");
        prefixes.push_back({true, static_cast<int>(n), t.pos});
      } else if (t.text == "T") {
        next();
        long k = 1;
        if (accept(Tok::Caret)) k = integer("a twist power");
        if (k < 0 || k >= order_)
          throw ParseError(t.pos, "twist power must lie in 0.." + std::to_string(order_ - 1) +
                                      " for order " + std::to_string(order_));
        prefixes.push_back({false, static_cast<int>(k), t.pos});
      } else {
        break;
      }
    }
    const Token& a = peek();
    if (a.kind != Tok::Ident)
      throw ParseError(a.pos, "expected a generator after the operator prefix");
    HopfElement e(order_, amb_);
    bool lattice_atom = false;
    if (a.text == "phi" || a.text == "psi" || a.text == "h") {
      BaseSym b = a.text == "phi" ? BaseSym::Phi : a.text == "psi" ? BaseSym::Psi : BaseSym::H;
      if (!symbol_allowed(b))
        throw ParseError(a.pos, "symbol '" + a.text + "' is not part of this ambient");
      next();
      e = HopfElement::generator(order_, amb_, Generator{b, 0, 0});
    } else if (a.text == "e") {
      if (!is_lattice(amb_))
        throw ParseError(a.pos, "lattice symbol 'e' is not part of this ambient");
      next();
      expect(Tok::LBrace, "'{' after e");
      long m = integer("a lattice charge");
      expect(Tok::RBrace, "'}' after the lattice charge");
      e = HopfElement::lattice(order_, amb_, static_cast<int>(m), 0);
      lattice_atom = true;
    } else {
      throw ParseError(a.pos, "unknown symbol '" + a.text + "'");
    }
    // fold the operator prefixes innermost (rightmost) first
    for (auto it = prefixes.rbegin(); it != prefixes.rend(); ++it) {
      if (it->isD) {
        if (lattice_atom)
          throw ParseError(it->pos, "the derivation D does not act on lattice grouplikes");
        e = act(e, it->arg, 0);
      } else {
        e = act(e, 0, it->arg);
      }
    }
    return e;
  }

  bool symbol_allowed(BaseSym b) const {
    switch (amb_) {
      case Ambient::FreePhi: return b == BaseSym::Phi;
      case Ambient::FreePhiPsi: return b == BaseSym::Phi || b == BaseSym::Psi;
      case Ambient::Boson: return b == BaseSym::H;
      case Ambient::Lattice:
      case Ambient::LatticeB:
      case Ambient::LatticeD: return b == BaseSym::H;
    }
    return false;
  }
};

}  // namespace detail_ps

inline HopfElement parse_expr(const std::string& text, int order, Ambient amb) {
  return detail_ps::Parser(text, order, amb).run();
}

}  // namespace tva
