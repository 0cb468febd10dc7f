#ifndef HARDYOP_DSL_HPP
#define HARDYOP_DSL_HPP

// Symbol text format.
//
//   expr    := sum ('@' sum)*                  composition f @ g = f o g
//   sum     := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary | unary)*   juxtaposition multiplies
//   unary   := ('+' | '-') unary | power
//   power   := primary ('^' uint)?
//   primary := number ['i'] | 'i' | 'z' | '(' expr ')'
//            | 'alpha' '(' expr ')' | 'const' '(' expr ')'
//            | 'blaschke' '(' expr (',' expr)* ')' | 'iter' '(' expr ',' uint ')'
//
// Arguments of alpha/const/blaschke must evaluate to constants.

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <string>
#include <string_view>

#include "hardyop/errors.hpp"
#include "hardyop/symbol.hpp"

namespace hardyop {

namespace detail {

class SymbolParser {
 public:
  explicit SymbolParser(std::string_view text) : text_(text) {}

  Symbol parse() {
    Symbol s = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return s;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  bool accept(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  bool starts_primary() {
    const char c = peek();
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '(' ||
           std::isalpha(static_cast<unsigned char>(c));
  }

  Symbol expr() {
    Symbol s = sum();
    while (accept('@')) {
      const std::size_t at = pos_;
      Symbol rhs = sum();
      try {
        s = compose(s, rhs);
      } catch (const SelfmapError& e) {
        throw ParseError(e.what(), at);
      }
    }
    return s;
  }

  Symbol sum() {
    Symbol s = term();
    for (;;) {
      if (accept('+')) {
        s = s + term();
      } else if (accept('-')) {
        s = s - term();
      } else {
        return s;
      }
    }
  }

  Symbol term() {
    Symbol s = unary();
    for (;;) {
      if (accept('*')) {
        s = s * unary();
      } else if (accept('/')) {
        const std::size_t at = pos_;
        Symbol d = unary();
        if (poly::is_zero(d.num())) throw ParseError("division by zero", at);
        s = s / d;
      } else if (starts_primary()) {
        s = s * unary();
      } else {
        return s;
      }
    }
  }

  Symbol unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Symbol power() {
    Symbol base = primary();
    if (accept('^')) {
      const unsigned e = uint_literal();
      return base.pow(e);
    }
    return base;
  }

  unsigned uint_literal() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a nonnegative integer");
    unsigned v = 0;
    const auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, v);
    if (ec != std::errc{} || v > 1000000U) {
      pos_ = start;
      fail("integer out of range");
    }
    return v;
  }

  std::string identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  double number() {
    const std::size_t start = pos_;
    const auto digits = [&] {
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      const std::size_t exp_start = pos_;
      digits();
      if (exp_start == pos_) pos_ = save;
    }
    const std::string lit(text_.substr(start, pos_ - start));
    if (lit == "." || lit.empty()) {
      pos_ = start;
      fail("malformed number");
    }
    char* end = nullptr;
    const double v = std::strtod(lit.c_str(), &end);
    if (end != lit.c_str() + lit.size()) {
      pos_ = start;
      fail("malformed number");
    }
    return v;
  }

  cplx constant_arg(const char* fn) {
    const std::size_t at = pos_;
    Symbol a = expr();
    if (!a.is_constant()) throw ParseError(std::string(fn) + " argument must be a constant", at);
    return a.num()[0];
  }

  Symbol primary() {
    const char c = peek();
    if (c == '(') {
      ++pos_;
      Symbol s = expr();
      expect(')');
      return s;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const double v = number();
      // imaginary suffix: a lone 'i' glued to the literal
      if (pos_ < text_.size() && text_[pos_] == 'i' &&
          (pos_ + 1 == text_.size() || !std::isalpha(static_cast<unsigned char>(text_[pos_ + 1])))) {
        ++pos_;
        return Symbol::constant(cplx{0.0, v});
      }
      return Symbol::constant(cplx{v, 0.0});
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t at = pos_;
      const std::string id = identifier();
      if (id == "z") return Symbol::identity();
      if (id == "i") return Symbol::constant(cplx{0.0, 1.0});
      if (id == "alpha") {
        expect('(');
        const cplx p = constant_arg("alpha");
        expect(')');
        if (std::abs(p) >= 1.0) throw ParseError("alpha(p) needs |p| < 1", at);
        return Symbol::alpha(p);
      }
      if (id == "const") {
        expect('(');
        const cplx p = constant_arg("const");
        expect(')');
        return Symbol::constant(p);
      }
      if (id == "blaschke") {
        expect('(');
        Symbol b = Symbol::constant(cplx{1.0});
        do {
          const std::size_t arg_at = pos_;
          const cplx p = constant_arg("blaschke");
          if (std::abs(p) >= 1.0) throw ParseError("blaschke zeros must lie in the open disk", arg_at);
          b = b * Symbol::alpha(p);
        } while (accept(','));
        expect(')');
        return Symbol(b.num(), b.den(), true);
      }
      if (id == "iter") {
        expect('(');
        Symbol f = expr();
        expect(',');
        const std::size_t n_at = pos_;
        const unsigned n = uint_literal();
        expect(')');
        if (n == 0) throw ParseError("iter count must be >= 1", n_at);
        try {
          return iterate(f, n);
        } catch (const SelfmapError& e) {
          throw ParseError(e.what(), at);
        }
      }
      pos_ = at;
      fail("unknown identifier '" + id + "'");
    }
    if (c == '\0') fail("unexpected end of input");
    fail("unexpected '" + std::string(1, c) + "'");
  }
};

}  // namespace detail

/// Parses symbol text. Throws ParseError (with position), DenominatorError or DegreeError.
inline Symbol parse_symbol(std::string_view text) { return detail::SymbolParser(text).parse(); }

}  // namespace hardyop

#endif  // HARDYOP_DSL_HPP
