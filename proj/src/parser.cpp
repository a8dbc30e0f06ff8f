#include <cctype>
#include <charconv>
#include <cmath>

#include "qmu/formula.hpp"

namespace qmu {

namespace {

enum class Tok {
  End, Ident, Number, Mu, Nu, Dot, Or, And, Diamond, Box, Star, Tilde, Bar, Minus, LParen, RParen
};

struct Token {
  Tok kind;
  std::string text;
  double number = 0.0;
  std::size_t pos = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) {}

  Token next() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    std::size_t start = i_;
    if (i_ >= s_.size()) return {Tok::End, "", 0, start};
    char c = s_[i_];
    auto two = [&](char a, char b) {
      return c == a && i_ + 1 < s_.size() && s_[i_ + 1] == b;
    };
    if (two('<', '>')) { i_ += 2; return {Tok::Diamond, "<>", 0, start}; }
    if (two('[', ']')) { i_ += 2; return {Tok::Box, "[]", 0, start}; }
    if (two('\\', '/')) { i_ += 2; return {Tok::Or, "\\/", 0, start}; }
    if (two('/', '\\')) { i_ += 2; return {Tok::And, "/\\", 0, start}; }
    switch (c) {
      case '.': ++i_; return {Tok::Dot, ".", 0, start};
      case '*': ++i_; return {Tok::Star, "*", 0, start};
      case '~': ++i_; return {Tok::Tilde, "~", 0, start};
      case '|': ++i_; return {Tok::Bar, "|", 0, start};
      case '-': ++i_; return {Tok::Minus, "-", 0, start};
      case '(': ++i_; return {Tok::LParen, "(", 0, start};
      case ')': ++i_; return {Tok::RParen, ")", 0, start};
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return number(start);
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) {
        ++i_;
      }
      std::string word(s_.substr(start, i_ - start));
      if (word == "mu") return {Tok::Mu, word, 0, start};
      if (word == "nu") return {Tok::Nu, word, 0, start};
      return {Tok::Ident, word, 0, start};
    }
    throw ParseError(std::string("unexpected character '") + c + "'", start);
  }

 private:
  Token number(std::size_t start) {
    auto digits = [&] {
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    };
    digits();
    // A '.' only continues the number when a digit follows; "X." never reaches here.
    if (i_ + 1 < s_.size() && s_[i_] == '.' && std::isdigit(static_cast<unsigned char>(s_[i_ + 1]))) {
      ++i_;
      digits();
    }
    if (i_ < s_.size() && (s_[i_] == 'e' || s_[i_] == 'E')) {
      std::size_t j = i_ + 1;
      if (j < s_.size() && (s_[j] == '+' || s_[j] == '-')) ++j;
      if (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) {
        i_ = j;
        digits();
      }
    }
    double v = 0.0;
    auto res = std::from_chars(s_.data() + start, s_.data() + i_, v);
    if (res.ec != std::errc() || std::isinf(v)) throw ParseError("invalid number", start);
    return {Tok::Number, std::string(s_.substr(start, i_ - start)), v, start};
  }

  std::string_view s_;
  std::size_t i_ = 0;
};

class Parser {
 public:
  explicit Parser(std::string_view s) : lex_(s) { advance(); }

  Formula parse_all() {
    Formula f = formula();
    if (cur_.kind != Tok::End) throw ParseError("unexpected '" + cur_.text + "'", cur_.pos);
    for (const auto& v : free_vars(f)) {
      if (bound_.contains(v)) {
        throw ParseError("variable " + v + " occurs both free and bound", 0);
      }
    }
    return f;
  }

 private:
  void advance() { cur_ = lex_.next(); }

  Token expect(Tok kind, const char* what) {
    if (cur_.kind != kind) {
      throw ParseError(std::string("expected ") + what +
                           (cur_.kind == Tok::End ? " but reached end of input"
                                                  : " but found '" + cur_.text + "'"),
                       cur_.pos);
    }
    Token t = cur_;
    advance();
    return t;
  }

  Formula formula() {
    if (cur_.kind == Tok::Mu || cur_.kind == Tok::Nu) return fixpoint();
    return disj();
  }

  Formula fixpoint() {
    Op op = cur_.kind == Tok::Mu ? Op::Mu : Op::Nu;
    advance();
    Token var = expect(Tok::Ident, "a variable after the fixpoint binder");
    if (!bound_.insert(var.text).second) {
      throw ParseError("variable " + var.text + " bound twice", var.pos);
    }
    expect(Tok::Dot, "'.'");
    return Formula::fixpoint(op, var.text, formula());
  }

  Formula disj() {
    Formula f = conj();
    while (cur_.kind == Tok::Or) {
      advance();
      f = Formula::disj(f, conj());
    }
    return f;
  }

  Formula conj() {
    Formula f = unary();
    while (cur_.kind == Tok::And) {
      advance();
      f = Formula::conj(f, unary());
    }
    return f;
  }

  Formula unary() {
    switch (cur_.kind) {
      case Tok::Diamond: advance(); return Formula::diamond(unary());
      case Tok::Box: advance(); return Formula::box(unary());
      case Tok::Tilde: advance(); return Formula::negate(unary());
      case Tok::Mu:
      case Tok::Nu: return fixpoint();
      case Tok::Number: {
        Token n = cur_;
        advance();
        expect(Tok::Star, "'*' after a discount factor");
        if (!(n.number > 0.0)) throw ParseError("discount factor must be positive", n.pos);
        return Formula::scale(n.number, unary());
      }
      default: return atom();
    }
  }

  Formula atom() {
    switch (cur_.kind) {
      case Tok::Bar: {
        advance();
        Token name = expect(Tok::Ident, "a predicate name");
        expect(Tok::Minus, "'-'");
        if (cur_.kind == Tok::Minus) throw ParseError("negative constant", cur_.pos);
        Token c = expect(Tok::Number, "a constant");
        expect(Tok::Bar, "'|'");
        return Formula::pred(name.text, c.number);
      }
      case Tok::Ident: {
        Token t = cur_;
        advance();
        return Formula::var(t.text);
      }
      case Tok::LParen: {
        advance();
        Formula f = formula();
        expect(Tok::RParen, "')'");
        return f;
      }
      case Tok::End:
        throw ParseError("unexpected end of input", cur_.pos);
      default:
        throw ParseError("unexpected '" + cur_.text + "'", cur_.pos);
    }
  }

  Lexer lex_;
  Token cur_{Tok::End, "", 0, 0};
  std::set<std::string> bound_;
};

// Precedence levels: 0 formula (fixpoints), 1 disjunction, 2 conjunction, 3 unary.
int level_of(Op op) {
  switch (op) {
    case Op::Mu:
    case Op::Nu: return 0;
    case Op::Or: return 1;
    case Op::And: return 2;
    default: return 3;
  }
}

void print_to(const Formula& f, int ctx, std::string& out) {
  bool parens = level_of(f.op()) < ctx;
  if (parens) out += '(';
  switch (f.op()) {
    case Op::Pred:
      out += '|';
      out += f.name();
      out += " - ";
      out += format_number(f.number());
      out += '|';
      break;
    case Op::Var:
      out += f.name();
      break;
    case Op::Or:
      print_to(f.left(), 1, out);
      out += " \\/ ";
      print_to(f.right(), 2, out);
      break;
    case Op::And:
      print_to(f.left(), 2, out);
      out += " /\\ ";
      print_to(f.right(), 3, out);
      break;
    case Op::Diamond:
      out += "<>";
      print_to(f.child(), 3, out);
      break;
    case Op::Box:
      out += "[]";
      print_to(f.child(), 3, out);
      break;
    case Op::Not:
      out += '~';
      print_to(f.child(), 3, out);
      break;
    case Op::Scale:
      out += format_number(f.number());
      out += " * ";
      print_to(f.child(), 3, out);
      break;
    case Op::Mu:
    case Op::Nu:
      out += f.op() == Op::Mu ? "mu " : "nu ";
      out += f.name();
      out += ". ";
      print_to(f.body(), 0, out);
      break;
  }
  if (parens) out += ')';
}

}  // namespace

Formula parse(std::string_view text) { return Parser(text).parse_all(); }

std::string print(const Formula& f) {
  std::string out;
  print_to(f, 0, out);
  return out;
}

}  // namespace qmu
