#include "conjorder/parser.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace conjorder {

ParseError::ParseError(const std::string& what, int line, int column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

namespace {

enum class Tok { Atom, Var, LParen, RParen, Comma, Dot, Neck, Query, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_space();
    const int line = line_, col = col_;
    if (pos_ >= src_.size()) return {Tok::End, "", line, col};
    const char c = src_[pos_];
    auto single = [&](Tok k) {
      advance();
      return Token{k, std::string(1, c), line, col};
    };
    if (c == '(') return single(Tok::LParen);
    if (c == ')') return single(Tok::RParen);
    if (c == ',') return single(Tok::Comma);
    if (c == '.') return single(Tok::Dot);
    if (c == ':' && peek(1) == '-') {
      advance();
      advance();
      return {Tok::Neck, ":-", line, col};
    }
    if (c == '?' && peek(1) == '-') {
      advance();
      advance();
      return {Tok::Query, "?-", line, col};
    }
    if (c == '\'') return quoted(line, col);
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string s;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        s += src_[pos_];
        advance();
      }
      return {Tok::Atom, s, line, col};
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string s;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        s += src_[pos_];
        advance();
      }
      const bool var = std::isupper(static_cast<unsigned char>(c)) || c == '_';
      return {var ? Tok::Var : Tok::Atom, s, line, col};
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line, col);
  }

 private:
  char peek(std::size_t k) const { return pos_ + k < src_.size() ? src_[pos_ + k] : '\0'; }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '%') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  Token quoted(int line, int col) {
    advance();
    std::string s;
    for (;;) {
      if (pos_ >= src_.size()) throw ParseError("unterminated quoted atom", line, col);
      const char c = src_[pos_];
      advance();
      if (c == '\'') {
        if (peek(0) == '\'') {
          s += '\'';
          advance();
          continue;
        }
        break;
      }
      s += c;
    }
    return {Tok::Atom, s, line, col};
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : lex_(src) { shift(); }

  const Token& peek() const { return tok_; }

  Token expect(Tok k, const char* what) {
    if (tok_.kind != k) fail(std::string("expected ") + what);
    Token t = tok_;
    shift();
    return t;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    std::string got = tok_.kind == Tok::End ? "end of input" : "'" + tok_.text + "'";
    throw ParseError(msg + ", got " + got, tok_.line, tok_.column);
  }

  Literal literal() {
    Token name = expect(Tok::Atom, "predicate name");
    Literal l{Symbol::intern(name.text), {}};
    if (tok_.kind == Tok::LParen) l.args = arguments();
    return l;
  }

  Clause clause() {
    anon_ = 0;
    Clause c{literal(), {}};
    if (tok_.kind == Tok::Neck) {
      shift();
      c.body = conjunction();
    }
    expect(Tok::Dot, "'.'");
    return c;
  }

  std::vector<Literal> conjunction() {
    std::vector<Literal> out{literal()};
    while (tok_.kind == Tok::Comma) {
      shift();
      out.push_back(literal());
    }
    return out;
  }

  void reset_anonymous() { anon_ = 0; }

 private:
  void shift() { tok_ = lex_.next(); }

  std::vector<Term> arguments() {
    expect(Tok::LParen, "'('");
    std::vector<Term> args{term()};
    while (tok_.kind == Tok::Comma) {
      shift();
      args.push_back(term());
    }
    expect(Tok::RParen, "')' or ','");
    return args;
  }

  Term term() {
    if (tok_.kind == Tok::Var) {
      std::string name = tok_.text;
      shift();
      if (name == "_") name = "_G" + std::to_string(anon_++);
      return Term::variable(Symbol::intern(name));
    }
    if (tok_.kind == Tok::Atom) {
      Symbol name = Symbol::intern(tok_.text);
      shift();
      if (tok_.kind == Tok::LParen) return Term::compound(name, arguments());
      return Term::constant(name);
    }
    fail("expected term");
  }

  Lexer lex_;
  Token tok_{Tok::End, "", 1, 1};
  int anon_ = 0;
};

}  // namespace

Program parse_program(std::string_view text) {
  Parser p(text);
  Program prog;
  while (p.peek().kind != Tok::End) prog.add(p.clause());
  return prog;
}

Literal parse_literal(std::string_view text) {
  Parser p(text);
  Literal l = p.literal();
  if (p.peek().kind == Tok::Dot) p.expect(Tok::Dot, "'.'");
  if (p.peek().kind != Tok::End) p.fail("trailing input after literal");
  return l;
}

std::vector<Literal> parse_goal(std::string_view text) {
  Parser p(text);
  if (p.peek().kind == Tok::Query) p.expect(Tok::Query, "'?-'");
  auto goal = p.conjunction();
  if (p.peek().kind == Tok::Dot) p.expect(Tok::Dot, "'.'");
  if (p.peek().kind != Tok::End) p.fail("trailing input after goal");
  return goal;
}

std::vector<std::vector<Literal>> parse_queries(std::string_view text) {
  Parser p(text);
  std::vector<std::vector<Literal>> out;
  while (p.peek().kind != Tok::End) {
    p.expect(Tok::Query, "'?-'");
    p.reset_anonymous();
    out.push_back(p.conjunction());
    p.expect(Tok::Dot, "'.'");
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace conjorder
