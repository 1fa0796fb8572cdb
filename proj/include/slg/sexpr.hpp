#ifndef SLG_SEXPR_HPP
#define SLG_SEXPR_HPP

#include <string>
#include <vector>

#include "slg/errors.hpp"

namespace slg {

// Token stream over the bracketed-text formats (grammar structures,
// derivation corpora, derived-tree corpora). '#' starts a comment that runs
// to end of line. Quoted strings support \" and \\ escapes.
struct Token {
  enum class Kind { LParen, RParen, Symbol, String, End };
  Kind kind = Kind::End;
  std::string text;  // symbol spelling or unescaped string content
  int line = 0;
  int col = 0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& input, int first_line = 1)
      : input_(input), line_(first_line) {}

  const Token& peek();
  Token next();
  // Throws ParseError unless the next token has the given kind.
  Token expect(Token::Kind kind, const std::string& what);
  bool at_end() { return peek().kind == Token::Kind::End; }
  int line() const { return line_; }

  [[noreturn]] void fail(const std::string& msg, const Token& at) const {
    throw ParseError(msg, at.line, at.col);
  }

 private:
  Token lex();
  const std::string& input_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token lookahead_;
  bool have_lookahead_ = false;
};

// Splits text into logical lines, dropping blank lines and '#' comments.
// Returned pairs are (1-based line number, content).
std::vector<std::pair<int, std::string>> content_lines(const std::string& text);

std::string quote_string(const std::string& s);

}  // namespace slg

#endif  // SLG_SEXPR_HPP
