#include "slg/sexpr.hpp"

namespace slg {

const Token& Lexer::peek() {
  if (!have_lookahead_) {
    lookahead_ = lex();
    have_lookahead_ = true;
  }
  return lookahead_;
}

Token Lexer::next() {
  peek();
  have_lookahead_ = false;
  return lookahead_;
}

Token Lexer::expect(Token::Kind kind, const std::string& what) {
  Token t = next();
  if (t.kind != kind)
    throw ParseError("expected " + what + ", got '" +
                         (t.kind == Token::Kind::End ? "<end>" : t.text) + "'",
                     t.line, t.col);
  return t;
}

Token Lexer::lex() {
  auto advance = [&]() {
    if (pos_ < input_.size() && input_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  };

  // Skip whitespace and comments.
  while (pos_ < input_.size()) {
    char c = input_[pos_];
    if (c == '#') {
      while (pos_ < input_.size() && input_[pos_] != '\n') advance();
    } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance();
    } else {
      break;
    }
  }

  Token t;
  t.line = line_;
  t.col = col_;
  if (pos_ >= input_.size()) {
    t.kind = Token::Kind::End;
    return t;
  }

  char c = input_[pos_];
  if (c == '(') {
    advance();
    t.kind = Token::Kind::LParen;
    t.text = "(";
    return t;
  }
  if (c == ')') {
    advance();
    t.kind = Token::Kind::RParen;
    t.text = ")";
    return t;
  }
  if (c == '"') {
    advance();
    std::string s;
    while (pos_ < input_.size() && input_[pos_] != '"') {
      if (input_[pos_] == '\\' && pos_ + 1 < input_.size()) {
        advance();
        s += input_[pos_];
        advance();
      } else if (input_[pos_] == '\n') {
        throw ParseError("unterminated string", t.line, t.col);
      } else {
        s += input_[pos_];
        advance();
      }
    }
    if (pos_ >= input_.size()) throw ParseError("unterminated string", t.line, t.col);
    advance();  // closing quote
    t.kind = Token::Kind::String;
    t.text = s;
    return t;
  }

  std::string s;
  while (pos_ < input_.size()) {
    char d = input_[pos_];
    if (d == '(' || d == ')' || d == '"' || d == '#' || d == ' ' || d == '\t' ||
        d == '\r' || d == '\n')
      break;
    s += d;
    advance();
  }
  t.kind = Token::Kind::Symbol;
  t.text = s;
  return t;
}

std::vector<std::pair<int, std::string>> content_lines(const std::string& text) {
  std::vector<std::pair<int, std::string>> out;
  int lineno = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    std::string line = text.substr(pos, nl == std::string::npos ? nl : nl - pos);
    ++lineno;
    // Strip comments outside quotes.
    bool in_quote = false;
    std::string kept;
    for (size_t i = 0; i < line.size(); ++i) {
      char c = line[i];
      if (c == '"' && (i == 0 || line[i - 1] != '\\')) in_quote = !in_quote;
      if (c == '#' && !in_quote) break;
      kept += c;
    }
    size_t b = kept.find_first_not_of(" \t\r");
    size_t e = kept.find_last_not_of(" \t\r");
    if (b != std::string::npos) out.emplace_back(lineno, kept.substr(b, e - b + 1));
    if (nl == std::string::npos) break;
    pos = nl + 1;
  }
  return out;
}

std::string quote_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace slg
