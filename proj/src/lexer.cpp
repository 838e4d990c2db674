#include "nestcalc/lexer.hpp"

namespace nestcalc {

namespace {

bool ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
bool ident_char(char c) {
  return ident_start(c) || (c >= '0' && c <= '9') || c == '\'';
}

}  // namespace

Result<std::vector<Token>, ParseError> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto loc = [&] { return Loc{line, col}; };
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n; ++k) {
      if (src[i + k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    i += n;
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '-' && i + 1 < src.size() && src[i + 1] == '-') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Loc l = loc();
    if (ident_start(c)) {
      size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      out.push_back({TokKind::Ident, src.substr(i, j - i), l});
      advance(j - i);
      continue;
    }
    if (c >= '0' && c <= '9') {
      size_t j = i;
      while (j < src.size() && src[j] >= '0' && src[j] <= '9') ++j;
      out.push_back({TokKind::Number, src.substr(i, j - i), l});
      advance(j - i);
      continue;
    }
    if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
      out.push_back({TokKind::Arrow, "->", l});
      advance(2);
      continue;
    }
    static const std::string singles = "()[]{},;.:=^+*\\";
    if (singles.find(c) != std::string::npos) {
      TokKind k;
      switch (c) {
        case '(': k = TokKind::LParen; break;
        case ')': k = TokKind::RParen; break;
        case '[': k = TokKind::LBracket; break;
        case ']': k = TokKind::RBracket; break;
        case '{': k = TokKind::LBrace; break;
        case '}': k = TokKind::RBrace; break;
        case ',': k = TokKind::Comma; break;
        case ';': k = TokKind::Semi; break;
        case '.': k = TokKind::Dot; break;
        case ':': k = TokKind::Colon; break;
        case '=': k = TokKind::Equals; break;
        case '^': k = TokKind::Caret; break;
        case '+': k = TokKind::Plus; break;
        case '*': k = TokKind::Star; break;
        default: k = TokKind::Backslash; break;
      }
      out.push_back({k, std::string(1, c), l});
      advance(1);
      continue;
    }
    return ParseError{l, std::string("unexpected character '") + c + "'"};
  }
  out.push_back({TokKind::End, "", loc()});
  return out;
}

}  // namespace nestcalc
