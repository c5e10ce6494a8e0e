#include "pragproof/n3/parser.hpp"

#include <cctype>
#include <set>
#include <vector>

namespace pragproof::n3 {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

namespace {

enum class Tok {
  IriRef,
  PName,
  BlankLabel,
  Universal,
  String,
  Integer,
  Decimal,
  Double,
  Dot,
  Semicolon,
  Comma,
  LBracket,
  RBracket,
  LParen,
  RParen,
  LBrace,
  RBrace,
  Implies,
  Carets,
  KwPrefix,
  KwBase,
  KwA,
  KwTrue,
  KwFalse,
  End,
};

struct Token {
  Tok kind;
  std::string text;   // decoded value: IRI, string contents, label, number lexical form
  std::string local;  // local part of a prefixed name; `text` holds the prefix
  std::size_t line;
  std::size_t column;
};

bool is_pn_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || static_cast<unsigned char>(c) >= 0x80; }

bool is_pn_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || static_cast<unsigned char>(c) >= 0x80;
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t = next();
      bool end = t.kind == Tok::End;
      out.push_back(std::move(t));
      if (end) return out;
    }
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;

  char peek(std::size_t ahead = 0) const { return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0'; }
  bool at_end() const { return pos_ >= text_.size(); }

  char advance() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  [[noreturn]] void fail(std::size_t line, std::size_t col, const std::string& msg) const {
    throw ParseError(line, col, msg);
  }

  void skip_space() {
    while (!at_end()) {
      char c = peek();
      if (c == '#') {
        while (!at_end() && peek() != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }

  Token make(Tok kind, std::size_t line, std::size_t col, std::string text = {}) {
    return Token{kind, std::move(text), {}, line, col};
  }

  Token next() {
    std::size_t line = line_, col = col_;
    if (at_end()) return make(Tok::End, line, col);
    char c = peek();
    switch (c) {
      case '.':
        if (std::isdigit(static_cast<unsigned char>(peek(1)))) return number(line, col);
        advance();
        return make(Tok::Dot, line, col, ".");
      case ';': advance(); return make(Tok::Semicolon, line, col, ";");
      case ',': advance(); return make(Tok::Comma, line, col, ",");
      case '[': advance(); return make(Tok::LBracket, line, col, "[");
      case ']': advance(); return make(Tok::RBracket, line, col, "]");
      case '(': advance(); return make(Tok::LParen, line, col, "(");
      case ')': advance(); return make(Tok::RParen, line, col, ")");
      case '{': advance(); return make(Tok::LBrace, line, col, "{");
      case '}': advance(); return make(Tok::RBrace, line, col, "}");
      case '<': return iri(line, col);
      case '"':
      case '\'':
        return string_literal(line, col);
      case '?': return variable(line, col);
      case '@': return at_keyword(line, col);
      default: break;
    }
    if (c == '=' && peek(1) == '>') {
      advance();
      advance();
      return make(Tok::Implies, line, col, "=>");
    }
    if (c == '^' && peek(1) == '^') {
      advance();
      advance();
      return make(Tok::Carets, line, col, "^^");
    }
    if (c == '_' && peek(1) == ':') return blank_label(line, col);
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '+' || c == '-') return number(line, col);
    if (c == ':' || is_pn_start(c)) return name(line, col);
    fail(line, col, std::string("unexpected character '") + c + "'");
  }

  Token iri(std::size_t line, std::size_t col) {
    advance();
    std::string value;
    for (;;) {
      if (at_end()) fail(line, col, "unterminated IRI");
      char c = advance();
      if (c == '>') break;
      if (c == '\\') {
        value += unicode_escape(line, col);
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c)) || c == '<' || c == '"') {
        fail(line, col, std::string("invalid character in IRI: '") + c + "'");
      }
      value += c;
    }
    return make(Tok::IriRef, line, col, std::move(value));
  }

  std::string unicode_escape(std::size_t line, std::size_t col) {
    char kind = at_end() ? '\0' : advance();
    std::size_t digits = kind == 'u' ? 4 : kind == 'U' ? 8 : 0;
    if (digits == 0) fail(line, col, std::string("invalid escape '\\") + kind + "'");
    std::uint32_t cp = 0;
    for (std::size_t i = 0; i < digits; ++i) {
      char h = at_end() ? '\0' : advance();
      if (!std::isxdigit(static_cast<unsigned char>(h))) fail(line, col, "invalid unicode escape");
      cp = cp * 16 + static_cast<std::uint32_t>(std::isdigit(static_cast<unsigned char>(h)) ? h - '0' : std::tolower(h) - 'a' + 10);
    }
    std::string out;
    append_utf8(out, cp);
    return out;
  }

  Token string_literal(std::size_t line, std::size_t col) {
    char quote = advance();
    bool long_form = peek() == quote && peek(1) == quote;
    if (long_form) {
      advance();
      advance();
    }
    std::string value;
    for (;;) {
      if (at_end()) fail(line, col, "unterminated string literal");
      char c = peek();
      if (long_form) {
        if (c == quote && peek(1) == quote && peek(2) == quote) {
          advance();
          advance();
          advance();
          break;
        }
      } else {
        if (c == quote) {
          advance();
          break;
        }
        if (c == '\n') fail(line, col, "unterminated string literal");
      }
      advance();
      if (c != '\\') {
        value += c;
        continue;
      }
      if (at_end()) fail(line, col, "unterminated string literal");
      char e = peek();
      switch (e) {
        case 't': advance(); value += '\t'; break;
        case 'n': advance(); value += '\n'; break;
        case 'r': advance(); value += '\r'; break;
        case 'b': advance(); value += '\b'; break;
        case 'f': advance(); value += '\f'; break;
        case '"': advance(); value += '"'; break;
        case '\'': advance(); value += '\''; break;
        case '\\': advance(); value += '\\'; break;
        case 'u':
        case 'U':
          value += unicode_escape(line, col);
          break;
        default:
          fail(line_, col_, std::string("invalid escape '\\") + e + "'");
      }
    }
    if (peek() == '@' && std::isalpha(static_cast<unsigned char>(peek(1)))) {
      fail(line_, col_, "language tags are not supported");
    }
    return make(Tok::String, line, col, std::move(value));
  }

  Token variable(std::size_t line, std::size_t col) {
    advance();
    std::string name;
    while (is_pn_char(peek())) name += advance();
    if (name.empty()) fail(line, col, "empty variable name after '?'");
    return make(Tok::Universal, line, col, std::move(name));
  }

  Token blank_label(std::size_t line, std::size_t col) {
    advance();
    advance();
    std::string name;
    while (is_pn_char(peek()) || (peek() == '.' && is_pn_char(peek(1)))) name += advance();
    if (name.empty()) fail(line, col, "empty blank node label");
    return make(Tok::BlankLabel, line, col, std::move(name));
  }

  Token at_keyword(std::size_t line, std::size_t col) {
    advance();
    std::string word;
    while (std::isalpha(static_cast<unsigned char>(peek()))) word += advance();
    if (word == "prefix") return make(Tok::KwPrefix, line, col, "@prefix");
    if (word == "base") return make(Tok::KwBase, line, col, "@base");
    fail(line, col, "unsupported keyword '@" + word + "'");
  }

  Token number(std::size_t line, std::size_t col) {
    std::string lex;
    if (peek() == '+' || peek() == '-') lex += advance();
    while (std::isdigit(static_cast<unsigned char>(peek()))) lex += advance();
    Tok kind = Tok::Integer;
    if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      kind = Tok::Decimal;
      lex += advance();
      while (std::isdigit(static_cast<unsigned char>(peek()))) lex += advance();
    }
    if (peek() == 'e' || peek() == 'E') {
      std::size_t save_pos = pos_, save_line = line_, save_col = col_;
      std::string exp(1, advance());
      if (peek() == '+' || peek() == '-') exp += advance();
      if (std::isdigit(static_cast<unsigned char>(peek()))) {
        while (std::isdigit(static_cast<unsigned char>(peek()))) exp += advance();
        lex += exp;
        kind = Tok::Double;
      } else {
        pos_ = save_pos;
        line_ = save_line;
        col_ = save_col;
      }
    }
    bool has_digit = false;
    for (char c : lex) has_digit = has_digit || std::isdigit(static_cast<unsigned char>(c));
    if (!has_digit) fail(line, col, "malformed number '" + lex + "'");
    return make(kind, line, col, std::move(lex));
  }

  Token name(std::size_t line, std::size_t col) {
    std::string prefix;
    if (peek() != ':') {
      prefix += advance();
      while (is_pn_char(peek()) || (peek() == '.' && is_pn_char(peek(1)))) prefix += advance();
    }
    if (peek() != ':') {
      if (prefix == "a") return make(Tok::KwA, line, col, "a");
      if (prefix == "true") return make(Tok::KwTrue, line, col, "true");
      if (prefix == "false") return make(Tok::KwFalse, line, col, "false");
      if (prefix == "PREFIX") return make(Tok::KwPrefix, line, col, "PREFIX");
      if (prefix == "BASE") return make(Tok::KwBase, line, col, "BASE");
      fail(line, col, "unexpected bare word '" + prefix + "'");
    }
    advance();
    std::string local;
    for (;;) {
      char c = peek();
      if (is_pn_char(c) || c == ':' || c == '%') {
        local += advance();
      } else if (c == '.' && (is_pn_char(peek(1)) || peek(1) == ':' || peek(1) == '%')) {
        local += advance();
      } else if (c == '\\' && peek(1) != '\0') {
        advance();
        local += advance();
      } else {
        break;
      }
    }
    Token t = make(Tok::PName, line, col, std::move(prefix));
    t.local = std::move(local);
    return t;
  }
};

bool has_scheme(const std::string& iri) {
  for (char c : iri) {
    if (c == ':') return true;
    if (c == '/' || c == '?' || c == '#') return false;
  }
  return false;
}

std::string resolve(const std::string& base, const std::string& iri) {
  if (has_scheme(iri) || base.empty()) return iri;
  if (iri.empty()) return base;
  if (iri[0] == '#') return base.substr(0, base.find('#')) + iri;
  if (iri[0] == '/') {
    auto scheme_end = base.find("://");
    if (scheme_end == std::string::npos) return iri;
    auto path_start = base.find('/', scheme_end + 3);
    return base.substr(0, path_start) + iri;
  }
  auto slash = base.rfind('/');
  return slash == std::string::npos ? iri : base.substr(0, slash + 1) + iri;
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::optional<std::string> base) : tokens_(std::move(tokens)) {
    if (base) doc_.base = std::move(base);
    for (const Token& t : tokens_)
      if (t.kind == Tok::BlankLabel) used_labels_.insert(t.text);
  }

  Document run() {
    parse_statements(doc_.body, Tok::End);
    return std::move(doc_);
  }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  Document doc_;
  std::set<std::string> used_labels_;
  std::size_t blank_counter_ = 0;

  const Token& peek() const { return tokens_[pos_]; }
  const Token& take() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const Token& at, const std::string& msg) const { throw ParseError(at.line, at.column, msg); }

  static std::string describe(const Token& t) {
    if (t.kind == Tok::End) return "end of input";
    if (t.kind == Tok::PName) return "'" + t.text + ":" + t.local + "'";
    if (t.kind == Tok::IriRef) return "'<" + t.text + ">'";
    if (t.kind == Tok::String) return "string \"" + t.text + "\"";
    return "'" + t.text + "'";
  }

  const Token& expect(Tok kind, const char* what) {
    if (peek().kind != kind) fail(peek(), std::string("expected ") + what + ", found " + describe(peek()));
    return take();
  }

  Term fresh_blank() {
    for (;;) {
      std::string name = "b" + std::to_string(blank_counter_++);
      if (!used_labels_.count(name)) return Term::existential(std::move(name));
    }
  }

  std::string base() const { return doc_.base.value_or(std::string{}); }

  void parse_statements(Formula& target, Tok terminator) {
    for (;;) {
      const Token& t = peek();
      if (t.kind == terminator) return;
      if (t.kind == Tok::End) fail(t, "unterminated formula: missing '}'");
      if (t.kind == Tok::KwPrefix || t.kind == Tok::KwBase) {
        directive();
        continue;
      }
      statement(target);
      if (peek().kind == Tok::Dot) {
        take();
      } else if (peek().kind != terminator) {
        fail(peek(), "expected '.', found " + describe(peek()));
      }
    }
  }

  void directive() {
    const Token& kw = take();
    bool sparql_style = kw.text == "PREFIX" || kw.text == "BASE";
    if (kw.kind == Tok::KwPrefix) {
      const Token& name = expect(Tok::PName, "prefix name");
      if (!name.local.empty()) fail(name, "malformed prefix declaration " + describe(name));
      const Token& iri = expect(Tok::IriRef, "IRI");
      doc_.prefixes[name.text] = resolve(base(), iri.text);
    } else {
      const Token& iri = expect(Tok::IriRef, "IRI");
      doc_.base = resolve(base(), iri.text);
    }
    if (!sparql_style) expect(Tok::Dot, "'.' after directive");
  }

  void statement(Formula& target) {
    std::vector<Triple> aux;
    bool bracketed = peek().kind == Tok::LBracket;
    Term subject = term(target, aux);
    target.atoms.insert(target.atoms.end(), aux.begin(), aux.end());
    if (bracketed) {
      Tok k = peek().kind;
      if (k == Tok::Dot || k == Tok::RBrace || k == Tok::End) return;
    }
    predicate_object_list(target, subject);
  }

  void predicate_object_list(Formula& target, const Term& subject) {
    for (;;) {
      verb_object_list(target, subject);
      if (peek().kind != Tok::Semicolon) return;
      while (peek().kind == Tok::Semicolon) take();
      Tok k = peek().kind;
      if (k == Tok::Dot || k == Tok::RBrace || k == Tok::RBracket || k == Tok::End) return;
    }
  }

  void verb_object_list(Formula& target, const Term& subject) {
    const Token& at = peek();
    bool implies = false;
    Term predicate;
    if (at.kind == Tok::KwA) {
      take();
      predicate = Term::uri(vocab::kRdfType);
    } else if (at.kind == Tok::Implies) {
      take();
      implies = true;
    } else {
      std::vector<Triple> aux;
      predicate = term(target, aux);
      target.atoms.insert(target.atoms.end(), aux.begin(), aux.end());
    }
    for (;;) {
      const Token& obj_at = peek();
      std::vector<Triple> aux;
      Term object = term(target, aux);
      if (implies) {
        if (!subject.is_formula_expression() || !object.is_formula_expression()) {
          fail(obj_at, "both sides of '=>' must be formulas");
        }
        target.implications.push_back({subject, object});
      } else {
        target.atoms.push_back({subject, predicate, object});
      }
      target.atoms.insert(target.atoms.end(), aux.begin(), aux.end());
      if (peek().kind != Tok::Comma) return;
      take();
    }
  }

  Term term(Formula& target, std::vector<Triple>& aux) {
    const Token& t = take();
    switch (t.kind) {
      case Tok::IriRef:
        return Term::uri(resolve(base(), t.text));
      case Tok::PName: {
        auto it = doc_.prefixes.find(t.text);
        if (it == doc_.prefixes.end()) fail(t, "unresolved prefix '" + t.text + ":'");
        return Term::uri(it->second + t.local);
      }
      case Tok::BlankLabel:
        return Term::existential(t.text);
      case Tok::Universal:
        return Term::universal(t.text);
      case Tok::String: {
        std::string datatype;
        if (peek().kind == Tok::Carets) {
          take();
          std::vector<Triple> ignored;
          const Token& dt_at = peek();
          if (dt_at.kind != Tok::IriRef && dt_at.kind != Tok::PName) fail(dt_at, "expected datatype IRI after '^^'");
          datatype = term(target, ignored).text();
        }
        return Term::literal(t.text, std::move(datatype));
      }
      case Tok::Integer:
        return Term::literal(t.text, vocab::kXsdInteger);
      case Tok::Decimal:
        return Term::literal(t.text, vocab::kXsdDecimal);
      case Tok::Double:
        return Term::literal(t.text, vocab::kXsdDouble);
      case Tok::KwTrue:
        return Term::literal("true", vocab::kXsdBoolean);
      case Tok::KwFalse:
        return Term::falsum();
      case Tok::LBracket: {
        Term node = fresh_blank();
        if (peek().kind == Tok::RBracket) {
          take();
          return node;
        }
        Formula inner;
        predicate_object_list(inner, node);
        if (peek().kind != Tok::RBracket) fail(peek(), "unterminated blank node: expected ']', found " + describe(peek()));
        take();
        aux.insert(aux.end(), inner.atoms.begin(), inner.atoms.end());
        if (!inner.implications.empty()) fail(t, "implication inside a blank node property list");
        return node;
      }
      case Tok::LParen: {
        std::vector<Term> items;
        for (;;) {
          if (peek().kind == Tok::RParen) {
            take();
            return Term::list(std::move(items));
          }
          if (peek().kind == Tok::End) fail(t, "unterminated list");
          items.push_back(term(target, aux));
        }
      }
      case Tok::LBrace: {
        Formula inner;
        parse_statements(inner, Tok::RBrace);
        take();
        return Term::graph(std::move(inner));
      }
      default:
        fail(t, "unexpected " + describe(t));
    }
  }
};

}  // namespace

Document parse_document(std::string_view text, std::optional<std::string> base) {
  Lexer lexer(text);
  Parser parser(lexer.run(), std::move(base));
  return parser.run();
}

Formula parse_formula(std::string_view text) { return parse_document(text).body; }

}  // namespace pragproof::n3
