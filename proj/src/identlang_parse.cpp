#include <cctype>

#include "relcalc/identlang.hpp"

namespace relcalc::ident {

namespace {

enum class Tok { Ident, LParen, RParen, Comma, Equals, Colon, Slash, Sep, End };

struct Token {
  Tok kind;
  std::string text;
  SourcePos pos;
};

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < text.size();) {
    const char c = text[i];
    const SourcePos pos{line, col};
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') {
        ++i;
        ++col;
      }
      continue;
    }
    if (c == '\n') {
      out.push_back({Tok::Sep, "\\n", pos});
      ++i;
      ++line;
      col = 1;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      ++col;
      continue;
    }
    if (std::isalnum(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isalnum(static_cast<unsigned char>(text[j]))) ++j;
      out.push_back({Tok::Ident, std::string(text.substr(i, j - i)), pos});
      col += j - i;
      i = j;
      continue;
    }
    Tok kind;
    switch (c) {
      case '(': kind = Tok::LParen; break;
      case ')': kind = Tok::RParen; break;
      case ',': kind = Tok::Comma; break;
      case '=': kind = Tok::Equals; break;
      case ':': kind = Tok::Colon; break;
      case '/': kind = Tok::Slash; break;
      case ';': kind = Tok::Sep; break;
      default:
        throw ParseError(line, col, std::string("unexpected character '") + c + "'");
    }
    out.push_back({kind, std::string(1, c), pos});
    ++i;
    ++col;
  }
  out.push_back({Tok::End, "end of input", {line, col}});
  return out;
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, const std::map<std::string, std::size_t>* decls)
      : toks_(std::move(tokens)), decls_(decls) {}

  TermSystem system() {
    TermSystem sys;
    decls_ = &sys.declarations;
    skip_seps();
    if (!(peek().kind == Tok::Ident && peek().text == "ops" && peek(1).kind == Tok::Colon)) {
      fail(peek(), "expected 'ops:' header");
    }
    next();
    next();
    if (peek().kind == Tok::Ident) {
      while (true) {
        const Token& name = expect(Tok::Ident, "operation symbol");
        expect(Tok::Slash, "'/'");
        const Token& arity = expect(Tok::Ident, "arity");
        std::size_t value = 0;
        for (char ch : arity.text) {
          if (!std::isdigit(static_cast<unsigned char>(ch))) fail(arity, "arity must be a number");
          value = value * 10 + static_cast<std::size_t>(ch - '0');
        }
        if (!sys.declarations.emplace(name.text, value).second) fail(name, "duplicate declaration of " + name.text);
        if (peek().kind != Tok::Comma) break;
        next();
      }
    }
    end_of_statement();

    bool seen_idempotent = false;
    while (true) {
      skip_seps();
      if (peek().kind == Tok::End) break;
      if (peek().kind == Tok::Ident && peek().text == "idempotent" && peek(1).kind == Tok::Colon) {
        if (seen_idempotent) fail(peek(), "duplicate 'idempotent:' line");
        seen_idempotent = true;
        next();
        next();
        while (true) {
          const Token& name = expect(Tok::Ident, "operation symbol");
          if (!sys.declarations.contains(name.text)) fail(name, "undeclared symbol " + name.text);
          sys.idempotent.insert(name.text);
          if (peek().kind != Tok::Comma) break;
          next();
        }
        end_of_statement();
        continue;
      }
      Identity id;
      id.lhs = term();
      expect(Tok::Equals, "'='");
      id.rhs = term();
      end_of_statement();
      sys.identities.push_back(std::move(id));
    }
    return sys;
  }

  Term single_term() {
    Term t = term();
    if (peek().kind != Tok::End) fail(peek(), "trailing input after term");
    return t;
  }

 private:
  Term term() {
    const Token& name = expect(Tok::Ident, "term");
    auto decl = decls_->find(name.text);
    if (peek().kind == Tok::LParen) {
      if (decl == decls_->end()) fail(name, "undeclared symbol " + name.text);
      next();
      std::vector<Term> args;
      args.push_back(term());
      while (peek().kind == Tok::Comma) {
        next();
        args.push_back(term());
      }
      expect(Tok::RParen, "')'");
      if (args.size() != decl->second) {
        fail(name, "arity mismatch: " + name.text + " expects " + std::to_string(decl->second) +
                       " arguments, got " + std::to_string(args.size()));
      }
      Term t = Term::apply(name.text, std::move(args));
      t.pos = name.pos;
      return t;
    }
    if (decl != decls_->end()) {
      if (decl->second != 0) {
        fail(name, "arity mismatch: " + name.text + " expects " + std::to_string(decl->second) +
                       " arguments, got 0");
      }
      Term t = Term::apply(name.text, {});
      t.pos = name.pos;
      return t;
    }
    Term t = Term::variable(name.text);
    t.pos = name.pos;
    return t;
  }

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  const Token& expect(Tok kind, const std::string& what) {
    if (peek().kind != kind) fail(peek(), "syntax error: expected " + what + ", found '" + peek().text + "'");
    return next();
  }
  void skip_seps() {
    while (peek().kind == Tok::Sep) next();
  }
  void end_of_statement() {
    if (peek().kind != Tok::Sep && peek().kind != Tok::End) {
      fail(peek(), "syntax error: expected end of statement, found '" + peek().text + "'");
    }
  }
  [[noreturn]] static void fail(const Token& at, const std::string& msg) {
    throw ParseError(at.pos.line, at.pos.column, msg);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const std::map<std::string, std::size_t>* decls_;
};

}  // namespace

TermSystem parse(std::string_view text) { return Parser(tokenize(text), nullptr).system(); }

Term parse_term(std::string_view text, const std::map<std::string, std::size_t>& declarations) {
  return Parser(tokenize(text), &declarations).single_term();
}

std::string to_string(const Term& t) {
  if (t.is_variable() || t.args.empty()) return t.name;
  std::string s = t.name + "(";
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    if (i) s += ",";
    s += to_string(t.args[i]);
  }
  return s + ")";
}

std::string to_string(const Identity& i) { return to_string(i.lhs) + " = " + to_string(i.rhs); }

std::string to_string(const SLLabeling& l) {
  std::string s;
  for (const auto& [symbol, subset] : l.sigma) {
    if (!s.empty()) s += ", ";
    s += symbol + "={";
    for (std::size_t i = 0; i < subset.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(subset[i]);
    }
    s += "}";
  }
  return s.empty() ? "(empty labeling)" : s;
}

std::string print(const TermSystem& sys) {
  std::string out = "ops:";
  bool first = true;
  for (const auto& [symbol, arity] : sys.declarations) {
    out += first ? " " : ", ";
    out += symbol + "/" + std::to_string(arity);
    first = false;
  }
  out += "\n";
  if (!sys.idempotent.empty()) {
    out += "idempotent:";
    first = true;
    for (const auto& s : sys.idempotent) {
      out += first ? " " : ", ";
      out += s;
      first = false;
    }
    out += "\n";
  }
  for (const auto& id : sys.identities) out += to_string(id) + "\n";
  return out;
}

}  // namespace relcalc::ident
