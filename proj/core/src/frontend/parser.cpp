#include "cpa/frontend/parser.hpp"

#include <cctype>
#include <vector>

namespace cpa::frontend {

namespace {

std::string located(SourcePos pos, const std::string& message) {
  return std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " + message;
}

}  // namespace

ParseError::ParseError(SourcePos pos, const std::string& message)
    : std::runtime_error(located(pos, message)), pos_(pos) {}

SemanticError::SemanticError(SourcePos pos, const std::string& message)
    : std::runtime_error(located(pos, message)), pos_(pos) {}

namespace {

enum class Tok { kIdent, kNumber, kPunct, kEnd };

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;
  SourcePos pos;
};

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (src.substr(i, 2) == "//") {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (src.substr(i, 2) == "/*") {
      SourcePos start{line, col};
      advance(2);
      while (i < src.size() && src.substr(i, 2) != "*/") advance(1);
      if (i >= src.size()) throw ParseError(start, "unterminated comment");
      advance(2);
      continue;
    }
    SourcePos pos{line, col};
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      out.push_back({Tok::kIdent, std::string(src.substr(i, j - i)), pos});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Tok::kNumber, std::string(src.substr(i, j - i)), pos});
      advance(j - i);
      continue;
    }
    static constexpr std::string_view kTwoChar[] = {"==", "!=", "<=", ">=", "&&", "||"};
    bool matched = false;
    for (auto op : kTwoChar) {
      if (src.substr(i, 2) == op) {
        out.push_back({Tok::kPunct, std::string(op), pos});
        advance(2);
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (std::string_view("(){};,=<>+-*!:").find(c) != std::string_view::npos) {
      out.push_back({Tok::kPunct, std::string(1, c), pos});
      advance(1);
      continue;
    }
    throw ParseError(pos, std::string("unexpected character '") + c + "'");
  }
  out.push_back({Tok::kEnd, "", {line, col}});
  return out;
}

bool is_keyword(const std::string& s) {
  return s == "int" || s == "void" || s == "if" || s == "else" || s == "while" ||
         s == "return" || s == "ERROR" || s == "nondet";
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  TranslationUnit unit() {
    TranslationUnit tu;
    while (!at_end()) {
      SourcePos pos = peek().pos;
      const bool is_void = check_ident("void");
      if (!is_void && !check_ident("int")) throw error("expected declaration or function");
      next();
      std::string name = identifier();
      if (check("(")) {
        tu.functions.push_back(function(name, !is_void, pos));
        continue;
      }
      if (is_void) throw error("variables must have type int");
      GlobalDecl g{name, 0, pos};
      if (accept("=")) {
        bool negative = accept("-");
        if (peek().kind != Tok::kNumber) throw error("global initializer must be an integer literal");
        g.init = Integer(next().text);
        if (negative) g.init = -g.init;
      }
      expect(";");
      tu.globals.push_back(std::move(g));
    }
    if (tu.functions.empty()) throw error("program has no functions");
    return tu;
  }

 private:
  FunctionDecl function(std::string name, bool returns_value, SourcePos pos) {
    FunctionDecl f;
    f.name = std::move(name);
    f.returns_value = returns_value;
    f.pos = pos;
    expect("(");
    if (!check(")")) {
      if (check_ident("void") && peek(1).text == ")") {
        next();
      } else {
        do {
          if (!check_ident("int")) throw error("expected 'int' parameter");
          next();
          f.params.push_back(identifier());
        } while (accept(","));
      }
    }
    expect(")");
    f.body = block();
    return f;
  }

  std::vector<StmtPtr> block() {
    expect("{");
    std::vector<StmtPtr> body;
    while (!check("}")) {
      if (at_end()) throw error("unexpected end of input, expected '}'");
      body.push_back(statement());
    }
    expect("}");
    return body;
  }

  StmtPtr statement() {
    auto s = std::make_shared<Stmt>();
    s->pos = peek().pos;
    if (accept(";")) {
      s->kind = StmtKind::kEmpty;
    } else if (check("{")) {
      s->kind = StmtKind::kBlock;
      s->body = block();
    } else if (check_ident("int")) {
      next();
      s->kind = StmtKind::kDecl;
      s->target = identifier();
      if (accept("=")) s->expr = expression();
      expect(";");
    } else if (check_ident("if")) {
      next();
      s->kind = StmtKind::kIf;
      expect("(");
      s->expr = expression();
      expect(")");
      s->body = block();
      if (check_ident("else")) {
        next();
        s->has_else = true;
        if (check_ident("if")) {
          s->else_body.push_back(statement());
        } else {
          s->else_body = block();
        }
      }
    } else if (check_ident("while")) {
      next();
      s->kind = StmtKind::kWhile;
      expect("(");
      s->expr = expression();
      expect(")");
      s->body = block();
    } else if (check_ident("return")) {
      next();
      s->kind = StmtKind::kReturn;
      if (!check(";")) s->expr = expression();
      expect(";");
    } else if (check_ident("ERROR")) {
      next();
      s->kind = StmtKind::kErrorLabel;
      expect(":");
      expect(";");
    } else if (peek().kind == Tok::kIdent && !is_keyword(peek().text)) {
      std::string name = next().text;
      if (check("(")) {
        s->kind = StmtKind::kCall;
        s->callee = std::move(name);
        s->args = arguments();
        expect(";");
      } else {
        expect("=");
        s->target = std::move(name);
        if (peek().kind == Tok::kIdent && !is_keyword(peek().text) && peek(1).text == "(") {
          s->kind = StmtKind::kCall;
          s->callee = next().text;
          s->args = arguments();
        } else {
          s->kind = StmtKind::kAssign;
          s->expr = expression();
        }
        expect(";");
      }
    } else {
      throw error("expected statement");
    }
    return s;
  }

  std::vector<ExprPtr> arguments() {
    expect("(");
    std::vector<ExprPtr> args;
    if (!check(")")) {
      do {
        args.push_back(expression());
      } while (accept(","));
    }
    expect(")");
    return args;
  }

  ExprPtr expression() { return disjunction(); }

  ExprPtr disjunction() {
    auto lhs = conjunction();
    while (accept("||")) lhs = Expr::disjunction(lhs, conjunction());
    return lhs;
  }

  ExprPtr conjunction() {
    auto lhs = comparison();
    while (accept("&&")) lhs = Expr::conjunction(lhs, comparison());
    return lhs;
  }

  ExprPtr comparison() {
    auto lhs = additive();
    static constexpr std::pair<std::string_view, CompareOp> kOps[] = {
        {"==", CompareOp::kEq}, {"!=", CompareOp::kNe}, {"<=", CompareOp::kLe},
        {">=", CompareOp::kGe}, {"<", CompareOp::kLt},  {">", CompareOp::kGt}};
    for (auto [text, op] : kOps) {
      if (accept(text)) {
        auto rhs = additive();
        for (auto [t2, unused] : kOps)
          if (check(t2)) throw error("comparison operators do not chain");
        return Expr::compare(op, lhs, rhs);
      }
    }
    return lhs;
  }

  ExprPtr additive() {
    auto lhs = multiplicative();
    for (;;) {
      if (accept("+")) {
        lhs = Expr::arith(ArithOp::kAdd, lhs, multiplicative());
      } else if (accept("-")) {
        lhs = Expr::arith(ArithOp::kSub, lhs, multiplicative());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr multiplicative() {
    auto lhs = unary();
    while (accept("*")) lhs = Expr::arith(ArithOp::kMul, lhs, unary());
    return lhs;
  }

  ExprPtr unary() {
    if (accept("-")) {
      auto inner = unary();
      if (inner->kind == ExprKind::kIntLiteral) return Expr::literal(-inner->value);
      return Expr::arith(ArithOp::kMul, Expr::literal(-1), inner);
    }
    if (accept("!")) return Expr::negation(unary());
    return primary();
  }

  ExprPtr primary() {
    const Token& t = peek();
    if (t.kind == Tok::kNumber) return Expr::literal(Integer(next().text));
    if (accept("(")) {
      auto e = expression();
      expect(")");
      return e;
    }
    if (check_ident("nondet")) {
      next();
      expect("(");
      expect(")");
      return Expr::nondet();
    }
    if (t.kind == Tok::kIdent && !is_keyword(t.text)) {
      if (peek(1).text == "(") throw error("function calls are only allowed as statements");
      return Expr::variable(next().text);
    }
    throw error("expected expression");
  }

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool at_end() const { return peek().kind == Tok::kEnd; }
  bool check(std::string_view p) const { return peek().kind == Tok::kPunct && peek().text == p; }
  bool check_ident(std::string_view w) const {
    return peek().kind == Tok::kIdent && peek().text == w;
  }
  bool accept(std::string_view p) {
    if (!check(p)) return false;
    next();
    return true;
  }
  void expect(std::string_view p) {
    if (!accept(p)) throw error("expected '" + std::string(p) + "'");
  }
  std::string identifier() {
    if (peek().kind != Tok::kIdent || is_keyword(peek().text)) throw error("expected identifier");
    return next().text;
  }
  ParseError error(const std::string& message) const {
    const Token& t = peek();
    std::string found = t.kind == Tok::kEnd ? "end of input" : "'" + t.text + "'";
    return ParseError(t.pos, message + " (found " + found + ")");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

TranslationUnit parse_translation_unit(std::string_view source) {
  return Parser(tokenize(source)).unit();
}

}  // namespace cpa::frontend
