#pragma once

/*
   Syntax tree of MiniC, a small imperative language over unbounded
   integers:

     program := decl* func+
     decl    := "int" ident ("=" literal)? ";"
     func    := ("void" | "int") ident "(" params? ")" block
     stmt    := "int" ident ("=" expr)? ";"
              | ident "=" expr ";"
              | ident "=" ident "(" args? ")" ";"
              | ident "(" args? ")" ";"
              | "if" "(" cond ")" block ("else" block)?
              | "while" "(" cond ")" block
              | "return" expr? ";"
              | "ERROR" ":" ";"
              | block | ";"

   Arithmetic is linear: `*` needs a constant operand. `nondet()` may only
   appear as the complete right-hand side of an assignment.
 */

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cpa/support/numbers.hpp"

namespace cpa::frontend {

struct SourcePos {
  int line = 0;
  int column = 0;
};

enum class ExprKind { kIntLiteral, kVariable, kNondet, kArith, kCompare, kNot, kAnd, kOr };
enum class ArithOp { kAdd, kSub, kMul };
enum class CompareOp { kEq, kNe, kLt, kLe, kGt, kGe };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable expression node. Which fields are meaningful depends on `kind`:
/// literals use `value`, variables use `name`, binary nodes use `lhs`/`rhs`,
/// and `kNot` uses `lhs` only.
struct Expr {
  ExprKind kind = ExprKind::kIntLiteral;
  Integer value;
  std::string name;
  ArithOp arith_op = ArithOp::kAdd;
  CompareOp compare_op = CompareOp::kEq;
  ExprPtr lhs;
  ExprPtr rhs;

  static ExprPtr literal(Integer v);
  static ExprPtr variable(std::string n);
  static ExprPtr nondet();
  static ExprPtr arith(ArithOp op, ExprPtr l, ExprPtr r);
  static ExprPtr compare(CompareOp op, ExprPtr l, ExprPtr r);
  static ExprPtr negation(ExprPtr e);
  static ExprPtr conjunction(ExprPtr l, ExprPtr r);
  static ExprPtr disjunction(ExprPtr l, ExprPtr r);

  bool is_condition() const {
    return kind == ExprKind::kCompare || kind == ExprKind::kNot || kind == ExprKind::kAnd ||
           kind == ExprKind::kOr;
  }
};

bool structurally_equal(const Expr& a, const Expr& b);

/// Logical negation pushed down to comparison atoms (De Morgan plus operator
/// flips), so the result contains no `kNot` node.
ExprPtr negate_condition(const ExprPtr& cond);

CompareOp flip(CompareOp op);
std::string_view to_string(CompareOp op);
std::string_view to_string(ArithOp op);

/// Strips a `function::` qualifier from a lowered variable name.
std::string display_name(std::string_view qualified);

/// Infix rendering with minimal parentheses; variable names pass through
/// `display_name`. Re-parsing the output yields a structurally equal tree.
std::string to_string(const Expr& e);
/// Same, but with names printed verbatim.
std::string to_source(const Expr& e);

enum class StmtKind { kDecl, kAssign, kCall, kIf, kWhile, kReturn, kErrorLabel, kBlock, kEmpty };

struct Stmt;
using StmtPtr = std::shared_ptr<const Stmt>;

struct Stmt {
  StmtKind kind = StmtKind::kEmpty;
  SourcePos pos;
  /// Declared/assigned variable; for calls, the optional result variable.
  std::string target;
  /// Initializer, assigned value, branch/loop condition or returned value.
  ExprPtr expr;
  std::string callee;
  std::vector<ExprPtr> args;
  std::vector<StmtPtr> body;
  std::vector<StmtPtr> else_body;
  bool has_else = false;
};

struct FunctionDecl {
  std::string name;
  bool returns_value = false;
  std::vector<std::string> params;
  std::vector<StmtPtr> body;
  SourcePos pos;
};

struct GlobalDecl {
  std::string name;
  Integer init = 0;
  SourcePos pos;
};

struct TranslationUnit {
  std::vector<GlobalDecl> globals;
  std::vector<FunctionDecl> functions;
};

bool structurally_equal(const Stmt& a, const Stmt& b);
bool structurally_equal(const TranslationUnit& a, const TranslationUnit& b);

/// Source rendering of a whole translation unit (pretty-printer).
std::string to_source(const TranslationUnit& unit);

}  // namespace cpa::frontend
