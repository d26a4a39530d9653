#include "cpa/frontend/ast.hpp"

#include <sstream>

namespace cpa::frontend {

ExprPtr Expr::literal(Integer v) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::kIntLiteral;
  e->value = std::move(v);
  return e;
}

ExprPtr Expr::variable(std::string n) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::kVariable;
  e->name = std::move(n);
  return e;
}

ExprPtr Expr::nondet() {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::kNondet;
  return e;
}

ExprPtr Expr::arith(ArithOp op, ExprPtr l, ExprPtr r) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::kArith;
  e->arith_op = op;
  e->lhs = std::move(l);
  e->rhs = std::move(r);
  return e;
}

ExprPtr Expr::compare(CompareOp op, ExprPtr l, ExprPtr r) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::kCompare;
  e->compare_op = op;
  e->lhs = std::move(l);
  e->rhs = std::move(r);
  return e;
}

ExprPtr Expr::negation(ExprPtr inner) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::kNot;
  e->lhs = std::move(inner);
  return e;
}

ExprPtr Expr::conjunction(ExprPtr l, ExprPtr r) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::kAnd;
  e->lhs = std::move(l);
  e->rhs = std::move(r);
  return e;
}

ExprPtr Expr::disjunction(ExprPtr l, ExprPtr r) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::kOr;
  e->lhs = std::move(l);
  e->rhs = std::move(r);
  return e;
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ExprKind::kIntLiteral:
      return a.value == b.value;
    case ExprKind::kVariable:
      return a.name == b.name;
    case ExprKind::kNondet:
      return true;
    case ExprKind::kArith:
      return a.arith_op == b.arith_op && structurally_equal(*a.lhs, *b.lhs) &&
             structurally_equal(*a.rhs, *b.rhs);
    case ExprKind::kCompare:
      return a.compare_op == b.compare_op && structurally_equal(*a.lhs, *b.lhs) &&
             structurally_equal(*a.rhs, *b.rhs);
    case ExprKind::kNot:
      return structurally_equal(*a.lhs, *b.lhs);
    case ExprKind::kAnd:
    case ExprKind::kOr:
      return structurally_equal(*a.lhs, *b.lhs) && structurally_equal(*a.rhs, *b.rhs);
  }
  return false;
}

CompareOp flip(CompareOp op) {
  switch (op) {
    case CompareOp::kEq: return CompareOp::kNe;
    case CompareOp::kNe: return CompareOp::kEq;
    case CompareOp::kLt: return CompareOp::kGe;
    case CompareOp::kLe: return CompareOp::kGt;
    case CompareOp::kGt: return CompareOp::kLe;
    case CompareOp::kGe: return CompareOp::kLt;
  }
  return op;
}

namespace {

ExprPtr push_negations(const ExprPtr& cond);

ExprPtr negate_impl(const ExprPtr& cond) {
  switch (cond->kind) {
    case ExprKind::kCompare:
      return Expr::compare(flip(cond->compare_op), cond->lhs, cond->rhs);
    case ExprKind::kNot:
      return push_negations(cond->lhs);
    case ExprKind::kAnd:
      return Expr::disjunction(negate_impl(cond->lhs), negate_impl(cond->rhs));
    case ExprKind::kOr:
      return Expr::conjunction(negate_impl(cond->lhs), negate_impl(cond->rhs));
    default:
      // arithmetic in condition position means `e != 0`
      return Expr::compare(CompareOp::kEq, cond, Expr::literal(0));
  }
}

ExprPtr push_negations(const ExprPtr& cond) {
  switch (cond->kind) {
    case ExprKind::kNot:
      return negate_impl(cond->lhs);
    case ExprKind::kAnd:
      return Expr::conjunction(push_negations(cond->lhs), push_negations(cond->rhs));
    case ExprKind::kOr:
      return Expr::disjunction(push_negations(cond->lhs), push_negations(cond->rhs));
    case ExprKind::kCompare:
      return cond;
    default:
      return Expr::compare(CompareOp::kNe, cond, Expr::literal(0));
  }
}

}  // namespace

ExprPtr negate_condition(const ExprPtr& cond) { return negate_impl(cond); }

std::string_view to_string(CompareOp op) {
  switch (op) {
    case CompareOp::kEq: return "==";
    case CompareOp::kNe: return "!=";
    case CompareOp::kLt: return "<";
    case CompareOp::kLe: return "<=";
    case CompareOp::kGt: return ">";
    case CompareOp::kGe: return ">=";
  }
  return "?";
}

std::string_view to_string(ArithOp op) {
  switch (op) {
    case ArithOp::kAdd: return "+";
    case ArithOp::kSub: return "-";
    case ArithOp::kMul: return "*";
  }
  return "?";
}

std::string display_name(std::string_view qualified) {
  auto pos = qualified.rfind("::");
  if (pos == std::string_view::npos) return std::string(qualified);
  return std::string(qualified.substr(pos + 2));
}

namespace {

int precedence(const Expr& e) {
  switch (e.kind) {
    case ExprKind::kOr: return 1;
    case ExprKind::kAnd: return 2;
    case ExprKind::kCompare: return 3;
    case ExprKind::kArith: return e.arith_op == ArithOp::kMul ? 5 : 4;
    case ExprKind::kNot: return 6;
    case ExprKind::kIntLiteral: return e.value < 0 ? 6 : 7;
    default: return 7;
  }
}

void print(std::ostream& os, const Expr& e, bool display, int min_prec) {
  const int prec = precedence(e);
  const bool parens = prec < min_prec;
  if (parens) os << '(';
  switch (e.kind) {
    case ExprKind::kIntLiteral:
      os << e.value.get_str();
      break;
    case ExprKind::kVariable:
      os << (display ? display_name(e.name) : e.name);
      break;
    case ExprKind::kNondet:
      os << "nondet()";
      break;
    case ExprKind::kArith:
      print(os, *e.lhs, display, prec);
      os << ' ' << to_string(e.arith_op) << ' ';
      print(os, *e.rhs, display, prec + 1);
      break;
    case ExprKind::kCompare:
      print(os, *e.lhs, display, prec + 1);
      os << ' ' << to_string(e.compare_op) << ' ';
      print(os, *e.rhs, display, prec + 1);
      break;
    case ExprKind::kNot:
      os << '!';
      print(os, *e.lhs, display, 7);
      break;
    case ExprKind::kAnd:
      print(os, *e.lhs, display, prec);
      os << " && ";
      print(os, *e.rhs, display, prec + 1);
      break;
    case ExprKind::kOr:
      print(os, *e.lhs, display, prec);
      os << " || ";
      print(os, *e.rhs, display, prec + 1);
      break;
  }
  if (parens) os << ')';
}

}  // namespace

std::string to_string(const Expr& e) {
  std::ostringstream os;
  print(os, e, true, 0);
  return os.str();
}

std::string to_source(const Expr& e) {
  std::ostringstream os;
  print(os, e, false, 0);
  return os.str();
}

namespace {

bool equal_exprs(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  return structurally_equal(*a, *b);
}

bool equal_bodies(const std::vector<StmtPtr>& a, const std::vector<StmtPtr>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!structurally_equal(*a[i], *b[i])) return false;
  return true;
}

void print_stmt(std::ostream& os, const Stmt& s, int indent);

void print_block(std::ostream& os, const std::vector<StmtPtr>& body, int indent) {
  os << "{\n";
  for (const auto& s : body) print_stmt(os, *s, indent + 1);
  os << std::string(2 * indent, ' ') << '}';
}

void print_args(std::ostream& os, const std::vector<ExprPtr>& args) {
  os << '(';
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) os << ", ";
    os << to_source(*args[i]);
  }
  os << ')';
}

void print_stmt(std::ostream& os, const Stmt& s, int indent) {
  os << std::string(2 * indent, ' ');
  switch (s.kind) {
    case StmtKind::kDecl:
      os << "int " << s.target;
      if (s.expr) os << " = " << to_source(*s.expr);
      os << ";\n";
      break;
    case StmtKind::kAssign:
      os << s.target << " = " << to_source(*s.expr) << ";\n";
      break;
    case StmtKind::kCall:
      if (!s.target.empty()) os << s.target << " = ";
      os << s.callee;
      print_args(os, s.args);
      os << ";\n";
      break;
    case StmtKind::kIf:
      os << "if (" << to_source(*s.expr) << ") ";
      print_block(os, s.body, indent);
      if (s.has_else) {
        os << " else ";
        print_block(os, s.else_body, indent);
      }
      os << '\n';
      break;
    case StmtKind::kWhile:
      os << "while (" << to_source(*s.expr) << ") ";
      print_block(os, s.body, indent);
      os << '\n';
      break;
    case StmtKind::kReturn:
      os << "return";
      if (s.expr) os << ' ' << to_source(*s.expr);
      os << ";\n";
      break;
    case StmtKind::kErrorLabel:
      os << "ERROR: ;\n";
      break;
    case StmtKind::kBlock:
      print_block(os, s.body, indent);
      os << '\n';
      break;
    case StmtKind::kEmpty:
      os << ";\n";
      break;
  }
}

}  // namespace

bool structurally_equal(const Stmt& a, const Stmt& b) {
  return a.kind == b.kind && a.target == b.target && equal_exprs(a.expr, b.expr) &&
         a.callee == b.callee && a.args.size() == b.args.size() &&
         std::equal(a.args.begin(), a.args.end(), b.args.begin(), equal_exprs) &&
         equal_bodies(a.body, b.body) && a.has_else == b.has_else &&
         equal_bodies(a.else_body, b.else_body);
}

bool structurally_equal(const TranslationUnit& a, const TranslationUnit& b) {
  if (a.globals.size() != b.globals.size() || a.functions.size() != b.functions.size())
    return false;
  for (std::size_t i = 0; i < a.globals.size(); ++i)
    if (a.globals[i].name != b.globals[i].name || a.globals[i].init != b.globals[i].init)
      return false;
  for (std::size_t i = 0; i < a.functions.size(); ++i) {
    const auto& f = a.functions[i];
    const auto& g = b.functions[i];
    if (f.name != g.name || f.returns_value != g.returns_value || f.params != g.params ||
        !equal_bodies(f.body, g.body))
      return false;
  }
  return true;
}

std::string to_source(const TranslationUnit& unit) {
  std::ostringstream os;
  for (const auto& g : unit.globals) {
    os << "int " << g.name;
    if (g.init != 0) os << " = " << g.init.get_str();
    os << ";\n";
  }
  for (const auto& f : unit.functions) {
    os << (f.returns_value ? "int " : "void ") << f.name << '(';
    for (std::size_t i = 0; i < f.params.size(); ++i) {
      if (i) os << ", ";
      os << "int " << f.params[i];
    }
    os << ") ";
    print_block(os, f.body, 0);
    os << '\n';
  }
  return os.str();
}

}  // namespace cpa::frontend
