#include <algorithm>
#include <deque>
#include <functional>

#include "cpa/frontend/cfa.hpp"
#include "cpa/frontend/parser.hpp"

namespace cpa {

using frontend::ArithOp;
using frontend::CompareOp;
using frontend::Expr;
using frontend::ExprKind;
using frontend::ExprPtr;
using frontend::FunctionDecl;
using frontend::SemanticError;
using frontend::SourcePos;
using frontend::Stmt;
using frontend::StmtKind;
using frontend::StmtPtr;
using frontend::TranslationUnit;

std::string to_string(LocationId id) { return "N" + std::to_string(id.value); }

std::string Program::return_slot(std::string_view function) {
  return std::string(function) + "::$ret";
}

const ControlFlowAutomaton& Program::cfa(std::string_view function) const {
  auto it = cfas_.find(std::string(function));
  if (it == cfas_.end()) throw std::out_of_range("no function named " + std::string(function));
  return it->second;
}

std::string describe(const EdgeOperation& op) {
  using frontend::display_name;
  struct Visitor {
    std::string operator()(const AssumeOp& a) const { return "[" + to_string(*a.condition) + "]"; }
    std::string operator()(const AssignOp& a) const {
      return display_name(a.target) + " := " + to_string(*a.value);
    }
    std::string operator()(const SkipOp&) const { return "skip"; }
    std::string operator()(const CallOp& c) const {
      std::string s = c.result_target ? display_name(*c.result_target) + " := " : "";
      s += c.callee + "(";
      for (std::size_t i = 0; i < c.arguments.size(); ++i) {
        if (i) s += ", ";
        s += to_string(*c.arguments[i]);
      }
      return s + ")";
    }
    std::string operator()(const ReturnOp& r) const {
      std::string s = r.result_target ? display_name(*r.result_target) + " := " : "";
      return s + "return from " + r.callee;
    }
  };
  return std::visit(Visitor{}, op);
}

namespace {

// ---------------------------------------------------------------------------
// Name resolution and static checks. Produces a copy of each function body in
// which every variable is qualified and every condition is a proper boolean.
// ---------------------------------------------------------------------------

class Resolver {
 public:
  Resolver(const TranslationUnit& unit) : unit_(unit) {
    for (const auto& g : unit.globals) {
      if (!globals_.insert(g.name).second) throw SemanticError(g.pos, "duplicate global '" + g.name + "'");
    }
    for (const auto& f : unit.functions) {
      if (functions_.count(f.name)) throw SemanticError(f.pos, "duplicate function '" + f.name + "'");
      functions_[f.name] = &f;
    }
    auto main = functions_.find("main");
    if (main == functions_.end()) throw SemanticError({1, 1}, "missing function 'main'");
    if (!main->second->params.empty()) throw SemanticError(main->second->pos, "'main' takes no parameters");
  }

  struct Resolved {
    std::vector<StmtPtr> body;
    std::vector<std::string> params;
    std::set<std::string> locals;
    std::vector<std::pair<std::string, SourcePos>> calls;
  };

  Resolved resolve(const FunctionDecl& f) {
    fn_ = &f;
    scope_.clear();
    out_ = Resolved{};
    for (const auto& p : f.params) {
      if (!scope_.insert(p).second) throw SemanticError(f.pos, "duplicate parameter '" + p + "'");
      out_.params.push_back(qualify(p));
      out_.locals.insert(qualify(p));
    }
    if (f.returns_value) out_.locals.insert(Program::return_slot(f.name));
    out_.body = block(f.body);
    return std::move(out_);
  }

  void check_recursion(const std::map<std::string, Resolved>& resolved) const {
    std::map<std::string, int> color;
    std::function<void(const std::string&)> visit = [&](const std::string& fn) {
      color[fn] = 1;
      for (const auto& [callee, pos] : resolved.at(fn).calls) {
        if (color[callee] == 1)
          throw SemanticError(pos, "recursive call to '" + callee + "' is not supported");
        if (color[callee] == 0) visit(callee);
      }
      color[fn] = 2;
    };
    for (const auto& f : unit_.functions)
      if (color[f.name] == 0) visit(f.name);
  }

 private:
  std::string qualify(const std::string& local) const { return fn_->name + "::" + local; }

  std::string lookup(const std::string& name, SourcePos pos) const {
    if (scope_.count(name)) return qualify(name);
    if (globals_.count(name)) return name;
    throw SemanticError(pos, "undeclared variable '" + name + "'");
  }

  std::vector<StmtPtr> block(const std::vector<StmtPtr>& body) {
    std::vector<StmtPtr> out;
    out.reserve(body.size());
    for (const auto& s : body) out.push_back(statement(*s));
    return out;
  }

  StmtPtr statement(const Stmt& s) {
    auto r = std::make_shared<Stmt>(s);
    switch (s.kind) {
      case StmtKind::kDecl:
        if (!scope_.insert(s.target).second)
          throw SemanticError(s.pos, "redeclaration of '" + s.target + "'");
        r->target = qualify(s.target);
        out_.locals.insert(r->target);
        if (s.expr) r->expr = assigned_value(s.expr, s.pos);
        break;
      case StmtKind::kAssign:
        r->target = lookup(s.target, s.pos);
        r->expr = assigned_value(s.expr, s.pos);
        break;
      case StmtKind::kCall: {
        auto it = functions_.find(s.callee);
        if (it == functions_.end()) throw SemanticError(s.pos, "call to undefined function '" + s.callee + "'");
        const FunctionDecl& callee = *it->second;
        if (callee.params.size() != s.args.size())
          throw SemanticError(s.pos, "'" + s.callee + "' expects " + std::to_string(callee.params.size()) +
                                         " argument(s)");
        if (!s.target.empty()) {
          if (!callee.returns_value)
            throw SemanticError(s.pos, "'" + s.callee + "' does not return a value");
          r->target = lookup(s.target, s.pos);
        }
        for (auto& a : r->args) a = arithmetic(a, s.pos);
        out_.calls.emplace_back(s.callee, s.pos);
        break;
      }
      case StmtKind::kIf:
        r->expr = condition(s.expr, s.pos);
        r->body = block(s.body);
        r->else_body = block(s.else_body);
        break;
      case StmtKind::kWhile:
        r->expr = condition(s.expr, s.pos);
        r->body = block(s.body);
        break;
      case StmtKind::kReturn:
        if (s.expr && !fn_->returns_value)
          throw SemanticError(s.pos, "void function '" + fn_->name + "' cannot return a value");
        if (!s.expr && fn_->returns_value)
          throw SemanticError(s.pos, "function '" + fn_->name + "' must return a value");
        if (s.expr) r->expr = arithmetic(s.expr, s.pos);
        break;
      case StmtKind::kBlock:
        r->body = block(s.body);
        break;
      case StmtKind::kErrorLabel:
      case StmtKind::kEmpty:
        break;
    }
    return r;
  }

  ExprPtr assigned_value(const ExprPtr& e, SourcePos pos) {
    if (e->kind == ExprKind::kNondet) return e;
    return arithmetic(e, pos);
  }

  static bool is_constant(const Expr& e) {
    switch (e.kind) {
      case ExprKind::kIntLiteral: return true;
      case ExprKind::kArith: return is_constant(*e.lhs) && is_constant(*e.rhs);
      default: return false;
    }
  }

  ExprPtr arithmetic(const ExprPtr& e, SourcePos pos) {
    switch (e->kind) {
      case ExprKind::kIntLiteral:
        return e;
      case ExprKind::kVariable:
        return Expr::variable(lookup(e->name, pos));
      case ExprKind::kNondet:
        throw SemanticError(pos, "nondet() is only allowed as the whole right-hand side of an assignment");
      case ExprKind::kArith: {
        auto l = arithmetic(e->lhs, pos);
        auto r = arithmetic(e->rhs, pos);
        if (e->arith_op == ArithOp::kMul && !is_constant(*l) && !is_constant(*r))
          throw SemanticError(pos, "nonlinear term '" + to_string(*e) + "'");
        return Expr::arith(e->arith_op, l, r);
      }
      default:
        throw SemanticError(pos, "boolean expression used where an integer is expected");
    }
  }

  ExprPtr condition(const ExprPtr& e, SourcePos pos) {
    switch (e->kind) {
      case ExprKind::kCompare:
        return Expr::compare(e->compare_op, arithmetic(e->lhs, pos), arithmetic(e->rhs, pos));
      case ExprKind::kNot:
        return Expr::negation(condition(e->lhs, pos));
      case ExprKind::kAnd:
        return Expr::conjunction(condition(e->lhs, pos), condition(e->rhs, pos));
      case ExprKind::kOr:
        return Expr::disjunction(condition(e->lhs, pos), condition(e->rhs, pos));
      default:
        return Expr::compare(CompareOp::kNe, arithmetic(e, pos), Expr::literal(0));
    }
  }

  const TranslationUnit& unit_;
  std::set<std::string> globals_;
  std::map<std::string, const FunctionDecl*> functions_;
  const FunctionDecl* fn_ = nullptr;
  std::set<std::string> scope_;
  Resolved out_;
};

// ---------------------------------------------------------------------------
// Lowering of one function body into a local CFA. Locations are local indices
// until the program is assembled.
// ---------------------------------------------------------------------------

struct LocalEdge {
  int source;
  int target;  // -1 for call edges (callee entry is resolved at assembly)
  EdgeOperation op;
  int return_target = -1;
};

class FunctionLowering {
 public:
  FunctionLowering() {
    entry_ = fresh();
    exit_ = fresh();
    pinned_[entry_] = pinned_[exit_] = true;
  }

  void lower(const std::vector<StmtPtr>& body, const std::vector<std::pair<std::string, Integer>>& inits,
             bool returns_value, const std::string& ret_slot) {
    returns_value_ = returns_value;
    ret_slot_ = ret_slot;
    int cur = entry_;
    for (const auto& [name, value] : inits) cur = add(cur, AssignOp{name, Expr::literal(value)});
    cur = block(body, cur);
    add(cur, exit_, SkipOp{});
    prune();
  }

  int entry() const { return entry_; }
  int exit() const { return exit_; }
  int size() const { return static_cast<int>(dead_.size()); }
  bool dead(int l) const { return dead_[l]; }
  bool error(int l) const { return error_[l]; }
  const std::vector<LocalEdge>& edges() const { return edges_; }

 private:
  int fresh() {
    dead_.push_back(false);
    pinned_.push_back(false);
    error_.push_back(false);
    return static_cast<int>(dead_.size()) - 1;
  }

  int add(int src, EdgeOperation op) {
    int t = fresh();
    add(src, t, std::move(op));
    return t;
  }

  void add(int src, int dst, EdgeOperation op) { edges_.push_back({src, dst, std::move(op)}); }

  bool has_outgoing(int l) const {
    return std::any_of(edges_.begin(), edges_.end(), [&](const LocalEdge& e) { return e.source == l; });
  }

  bool mergeable(int l) const { return !pinned_[l] && !error_[l] && !has_outgoing(l); }

  void retarget(int from, int to) {
    for (auto& e : edges_)
      if (e.target == from) e.target = to;
    dead_[from] = true;
  }

  int join(int a, int b) {
    if (a == b) return a;
    if (!error_[a] && mergeable(b)) {
      retarget(b, a);
      return a;
    }
    if (!error_[b] && mergeable(a)) {
      retarget(a, b);
      return b;
    }
    int j = fresh();
    add(a, j, SkipOp{});
    add(b, j, SkipOp{});
    return j;
  }

  int block(const std::vector<StmtPtr>& body, int cur) {
    for (const auto& s : body) cur = statement(*s, cur);
    return cur;
  }

  int statement(const Stmt& s, int cur) {
    switch (s.kind) {
      case StmtKind::kDecl:
        return s.expr ? add(cur, AssignOp{s.target, s.expr}) : cur;
      case StmtKind::kAssign:
        return add(cur, AssignOp{s.target, s.expr});
      case StmtKind::kCall: {
        int ret = fresh();
        pinned_[ret] = true;
        std::optional<std::string> result;
        if (!s.target.empty()) result = s.target;
        edges_.push_back({cur, -1, CallOp{s.callee, s.args, LocationId{}, result}, ret});
        return ret;
      }
      case StmtKind::kIf: {
        int then_start = add(cur, AssumeOp{s.expr, true});
        int then_end = block(s.body, then_start);
        int else_start = add(cur, AssumeOp{frontend::negate_condition(s.expr), false});
        int else_end = block(s.else_body, else_start);
        return join(then_end, else_end);
      }
      case StmtKind::kWhile: {
        int head = cur == entry_ ? add(cur, SkipOp{}) : cur;
        pinned_[head] = true;
        int body_start = add(head, AssumeOp{s.expr, true});
        int body_end = block(s.body, body_start);
        if (body_end != head) {
          if (mergeable(body_end)) {
            retarget(body_end, head);
          } else {
            add(body_end, head, SkipOp{});
          }
        }
        return add(head, AssumeOp{frontend::negate_condition(s.expr), false});
      }
      case StmtKind::kReturn:
        if (s.expr) {
          add(cur, exit_, AssignOp{ret_slot_, s.expr});
        } else {
          add(cur, exit_, SkipOp{});
        }
        return fresh();
      case StmtKind::kErrorLabel:
        error_[cur] = true;
        return cur;
      case StmtKind::kBlock:
        return block(s.body, cur);
      case StmtKind::kEmpty:
        return cur;
    }
    return cur;
  }

  // Drops locations not reachable from the entry; a call site counts as
  // connected to its return target. The exit is always kept.
  void prune() {
    std::vector<bool> seen(dead_.size(), false);
    std::deque<int> work{entry_};
    seen[entry_] = true;
    while (!work.empty()) {
      int l = work.front();
      work.pop_front();
      for (const auto& e : edges_) {
        if (e.source != l) continue;
        int next = e.target >= 0 ? e.target : e.return_target;
        if (!seen[next]) {
          seen[next] = true;
          work.push_back(next);
        }
      }
    }
    for (std::size_t l = 0; l < dead_.size(); ++l)
      if (!seen[l] && static_cast<int>(l) != exit_) dead_[l] = true;
    std::erase_if(edges_, [&](const LocalEdge& e) { return dead_[e.source]; });
  }

  std::vector<bool> dead_, pinned_, error_;
  std::vector<LocalEdge> edges_;
  int entry_ = 0;
  int exit_ = 0;
  bool returns_value_ = false;
  std::string ret_slot_;
};

}  // namespace

class ProgramBuilder {
 public:
  static Program build(const TranslationUnit& unit) {
    Resolver resolver(unit);
    std::map<std::string, Resolver::Resolved> resolved;
    for (const auto& f : unit.functions) resolved.emplace(f.name, resolver.resolve(f));
    resolver.check_recursion(resolved);

    Program p;
    p.main_ = "main";
    for (const auto& g : unit.globals) p.globals_.insert(g.name);

    std::vector<std::pair<std::string, Integer>> inits;
    for (const auto& g : unit.globals) inits.emplace_back(g.name, g.init);

    std::map<std::string, FunctionLowering> lowered;
    std::map<std::string, std::vector<LocationId>> local_to_global;
    for (const auto& f : unit.functions) {
      p.order_.push_back(f.name);
      FunctionLowering fl;
      fl.lower(resolved[f.name].body, f.name == "main" ? inits : decltype(inits){}, f.returns_value,
               Program::return_slot(f.name));

      // entry first, exit last, everything else in creation order
      std::vector<LocationId> ids(fl.size());
      auto& cfa = p.cfas_[f.name];
      auto assign = [&](int l) {
        LocationId id{static_cast<std::uint32_t>(p.locations_.size())};
        ids[l] = id;
        p.locations_.push_back({f.name, fl.error(l)});
        cfa.locations.push_back(id);
        if (fl.error(l)) cfa.error_locations.insert(id);
      };
      assign(fl.entry());
      for (int l = 0; l < fl.size(); ++l)
        if (!fl.dead(l) && l != fl.entry() && l != fl.exit()) assign(l);
      assign(fl.exit());

      cfa.function_name = f.name;
      cfa.returns_value = f.returns_value;
      cfa.entry = ids[fl.entry()];
      cfa.exit = ids[fl.exit()];
      cfa.parameters = resolved[f.name].params;
      cfa.locals.assign(resolved[f.name].locals.begin(), resolved[f.name].locals.end());
      local_to_global[f.name] = std::move(ids);
      lowered.emplace(f.name, std::move(fl));
    }

    struct CallSite {
      std::string callee;
      LocationId return_target;
      std::optional<std::string> result;
    };
    std::vector<CallSite> call_sites;
    for (const auto& name : p.order_) {
      const auto& ids = local_to_global[name];
      for (const auto& e : lowered.at(name).edges()) {
        CfaEdge edge;
        edge.id = EdgeId{static_cast<std::uint32_t>(p.edges_.size())};
        edge.source = ids[e.source];
        edge.op = e.op;
        if (auto* call = std::get_if<CallOp>(&edge.op)) {
          call->return_target = ids[e.return_target];
          edge.target = p.cfas_.at(call->callee).entry;
          call_sites.push_back({call->callee, call->return_target, call->result_target});
        } else {
          edge.target = ids[e.target];
        }
        p.cfas_[name].edges.push_back(edge.id);
        p.edges_.push_back(std::move(edge));
      }
    }
    for (const auto& site : call_sites) {
      auto& callee = p.cfas_.at(site.callee);
      CfaEdge edge;
      edge.id = EdgeId{static_cast<std::uint32_t>(p.edges_.size())};
      edge.source = callee.exit;
      edge.target = site.return_target;
      ReturnOp ret{site.callee, std::nullopt, site.result};
      if (callee.returns_value) ret.returned = Expr::variable(Program::return_slot(site.callee));
      edge.op = std::move(ret);
      callee.edges.push_back(edge.id);
      p.edges_.push_back(std::move(edge));
    }

    p.outgoing_.resize(p.locations_.size());
    for (const auto& e : p.edges_) p.outgoing_[e.source.value].push_back(e.id);

    std::set<std::string> vars(p.globals_.begin(), p.globals_.end());
    for (const auto& [name, cfa] : p.cfas_) vars.insert(cfa.locals.begin(), cfa.locals.end());
    p.variables_.assign(vars.begin(), vars.end());
    return p;
  }
};

Program lower(const TranslationUnit& unit) { return ProgramBuilder::build(unit); }

Program parse(std::string_view source) { return lower(frontend::parse_translation_unit(source)); }

}  // namespace cpa
