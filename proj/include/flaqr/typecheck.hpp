#pragma once

// The local typing judgment Pi;Gamma;pc;c |- e : tau and the global stack
// judgments. Checking is syntax-directed; every annotation is required, and
// the checker never invents labels. Failed premises throw TypeError carrying
// the violated rule and the two principals of the failed query.

#include <map>
#include <set>
#include <stdexcept>
#include <string>

#include "flaqr/actsfor.hpp"
#include "flaqr/ast.hpp"
#include "flaqr/config.hpp"
#include "flaqr/judgments.hpp"
#include "flaqr/print.hpp"

namespace flaqr {

struct TypeError : std::runtime_error {
  std::string rule;
  TypeError(std::string r, const std::string& msg)
      : std::runtime_error("[" + r + "] " + msg), rule(std::move(r)) {}
};

struct TypingCtx {
  DelegationContext delegations;
  std::map<std::string, TypePtr> vars;   // Gamma
  std::set<std::string> type_vars;
  PrinPtr pc = p_bot();
  PrinPtr host = p_top();                // c

  // Shared memoized solver for this delegation set.
  mutable std::shared_ptr<ActsForSolver> solver;
  ActsForSolver& slv() const {
    if (!solver) solver = std::make_shared<ActsForSolver>(delegations);
    return *solver;
  }

  TypingCtx with_var(const std::string& x, TypePtr t) const {
    TypingCtx c = *this;
    c.vars[x] = std::move(t);
    return c;
  }
  TypingCtx with_tvar(const std::string& x) const {
    TypingCtx c = *this;
    c.type_vars.insert(x);
    return c;
  }
  TypingCtx with_pc(PrinPtr p) const {
    TypingCtx c = *this;
    c.pc = std::move(p);
    return c;
  }
  TypingCtx with_host(PrinPtr h) const {
    TypingCtx c = *this;
    c.host = std::move(h);
    return c;
  }
};

namespace detail {

inline void require_acts_for(const TypingCtx& ctx, const char* rule, const PrinPtr& p,
                             const PrinPtr& q, const char* what) {
  if (!ctx.slv().acts_for(p, q))
    throw TypeError(rule, std::string(what) + ": " + to_string(p) + " does not act for " +
                              to_string(q));
}

inline void require_flows(const TypingCtx& ctx, const char* rule, const PrinPtr& p,
                          const PrinPtr& q, const char* what) {
  if (!flows_to(ctx.slv(), p, q))
    throw TypeError(rule, std::string(what) + ": " + to_string(p) + " does not flow to " +
                              to_string(q));
}

inline void require_host(const TypingCtx& ctx, const char* rule) {
  require_acts_for(ctx, rule, ctx.host, ctx.pc, "host authority");
}

inline void require_type_eq(const char* rule, const TypePtr& got, const TypePtr& want,
                            const char* what) {
  if (!type_eq(got, want))
    throw TypeError(rule, std::string(what) + ": expected " + to_string(want) + ", got " +
                              to_string(got));
}

}  // namespace detail

inline TypePtr typecheck_expr(const TypingCtx& ctx, const ExprPtr& e) {
  using detail::require_acts_for;
  using detail::require_flows;
  using detail::require_host;
  using detail::require_type_eq;

  switch (e->kind) {
    case ExprKind::Var: {
      require_host(ctx, "Var");
      auto it = ctx.vars.find(e->var);
      if (it == ctx.vars.end()) throw TypeError("Var", "unbound variable " + e->var);
      return it->second;
    }
    case ExprKind::Unit:
      require_host(ctx, "Unit");
      return t_unit();
    case ExprKind::Fail:
      require_host(ctx, "Fail");
      return e->type;
    case ExprKind::Expect:
      require_host(ctx, "Expect");
      return e->type;

    case ExprKind::Lam: {
      require_host(ctx, "Lam");
      TypePtr body_t =
          typecheck_expr(ctx.with_var(e->var, e->type).with_pc(e->label), e->e1);
      TypePtr fun = t_fun(e->type, e->label, body_t);
      require_acts_for(ctx, "Lam", ctx.host, clearance(fun), "clearance");
      return fun;
    }
    case ExprKind::App: {
      require_host(ctx, "App");
      TypePtr ft = typecheck_expr(ctx, e->e1);
      if (ft->kind != TypeKind::Fun)
        throw TypeError("App", "applied expression has non-function type " + to_string(ft));
      TypePtr at = typecheck_expr(ctx, e->e2);
      require_type_eq("App", at, ft->a, "argument type");
      require_flows(ctx, "App", ctx.pc, ft->label, "pc flow");
      return ft->b;
    }
    case ExprKind::TLam: {
      require_host(ctx, "TLam");
      TypePtr body_t =
          typecheck_expr(ctx.with_tvar(e->var).with_pc(e->label), e->e1);
      TypePtr fa = t_forall(e->var, e->label, body_t);
      require_acts_for(ctx, "TLam", ctx.host, clearance(fa), "clearance");
      return fa;
    }
    case ExprKind::TApp: {
      require_host(ctx, "TApp");
      TypePtr ft = typecheck_expr(ctx, e->e1);
      if (ft->kind != TypeKind::Forall)
        throw TypeError("TApp", "applied expression has non-forall type " + to_string(ft));
      std::vector<std::string> bound, fv;
      type_free_vars(e->type, bound, fv);
      for (auto& v : fv)
        if (!ctx.type_vars.count(v))
          throw TypeError("TApp", "type argument not well-formed: free variable " + v);
      require_flows(ctx, "TApp", ctx.pc, ft->label, "pc flow");
      return type_subst(ft->a, ft->var, e->type);
    }

    case ExprKind::Pair: {
      require_host(ctx, "Pair");
      if (!e->type || e->type->kind != TypeKind::Prod)
        throw TypeError("Pair", "pair annotation is not a product type");
      TypePtr l = typecheck_expr(ctx, e->e1);
      TypePtr r = typecheck_expr(ctx, e->e2);
      require_type_eq("Pair", l, e->type->a, "first component");
      require_type_eq("Pair", r, e->type->b, "second component");
      return e->type;
    }
    case ExprKind::Proj: {
      require_host(ctx, "UnPair");
      TypePtr t = typecheck_expr(ctx, e->e1);
      if (t->kind != TypeKind::Prod)
        throw TypeError("UnPair", "projection of non-product type " + to_string(t));
      return e->index == 1 ? t->a : t->b;
    }
    case ExprKind::Inj: {
      require_host(ctx, "Inj");
      if (!e->type || e->type->kind != TypeKind::Sum)
        throw TypeError("Inj", "injection annotation is not a sum type");
      TypePtr t = typecheck_expr(ctx, e->e1);
      require_type_eq("Inj", t, e->index == 1 ? e->type->a : e->type->b, "injected value");
      return e->type;
    }
    case ExprKind::Case: {
      require_host(ctx, "Case");
      TypePtr st = typecheck_expr(ctx, e->e1);
      if (st->kind != TypeKind::Sum)
        throw TypeError("Case", "case scrutinee has non-sum type " + to_string(st));
      TypePtr result = e->type;
      if (!protects(ctx.slv(), ctx.pc, result))
        throw TypeError("Case", "pc " + to_string(ctx.pc) + " is not protected by result type " +
                                    to_string(result));
      for (const TypePtr& ti : {st->a, st->b}) {
        require_acts_for(ctx, "Case", type_avail(ti), type_avail(result),
                         "branch availability");
      }
      TypePtr l = typecheck_expr(ctx.with_var(e->var, st->a), e->e2);
      TypePtr r = typecheck_expr(ctx.with_var(e->var, st->b), e->e3);
      require_type_eq("Case", l, result, "first branch");
      require_type_eq("Case", r, result, "second branch");
      return result;
    }

    case ExprKind::UnitM: {
      require_host(ctx, "UnitM");
      TypePtr t = typecheck_expr(ctx, e->e1);
      require_flows(ctx, "UnitM", ctx.pc, e->label, "pc flow into label");
      return t_says(e->label, t);
    }
    case ExprKind::Sealed: {
      // No pc-flow premise: closed values capture nothing from the context.
      require_host(ctx, "Sealed");
      if (!is_value(e->e1)) throw TypeError("Sealed", "sealed payload is not a value");
      TypePtr t = typecheck_expr(ctx, e->e1);
      return t_says(e->label, t);
    }
    case ExprKind::Bind: {
      require_host(ctx, "BindM");
      TypePtr rt = typecheck_expr(ctx, e->e1);
      if (rt->kind != TypeKind::Says)
        throw TypeError("BindM", "bind subject has unprotected type " + to_string(rt));
      PrinPtr raised = flow_join(rt->label, ctx.pc);
      TypePtr body_t =
          typecheck_expr(ctx.with_var(e->var, rt->a).with_pc(raised), e->e2);
      if (!protects(ctx.slv(), raised, body_t))
        throw TypeError("BindM", "label " + to_string(raised) +
                                     " is not protected by body type " + to_string(body_t));
      return body_t;
    }

    case ExprKind::Run: {
      require_host(ctx, "Run");
      if (!e->type || e->type->kind != TypeKind::Says)
        throw TypeError("Run", "run annotation must be a says type");
      PrinPtr remote = e->label;
      // The remote body runs with pc = the remote host principal, so the
      // annotation label must be that host's integrity-availability facet.
      PrinPtr want = canonical(p_reach(remote));
      if (!prin_eq(canonical(e->type->label), want))
        throw TypeError("Run", "run annotation label " + to_string(e->type->label) +
                                   " is not " + to_string(want));
      TypePtr body_t =
          typecheck_expr(ctx.with_pc(remote).with_host(remote), e->e1);
      require_type_eq("Run", body_t, e->type->a, "remote body type");
      require_flows(ctx, "Run", ctx.pc, remote, "pc flow to remote pc");
      require_acts_for(ctx, "Run", ctx.host, clearance(e->type->a), "return clearance");
      return e->type;
    }
    case ExprKind::RetTo: {
      require_host(ctx, "Ret");
      TypePtr t = typecheck_expr(ctx, e->e1);
      require_acts_for(ctx, "Ret", e->label, clearance(t), "receiver clearance");
      return t_says(canonical(p_reach(ctx.pc)), t);
    }

    case ExprKind::Compare: {
      require_host(ctx, "Compare");
      if (!e->type || e->type->kind != TypeKind::Says)
        throw TypeError("Compare", "compare annotation must be a says type");
      TypePtr l = typecheck_expr(ctx, e->e1);
      TypePtr r = typecheck_expr(ctx, e->e2);
      if (l->kind != TypeKind::Says || r->kind != TypeKind::Says)
        throw TypeError("Compare", "compare operands must have says types");
      require_type_eq("Compare", r->a, l->a, "compared payload types");
      for (const TypePtr& t : {l, r}) {
        if (!reads(ctx.slv(), ctx.host, t))
          throw TypeError("Compare", "host " + to_string(ctx.host) + " cannot read " +
                                         to_string(t));
      }
      PrinPtr want = compare_action(l->label, r->label);
      if (!prin_eq(canonical(e->type->label), want))
        throw TypeError("Compare", "annotation label " + to_string(e->type->label) +
                                       " is not the compare action " + to_string(want));
      require_type_eq("Compare", e->type->a, l->a, "annotation payload");
      return e->type;
    }
    case ExprKind::Select: {
      require_host(ctx, "Select");
      if (!e->type || e->type->kind != TypeKind::Says)
        throw TypeError("Select", "select annotation must be a says type");
      TypePtr l = typecheck_expr(ctx, e->e1);
      TypePtr r = typecheck_expr(ctx, e->e2);
      if (l->kind != TypeKind::Says || r->kind != TypeKind::Says)
        throw TypeError("Select", "select operands must have says types");
      require_type_eq("Select", r->a, l->a, "selected payload types");
      PrinPtr want = select_action(l->label, r->label);
      if (!prin_eq(canonical(e->type->label), want))
        throw TypeError("Select", "annotation label " + to_string(e->type->label) +
                                      " is not the select action " + to_string(want));
      require_type_eq("Select", e->type->a, l->a, "annotation payload");
      return e->type;
    }

    case ExprKind::Bracket:
    case ExprKind::Hole:
      throw TypeError("Bracket", "bracketed terms are not part of the local judgment");
  }
  throw TypeError("?", "unhandled expression form");
}

// --- stack and configuration judgments ---------------------------------------

struct StackType {
  TypePtr hole;    // tau'
  TypePtr result;  // tau
};

// Pi;Gamma;pc |- t : [tau']tau. The frame expressions are typed at the
// ambient pc, which is complete by pc reduction.
inline StackType typecheck_stack(const TypingCtx& ctx, const std::vector<Frame>& stack,
                                 const TypePtr& hole) {
  if (stack.empty()) return {hole, hole};  // Emp
  const Frame& top = stack.front();
  TypePtr ann = unique_expect_ann(top.ctx_expr);
  if (!ann) throw TypeError("Tail", "frame does not contain exactly one expect");
  if (!type_eq(ann, hole))
    throw TypeError("Tail", "frame expects " + to_string(ann) + " but hole type is " +
                                to_string(hole));
  TypePtr frame_t = typecheck_expr(ctx.with_host(top.host), top.ctx_expr);
  std::vector<Frame> rest(stack.begin() + 1, stack.end());
  StackType tail = typecheck_stack(ctx, rest, frame_t);
  return {hole, tail.result};
}

inline TypePtr typecheck_config(const TypingCtx& ctx, const GlobalConfig& g) {
  detail::require_host(ctx.with_host(g.host), "Head");
  TypePtr et = typecheck_expr(ctx.with_host(g.host), g.expr);
  return typecheck_stack(ctx, g.stack, et).result;
}

}  // namespace flaqr
