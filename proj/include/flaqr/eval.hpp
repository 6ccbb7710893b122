#pragma once

// Small-step semantics: the deterministic local relation (standard rules plus
// fail propagation), the global configuration-stack relation, and a
// fuel-bounded driver with static fault injection at the run/return boundary.
//
// Redex selection is leftmost-innermost following the evaluation-context
// grammar; compare/select/pair evaluate the left operand to a value-or-fail
// before touching the right one. `run` has no local context: the global
// relation owns it.
//
// Bracketed terms (noninterference harness) reuse this engine with
// `brackets` enabled; the bracket-specific configuration rules live in
// bracket.hpp.

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>

#include "flaqr/ast.hpp"
#include "flaqr/config.hpp"
#include "flaqr/principal.hpp"

namespace flaqr {

// Type-directed closed value generator (byzantine substitutes).
inline ExprPtr gen_value(const TypePtr& t, std::mt19937_64& rng) {
  switch (t->kind) {
    case TypeKind::Unit:
      return e_unit();
    case TypeKind::Sum: {
      int i = (rng() & 1) ? 1 : 2;
      return e_inj(i, t, gen_value(i == 1 ? t->a : t->b, rng));
    }
    case TypeKind::Prod:
      return e_pair(gen_value(t->a, rng), gen_value(t->b, rng), t);
    case TypeKind::Says:
      return e_sealed(t->label, gen_value(t->a, rng));
    case TypeKind::Fun:
      return e_lam("_", t->a, t->label, gen_value(t->b, rng));
    case TypeKind::Forall:
      return e_tlam(t->var, t->label, gen_value(t->a, rng));
    case TypeKind::TVar:
      return e_unit();  // unreachable for closed types
  }
  return e_unit();
}

// Find the leftmost run in evaluation position; returns the context with the
// run replaced by its expect, filling body/host/annotation.
inline std::optional<ExprPtr> find_run_context(const ExprPtr& e, ExprPtr& body, PrinPtr& host,
                                               TypePtr& ann) {
  if (e->kind == ExprKind::Run) {
    body = e->e1;
    host = e->label;
    ann = e->type;
    return e_expect(e->type);
  }
  auto descend = [&](const ExprPtr& child) -> std::optional<ExprPtr> {
    if (!child) return std::nullopt;
    return find_run_context(child, body, host, ann);
  };
  auto rebuild = [&](const ExprPtr& nc, int which) -> ExprPtr {
    auto n = std::make_shared<Expr>(*e);
    n->hash_cache = 0;
    if (which == 1) n->e1 = nc;
    if (which == 2) n->e2 = nc;
    return n;
  };
  switch (e->kind) {
    case ExprKind::App:
    case ExprKind::Pair:
    case ExprKind::Select:
    case ExprKind::Compare:
      if (auto c = descend(e->e1)) return rebuild(*c, 1);
      if (is_final(e->e1))
        if (auto c = descend(e->e2)) return rebuild(*c, 2);
      return std::nullopt;
    case ExprKind::TApp:
    case ExprKind::Proj:
    case ExprKind::Inj:
    case ExprKind::UnitM:
    case ExprKind::RetTo:
    case ExprKind::Bind:
    case ExprKind::Case:
      if (auto c = descend(e->e1)) return rebuild(*c, 1);
      return std::nullopt;
    default:
      return std::nullopt;
  }
}

namespace detail {
// Project a bracketed term (projection of bracket-free terms is identity;
// full projection lives in bracket.hpp, this local copy keeps eval.hpp
// self-contained for the rules that need it).
inline ExprPtr proj_side(const ExprPtr& e, int k) {
  if (!e) return e;
  if (e->kind == ExprKind::Bracket) return proj_side(k == 1 ? e->e1 : e->e2, k);
  if (!e->e1 && !e->e2 && !e->e3) return e;
  auto n = std::make_shared<Expr>(*e);
  n->hash_cache = 0;
  n->e1 = proj_side(e->e1, k);
  n->e2 = proj_side(e->e2, k);
  n->e3 = proj_side(e->e3, k);
  return n;
}
}  // namespace detail

class StepEngine {
 public:
  bool brackets = false;
  const FaultPlan* plan = nullptr;
  // Invoked when two sealed values disagree under compare: payloads and the
  // two seal labels (the blame semantics' C-CompareFail site).
  std::function<void(const ExprPtr&, const ExprPtr&, const PrinPtr&, const PrinPtr&)>
      on_compare_fail;

  // --- local relation ---------------------------------------------------------

  // One deterministic local step; names the rule that fired.
  std::optional<ExprPtr> local_step(const ExprPtr& e, const char** rule = nullptr) {
    const char* dummy;
    if (!rule) rule = &dummy;
    return step(e, rule);
  }

  // --- global relation --------------------------------------------------------

  // One step of <e ; c ; t>; nullopt when terminal or stuck (callers
  // distinguish via is_final/stack emptiness).
  std::optional<GlobalConfig> global_step(const GlobalConfig& g, const char** rule = nullptr) {
    const char* dummy;
    if (!rule) rule = &dummy;

    // E-RetV / E-RetFail: a finished remote computation returns.
    if (g.expr->kind == ExprKind::RetTo && is_final(g.expr->e1) && !g.stack.empty()) {
      const Frame& top = g.stack.front();
      TypePtr ann = unique_expect_ann(top.ctx_expr);
      if (!ann || ann->kind != TypeKind::Says) return std::nullopt;  // stuck
      ExprPtr f = inject(g.expr->e1, ann, g.host);
      ExprPtr plugged;
      if (f->kind == ExprKind::Fail) {
        *rule = "E-RetFail";
        plugged = plug_expect(top.ctx_expr, e_fail(ann));
      } else {
        *rule = "E-RetV";
        plugged = plug_expect(top.ctx_expr, e_sealed(ann->label, f));
      }
      GlobalConfig next;
      next.expr = plugged;
      next.host = top.host;
      next.stack.assign(g.stack.begin() + 1, g.stack.end());
      return next;
    }

    // E-DStep
    if (auto s = local_step(g.expr, rule)) {
      GlobalConfig next = g;
      next.expr = *s;
      return next;
    }

    // E-Run: leftmost run redex.
    ExprPtr body;
    PrinPtr remote;
    TypePtr ann;
    if (auto ctx = find_run_context(g.expr, body, remote, ann)) {
      *rule = "E-Run";
      GlobalConfig next;
      next.expr = e_ret(body, g.host);
      next.host = remote;
      next.stack.reserve(g.stack.size() + 1);
      next.stack.push_back(Frame{*ctx, g.host});
      next.stack.insert(next.stack.end(), g.stack.begin(), g.stack.end());
      return next;
    }
    return std::nullopt;
  }

 private:
  std::map<std::string, uint64_t> byz_counters_;

  static ExprPtr seal_payload(const ExprPtr& sealed) { return sealed->e1; }

  // Fault injection at the return boundary. `ann` is the expect annotation
  // says(L, tau'); the crossing value or fail is replaced per the executing
  // host's fault mode.
  ExprPtr inject(const ExprPtr& f, const TypePtr& ann, const PrinPtr& remote_host) {
    if (!plan) return f;
    const FaultMode* m = plan->mode_of(remote_host);
    if (!m || m->kind == FaultKind::Honest) return f;
    switch (m->kind) {
      case FaultKind::Crash:
        return e_fail(ann->a);
      case FaultKind::ByzConst:
        return m->value;
      case FaultKind::ByzSeeded: {
        uint64_t n = byz_counters_[remote_host->name]++;
        std::mt19937_64 rng(m->seed * 0x9e3779b97f4a7c15ull + n + 1);
        return gen_value(ann->a, rng);
      }
      default:
        return f;
    }
  }

  // Wrap a final as the sealed/fail form E-RetV/E-RetFail would plug.
  // (Used by the bracket rules in bracket.hpp as well.)
 public:
  static ExprPtr ret_form(const ExprPtr& f, const TypePtr& says_ann) {
    if (f->kind == ExprKind::Fail) return e_fail(says_ann);
    return e_sealed(says_ann->label, f);
  }

 private:
  template <typename F>
  static ExprPtr rebuild1(const ExprPtr& e, F&& mk, const ExprPtr& c1) {
    return mk(c1);
  }

  std::optional<ExprPtr> step(const ExprPtr& e, const char** rule) {
    switch (e->kind) {
      case ExprKind::Unit:
      case ExprKind::Var:
      case ExprKind::Lam:
      case ExprKind::TLam:
      case ExprKind::Fail:
      case ExprKind::Expect:
      case ExprKind::Run:
      case ExprKind::Hole:
      case ExprKind::Opaque:
        return std::nullopt;

      case ExprKind::Sealed:
        return std::nullopt;  // sealed values wrap values by construction

      case ExprKind::Bracket: {
        if (!brackets) return std::nullopt;
        // B-Step: advance one side (left first).
        if (auto s = step(e->e1, rule)) {
          *rule = "B-Step";
          return e_bracket(*s, e->e2);
        }
        if (auto s = step(e->e2, rule)) {
          *rule = "B-Step";
          return e_bracket(e->e1, *s);
        }
        return std::nullopt;
      }

      case ExprKind::App: {
        if (auto s = step(e->e1, rule)) return e_app(*s, e->e2);
        if (e->e1->kind == ExprKind::Fail) {
          // E-AppFailL: failed function position, argument discarded.
          if (e->e1->type->kind != TypeKind::Fun) return std::nullopt;
          *rule = "E-AppFailL";
          return e_fail(e->e1->type->b);
        }
        if (!is_value(e->e1) && !(brackets && is_final(e->e1))) return std::nullopt;
        if (auto s = step(e->e2, rule)) return e_app(e->e1, *s);
        if (!is_final(e->e2)) return std::nullopt;
        if (brackets && e->e1->kind == ExprKind::Bracket) {
          *rule = "B-App";
          return e_bracket(e_app(e->e1->e1, detail::proj_side(e->e2, 1)),
                           e_app(e->e1->e2, detail::proj_side(e->e2, 2)));
        }
        if (e->e1->kind != ExprKind::Lam) return std::nullopt;
        if (e->e2->kind == ExprKind::Fail) {
          *rule = "E-AppFail";  // failure substituted like a value
          return expr_subst(e->e1->e1, e->e1->var, e->e2);
        }
        *rule = "E-App";
        return expr_subst(e->e1->e1, e->e1->var, e->e2);
      }

      case ExprKind::TApp: {
        if (auto s = step(e->e1, rule)) return e_tapp(*s, e->type);
        if (e->e1->kind == ExprKind::Fail) {
          if (e->e1->type->kind != TypeKind::Forall) return std::nullopt;
          *rule = "E-TAppFail";
          return e_fail(type_subst(e->e1->type->a, e->e1->type->var, e->type));
        }
        if (brackets && e->e1->kind == ExprKind::Bracket && is_final(e->e1)) {
          *rule = "B-TApp";
          return e_bracket(e_tapp(e->e1->e1, e->type), e_tapp(e->e1->e2, e->type));
        }
        if (e->e1->kind != ExprKind::TLam) return std::nullopt;
        *rule = "E-TApp";
        return expr_tsubst(e->e1->e1, e->e1->var, e->type);
      }

      case ExprKind::Pair: {
        if (auto s = step(e->e1, rule)) return e_pair(*s, e->e2, e->type);
        if (!is_final(e->e1)) return std::nullopt;
        if (auto s = step(e->e2, rule)) return e_pair(e->e1, *s, e->type);
        if (!is_final(e->e2)) return std::nullopt;
        if (e->e1->kind == ExprKind::Fail) {
          *rule = "E-PairFailL";
          return e_fail(e->type);
        }
        if (e->e2->kind == ExprKind::Fail) {
          *rule = "E-PairFailR";
          return e_fail(e->type);
        }
        return std::nullopt;  // a pair of values is a value
      }

      case ExprKind::Proj: {
        if (auto s = step(e->e1, rule)) return e_proj(e->index, *s);
        if (e->e1->kind == ExprKind::Fail) {
          if (e->e1->type->kind != TypeKind::Prod) return std::nullopt;
          *rule = "E-ProjFail";
          return e_fail(e->index == 1 ? e->e1->type->a : e->e1->type->b);
        }
        if (e->e1->kind != ExprKind::Pair || !is_value(e->e1)) return std::nullopt;
        *rule = "E-UnPair";
        return e->index == 1 ? e->e1->e1 : e->e1->e2;
      }

      case ExprKind::Inj: {
        if (auto s = step(e->e1, rule)) return e_inj(e->index, e->type, *s);
        if (e->e1->kind == ExprKind::Fail) {
          *rule = "E-InjFail";
          return e_fail(e->type);
        }
        return std::nullopt;
      }

      case ExprKind::Case: {
        if (auto s = step(e->e1, rule))
          return e_case(*s, e->var, e->e2, e->e3, e->type);
        if (e->e1->kind == ExprKind::Fail) {
          *rule = "E-CaseFail";
          return e_fail(e->type);
        }
        if (e->e1->kind != ExprKind::Inj || !is_value(e->e1)) return std::nullopt;
        *rule = "E-Case";
        return expr_subst(e->e1->index == 1 ? e->e2 : e->e3, e->var, e->e1->e1);
      }

      case ExprKind::UnitM: {
        if (auto s = step(e->e1, rule)) return e_unitm(e->label, *s);
        if (brackets && e->e1->kind == ExprKind::Bracket && is_final(e->e1)) {
          const ExprPtr& l = e->e1->e1;
          const ExprPtr& r = e->e1->e2;
          bool lf = l->kind == ExprKind::Fail, rf = r->kind == ExprKind::Fail;
          if (lf && rf) {
            *rule = "B-Fail";
            return e_fail(t_says(e->label, l->type));
          }
          *rule = lf ? "B-Fail2" : (rf ? "B-Fail1" : "B-Seal");
          auto side = [&](const ExprPtr& x) {
            return x->kind == ExprKind::Fail ? e_fail(t_says(e->label, x->type))
                                             : e_sealed(e->label, x);
          };
          return e_bracket(side(l), side(r));
        }
        if (e->e1->kind == ExprKind::Fail) {
          *rule = "E-SealedFail";
          return e_fail(t_says(e->label, e->e1->type));
        }
        if (!is_value(e->e1)) return std::nullopt;
        *rule = "E-Sealed";
        return e_sealed(e->label, e->e1);
      }

      case ExprKind::Bind: {
        if (auto s = step(e->e1, rule)) return e_bind(e->var, *s, e->e2);
        if (brackets && e->e1->kind == ExprKind::Bracket && is_final(e->e1)) {
          *rule = "B-BindM";
          return e_bracket(e_bind(e->var, e->e1->e1, detail::proj_side(e->e2, 1)),
                           e_bind(e->var, e->e1->e2, detail::proj_side(e->e2, 2)));
        }
        if (e->e1->kind == ExprKind::Sealed && is_value(e->e1)) {
          *rule = "E-BindM";
          return expr_subst(e->e2, e->var, e->e1->e1);
        }
        if (e->e1->kind == ExprKind::Fail) {
          // Failed protected value: the payload failure substitutes like a
          // value, mirroring E-AppFail.
          if (e->e1->type->kind != TypeKind::Says) return std::nullopt;
          *rule = "E-BindMFail";
          return expr_subst(e->e2, e->var, e_fail(e->e1->type->a));
        }
        return std::nullopt;
      }

      case ExprKind::RetTo: {
        if (auto s = step(e->e1, rule)) {
          *rule = "E-RetStep";
          return e_ret(*s, e->label);
        }
        return std::nullopt;
      }

      case ExprKind::Select: {
        if (auto s = step(e->e1, rule)) return e_select(*s, e->e2, e->type);
        if (!is_final(e->e1)) return std::nullopt;
        if (auto s = step(e->e2, rule)) return e_select(e->e1, *s, e->type);
        if (!is_final(e->e2)) return std::nullopt;
        if (!e->type || e->type->kind != TypeKind::Says) return std::nullopt;
        if (brackets &&
            (e->e1->kind == ExprKind::Bracket || e->e2->kind == ExprKind::Bracket))
          return common_rule(e, rule, "B-SelectCommon");
        if (e->e1->kind == ExprKind::Sealed) {
          *rule = "E-Select";
          return e_sealed(e->type->label, seal_payload(e->e1));
        }
        if (e->e2->kind == ExprKind::Sealed) {
          *rule = "E-Select";
          return e_sealed(e->type->label, seal_payload(e->e2));
        }
        if (e->e1->kind == ExprKind::Fail && e->e2->kind == ExprKind::Fail) {
          *rule = "E-SelectFail";
          return e_fail(e->type);
        }
        return std::nullopt;
      }

      case ExprKind::Compare: {
        if (auto s = step(e->e1, rule)) return e_compare(e->type, *s, e->e2);
        if (!is_final(e->e1)) return std::nullopt;
        if (auto s = step(e->e2, rule)) return e_compare(e->type, e->e1, *s);
        if (!is_final(e->e2)) return std::nullopt;
        if (!e->type || e->type->kind != TypeKind::Says) return std::nullopt;
        if (brackets &&
            (e->e1->kind == ExprKind::Bracket || e->e2->kind == ExprKind::Bracket))
          return common_rule(e, rule, "B-CompareCommon");
        if (e->e1->kind == ExprKind::Fail) {
          *rule = "E-CompareFailL";
          return e_fail(e->type);
        }
        if (e->e2->kind == ExprKind::Fail) {
          *rule = "E-CompareFailR";
          return e_fail(e->type);
        }
        if (e->e1->kind == ExprKind::Sealed && e->e2->kind == ExprKind::Sealed) {
          if (expr_eq(seal_payload(e->e1), seal_payload(e->e2))) {
            *rule = "E-Compare";
            return e_sealed(e->type->label, seal_payload(e->e1));
          }
          *rule = "E-CompareFail";
          if (on_compare_fail)
            on_compare_fail(seal_payload(e->e1), seal_payload(e->e2), e->e1->label,
                            e->e2->label);
          return e_fail(e->type);
        }
        return std::nullopt;
      }
    }
    return std::nullopt;
  }

  // B-CompareCommon / B-SelectCommon (and their one-sided variants): project
  // the whole node, take one plain step on each side, re-bracket.
  std::optional<ExprPtr> common_rule(const ExprPtr& e, const char** rule, const char* name) {
    StepEngine plain;
    plain.plan = plan;
    plain.on_compare_fail = on_compare_fail;
    ExprPtr sides[2];
    for (int k = 1; k <= 2; ++k) {
      ExprPtr proj = detail::proj_side(e, k);
      const char* sub;
      auto s = plain.step(proj, &sub);
      if (!s || !is_final(*s)) return std::nullopt;
      sides[k - 1] = *s;
    }
    *rule = name;
    return e_bracket(sides[0], sides[1]);
  }

};

// Plain one-step helpers.
inline std::optional<ExprPtr> local_step(const ExprPtr& e, const char** rule = nullptr) {
  StepEngine eng;
  return eng.local_step(e, rule);
}

enum class RunVerdict : uint8_t { Value, Failed, Timeout, Stuck };

struct RunOutcome {
  RunVerdict verdict;
  GlobalConfig final_config;
  uint64_t steps = 0;
};

inline RunOutcome run_to_completion(GlobalConfig g, const FaultPlan& plan, uint64_t fuel,
                                    StepEngine* engine = nullptr,
                                    std::vector<GlobalConfig>* trace = nullptr) {
  StepEngine local_engine;
  StepEngine& eng = engine ? *engine : local_engine;
  if (!eng.plan) eng.plan = &plan;
  uint64_t steps = 0;
  if (trace) trace->push_back(g);
  while (steps < fuel) {
    if (g.stack.empty() && is_final(g.expr) && g.expr->kind != ExprKind::RetTo) {
      return {g.expr->kind == ExprKind::Fail ? RunVerdict::Failed : RunVerdict::Value, g, steps};
    }
    auto next = eng.global_step(g);
    if (!next) {
      if (g.stack.empty() && is_final(g.expr))
        return {g.expr->kind == ExprKind::Fail ? RunVerdict::Failed : RunVerdict::Value, g,
                steps};
      return {RunVerdict::Stuck, g, steps};
    }
    g = std::move(*next);
    if (trace) trace->push_back(g);
    ++steps;
  }
  return {RunVerdict::Timeout, g, steps};
}

}  // namespace flaqr
