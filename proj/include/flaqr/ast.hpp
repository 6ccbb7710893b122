#pragma once

// FLAQR abstract syntax: types, fully annotated expressions, and the
// value/fail predicates. Brackets and the hole are harness-only forms used by
// the noninterference checker; the public parser never produces them.

#include <cassert>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "flaqr/principal.hpp"

namespace flaqr {

// --- types -------------------------------------------------------------------

enum class TypeKind : uint8_t { Unit, TVar, Sum, Prod, Fun, Forall, Says };

struct Type;
using TypePtr = std::shared_ptr<const Type>;

struct Type {
  TypeKind kind;
  std::string var;      // TVar, Forall binder
  PrinPtr label;        // Fun/Forall pc, Says label
  TypePtr a, b;         // children
  mutable size_t hash_cache = 0;

  explicit Type(TypeKind k) : kind(k) {}
};

inline TypePtr t_unit() {
  static TypePtr u = std::make_shared<Type>(TypeKind::Unit);
  return u;
}
inline TypePtr t_var(std::string x) {
  auto t = std::make_shared<Type>(TypeKind::TVar);
  t->var = std::move(x);
  return t;
}
inline TypePtr t_sum(TypePtr l, TypePtr r) {
  auto t = std::make_shared<Type>(TypeKind::Sum);
  t->a = std::move(l);
  t->b = std::move(r);
  return t;
}
inline TypePtr t_prod(TypePtr l, TypePtr r) {
  auto t = std::make_shared<Type>(TypeKind::Prod);
  t->a = std::move(l);
  t->b = std::move(r);
  return t;
}
inline TypePtr t_fun(TypePtr arg, PrinPtr pc, TypePtr ret) {
  auto t = std::make_shared<Type>(TypeKind::Fun);
  t->a = std::move(arg);
  t->label = std::move(pc);
  t->b = std::move(ret);
  return t;
}
inline TypePtr t_forall(std::string x, PrinPtr pc, TypePtr body) {
  auto t = std::make_shared<Type>(TypeKind::Forall);
  t->var = std::move(x);
  t->label = std::move(pc);
  t->a = std::move(body);
  return t;
}
inline TypePtr t_says(PrinPtr l, TypePtr body) {
  auto t = std::make_shared<Type>(TypeKind::Says);
  t->label = std::move(l);
  t->a = std::move(body);
  return t;
}

inline size_t type_hash(const TypePtr& t) {
  if (t->hash_cache != 0) return t->hash_cache;
  size_t h = (static_cast<size_t>(t->kind) + 3) * 0x100000001b3ull;
  auto mix = [&h](size_t v) { h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2); };
  switch (t->kind) {
    case TypeKind::Unit: break;
    case TypeKind::TVar: mix(std::hash<std::string>{}(t->var)); break;
    case TypeKind::Sum:
    case TypeKind::Prod:
      mix(type_hash(t->a));
      mix(type_hash(t->b));
      break;
    case TypeKind::Fun:
      mix(type_hash(t->a));
      mix(prin_hash(t->label));
      mix(type_hash(t->b));
      break;
    case TypeKind::Forall:
      // binder name excluded: hash is alpha-invariant enough for tables
      mix(prin_hash(t->label));
      mix(type_hash(t->a));
      break;
    case TypeKind::Says:
      mix(prin_hash(t->label));
      mix(type_hash(t->a));
      break;
  }
  if (h == 0) h = 1;
  t->hash_cache = h;
  return h;
}

namespace detail {
inline bool type_aeq(const TypePtr& x, const TypePtr& y,
                     std::vector<std::pair<std::string, std::string>>& binders) {
  if (x == y && binders.empty()) return true;
  if (x->kind != y->kind) return false;
  switch (x->kind) {
    case TypeKind::Unit: return true;
    case TypeKind::TVar: {
      for (auto it = binders.rbegin(); it != binders.rend(); ++it) {
        if (it->first == x->var || it->second == y->var)
          return it->first == x->var && it->second == y->var;
      }
      return x->var == y->var;
    }
    case TypeKind::Sum:
    case TypeKind::Prod:
      return type_aeq(x->a, y->a, binders) && type_aeq(x->b, y->b, binders);
    case TypeKind::Fun:
      return prin_eq(x->label, y->label) && type_aeq(x->a, y->a, binders) &&
             type_aeq(x->b, y->b, binders);
    case TypeKind::Forall: {
      if (!prin_eq(x->label, y->label)) return false;
      binders.emplace_back(x->var, y->var);
      bool r = type_aeq(x->a, y->a, binders);
      binders.pop_back();
      return r;
    }
    case TypeKind::Says:
      return prin_eq(x->label, y->label) && type_aeq(x->a, y->a, binders);
  }
  return false;
}
}  // namespace detail

// Alpha-equivalence; labels compared structurally (keep them canonical).
inline bool type_eq(const TypePtr& x, const TypePtr& y) {
  std::vector<std::pair<std::string, std::string>> binders;
  return detail::type_aeq(x, y, binders);
}

inline void type_free_vars(const TypePtr& t, std::vector<std::string>& bound,
                           std::vector<std::string>& out) {
  switch (t->kind) {
    case TypeKind::TVar: {
      for (auto& b : bound)
        if (b == t->var) return;
      out.push_back(t->var);
      return;
    }
    case TypeKind::Forall: {
      bound.push_back(t->var);
      type_free_vars(t->a, bound, out);
      bound.pop_back();
      return;
    }
    case TypeKind::Sum:
    case TypeKind::Prod:
    case TypeKind::Fun:
      type_free_vars(t->a, bound, out);
      type_free_vars(t->b, bound, out);
      return;
    case TypeKind::Says:
      type_free_vars(t->a, bound, out);
      return;
    case TypeKind::Unit:
      return;
  }
}

// t[X := s]; shadowing binders stop the substitution. Capture is avoided by
// renaming the binder when s mentions it free.
inline TypePtr type_subst(const TypePtr& t, const std::string& x, const TypePtr& s);

namespace detail {
inline TypePtr freshen_forall(const TypePtr& t, const std::string& avoid) {
  std::string nv = t->var + "'";
  while (nv == avoid) nv += "'";
  return t_forall(nv, t->label, type_subst(t->a, t->var, t_var(nv)));
}
}  // namespace detail

inline TypePtr type_subst(const TypePtr& t, const std::string& x, const TypePtr& s) {
  switch (t->kind) {
    case TypeKind::Unit: return t;
    case TypeKind::TVar: return t->var == x ? s : t;
    case TypeKind::Sum: return t_sum(type_subst(t->a, x, s), type_subst(t->b, x, s));
    case TypeKind::Prod: return t_prod(type_subst(t->a, x, s), type_subst(t->b, x, s));
    case TypeKind::Fun:
      return t_fun(type_subst(t->a, x, s), t->label, type_subst(t->b, x, s));
    case TypeKind::Forall: {
      if (t->var == x) return t;
      std::vector<std::string> bound, fv;
      type_free_vars(s, bound, fv);
      for (auto& v : fv)
        if (v == t->var) return type_subst(detail::freshen_forall(t, v), x, s);
      return t_forall(t->var, t->label, type_subst(t->a, x, s));
    }
    case TypeKind::Says: return t_says(t->label, type_subst(t->a, x, s));
  }
  return t;
}

// --- expressions ---------------------------------------------------------------

enum class ExprKind : uint8_t {
  Unit,
  Var,
  App,
  TApp,
  Lam,
  TLam,
  Pair,
  Proj,     // index 1 or 2
  Inj,      // index 1 or 2, sum annotation
  Case,     // annotation is the result type
  UnitM,    // eta_l e
  Sealed,   // sealed value, evaluation only
  Bind,
  Run,      // annotation says(pc'^{ia}, tau')
  RetTo,    // evaluation only
  Expect,   // evaluation only
  Select,   // annotation says(l1 (+) l2, tau)
  Compare,  // annotation says(l1 (*) l2, tau)
  Fail,     // typed failure marker
  Bracket,  // harness only
  Hole,     // harness only
  Opaque,   // observation-function stand-in for unobservable terms
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  ExprKind kind;
  std::string var;    // Var/Lam/TLam/Case/Bind binder names
  int index = 0;      // Proj/Inj
  PrinPtr label;      // UnitM/Sealed label, Lam/TLam pc, Run/RetTo host
  TypePtr type;       // annotations
  ExprPtr e1, e2, e3; // children
  mutable size_t hash_cache = 0;

  explicit Expr(ExprKind k) : kind(k) {}
};

namespace detail {
inline std::shared_ptr<Expr> mk(ExprKind k) { return std::make_shared<Expr>(k); }
}  // namespace detail

inline ExprPtr e_unit() {
  static ExprPtr u = detail::mk(ExprKind::Unit);
  return u;
}
inline ExprPtr e_var(std::string x) {
  auto e = detail::mk(ExprKind::Var);
  e->var = std::move(x);
  return e;
}
inline ExprPtr e_app(ExprPtr f, ExprPtr a) {
  auto e = detail::mk(ExprKind::App);
  e->e1 = std::move(f);
  e->e2 = std::move(a);
  return e;
}
inline ExprPtr e_tapp(ExprPtr f, TypePtr t) {
  auto e = detail::mk(ExprKind::TApp);
  e->e1 = std::move(f);
  e->type = std::move(t);
  return e;
}
inline ExprPtr e_lam(std::string x, TypePtr t, PrinPtr pc, ExprPtr body) {
  auto e = detail::mk(ExprKind::Lam);
  e->var = std::move(x);
  e->type = std::move(t);
  e->label = std::move(pc);
  e->e1 = std::move(body);
  return e;
}
inline ExprPtr e_tlam(std::string x, PrinPtr pc, ExprPtr body) {
  auto e = detail::mk(ExprKind::TLam);
  e->var = std::move(x);
  e->label = std::move(pc);
  e->e1 = std::move(body);
  return e;
}
inline ExprPtr e_pair(ExprPtr l, ExprPtr r, TypePtr ann) {
  auto e = detail::mk(ExprKind::Pair);
  e->e1 = std::move(l);
  e->e2 = std::move(r);
  e->type = std::move(ann);
  return e;
}
inline ExprPtr e_proj(int i, ExprPtr p) {
  auto e = detail::mk(ExprKind::Proj);
  e->index = i;
  e->e1 = std::move(p);
  return e;
}
inline ExprPtr e_inj(int i, TypePtr sum, ExprPtr body) {
  auto e = detail::mk(ExprKind::Inj);
  e->index = i;
  e->type = std::move(sum);
  e->e1 = std::move(body);
  return e;
}
inline ExprPtr e_case(ExprPtr scrut, std::string x, ExprPtr l, ExprPtr r, TypePtr result) {
  auto e = detail::mk(ExprKind::Case);
  e->e1 = std::move(scrut);
  e->var = std::move(x);
  e->e2 = std::move(l);
  e->e3 = std::move(r);
  e->type = std::move(result);
  return e;
}
inline ExprPtr e_unitm(PrinPtr l, ExprPtr body) {
  auto e = detail::mk(ExprKind::UnitM);
  e->label = std::move(l);
  e->e1 = std::move(body);
  return e;
}
inline ExprPtr e_sealed(PrinPtr l, ExprPtr v) {
  auto e = detail::mk(ExprKind::Sealed);
  e->label = std::move(l);
  e->e1 = std::move(v);
  return e;
}
inline ExprPtr e_bind(std::string x, ExprPtr rhs, ExprPtr body) {
  auto e = detail::mk(ExprKind::Bind);
  e->var = std::move(x);
  e->e1 = std::move(rhs);
  e->e2 = std::move(body);
  return e;
}
inline ExprPtr e_run(TypePtr ann, ExprPtr body, PrinPtr host) {
  auto e = detail::mk(ExprKind::Run);
  e->type = std::move(ann);
  e->e1 = std::move(body);
  e->label = std::move(host);
  return e;
}
inline ExprPtr e_ret(ExprPtr body, PrinPtr host) {
  auto e = detail::mk(ExprKind::RetTo);
  e->e1 = std::move(body);
  e->label = std::move(host);
  return e;
}
inline ExprPtr e_expect(TypePtr ann) {
  auto e = detail::mk(ExprKind::Expect);
  e->type = std::move(ann);
  return e;
}
inline ExprPtr e_select(ExprPtr l, ExprPtr r, TypePtr ann) {
  auto e = detail::mk(ExprKind::Select);
  e->e1 = std::move(l);
  e->e2 = std::move(r);
  e->type = std::move(ann);
  return e;
}
inline ExprPtr e_compare(TypePtr ann, ExprPtr l, ExprPtr r) {
  auto e = detail::mk(ExprKind::Compare);
  e->type = std::move(ann);
  e->e1 = std::move(l);
  e->e2 = std::move(r);
  return e;
}
inline ExprPtr e_fail(TypePtr ann) {
  auto e = detail::mk(ExprKind::Fail);
  e->type = std::move(ann);
  return e;
}
inline ExprPtr e_bracket(ExprPtr l, ExprPtr r) {
  auto e = detail::mk(ExprKind::Bracket);
  e->e1 = std::move(l);
  e->e2 = std::move(r);
  return e;
}
inline ExprPtr e_hole() {
  static ExprPtr h = detail::mk(ExprKind::Hole);
  return h;
}
inline ExprPtr e_opaque() {
  static ExprPtr o = detail::mk(ExprKind::Opaque);
  return o;
}

// --- predicates ----------------------------------------------------------------

inline bool is_value(const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::Unit:
    case ExprKind::Lam:
    case ExprKind::TLam:
      return true;
    case ExprKind::Sealed:
    case ExprKind::Inj:
      return is_value(e->e1);
    case ExprKind::Pair:
      return is_value(e->e1) && is_value(e->e2);
    case ExprKind::Bracket:
      return is_value(e->e1) && is_value(e->e2);
    default:
      return false;
  }
}

// f ::= v | fail tau (| bracket of two finals, in the harness)
inline bool is_final(const ExprPtr& e) {
  if (e->kind == ExprKind::Fail) return true;
  if (e->kind == ExprKind::Bracket) return is_final(e->e1) && is_final(e->e2);
  return is_value(e);
}

// Source-level terms carry no evaluation or harness forms.
inline bool is_source_level(const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::Sealed:
    case ExprKind::Fail:
    case ExprKind::RetTo:
    case ExprKind::Expect:
    case ExprKind::Bracket:
    case ExprKind::Hole:
      return false;
    default:
      break;
  }
  for (auto& c : {e->e1, e->e2, e->e3})
    if (c && !is_source_level(c)) return false;
  return true;
}

inline size_t expr_hash(const ExprPtr& e) {
  if (e->hash_cache != 0) return e->hash_cache;
  size_t h = (static_cast<size_t>(e->kind) + 5) * 0xcbf29ce484222325ull;
  auto mix = [&h](size_t v) { h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2); };
  mix(std::hash<std::string>{}(e->var));
  mix(static_cast<size_t>(e->index));
  if (e->label) mix(prin_hash(e->label));
  if (e->type) mix(type_hash(e->type));
  for (auto& c : {e->e1, e->e2, e->e3})
    if (c) mix(expr_hash(c));
  if (h == 0) h = 1;
  e->hash_cache = h;
  return h;
}

// Syntactic equality (binder names included); this is the equality the
// compare rule applies to runtime values.
inline bool expr_eq(const ExprPtr& x, const ExprPtr& y) {
  if (x == y) return true;
  if (x->kind != y->kind || x->index != y->index || x->var != y->var) return false;
  if (x->hash_cache != 0 && y->hash_cache != 0 && x->hash_cache != y->hash_cache) return false;
  if ((x->label != nullptr) != (y->label != nullptr)) return false;
  if (x->label && !prin_eq(x->label, y->label)) return false;
  if ((x->type != nullptr) != (y->type != nullptr)) return false;
  if (x->type && !type_eq(x->type, y->type)) return false;
  for (auto [cx, cy] : {std::pair{x->e1, y->e1}, {x->e2, y->e2}, {x->e3, y->e3}}) {
    if ((cx != nullptr) != (cy != nullptr)) return false;
    if (cx && !expr_eq(cx, cy)) return false;
  }
  return true;
}

// e[x := v]. Evaluation only substitutes closed terms, so plain
// shadowing-aware replacement is enough.
inline ExprPtr expr_subst(const ExprPtr& e, const std::string& x, const ExprPtr& v) {
  switch (e->kind) {
    case ExprKind::Var:
      return e->var == x ? v : e;
    case ExprKind::Lam:
      if (e->var == x) return e;
      return e_lam(e->var, e->type, e->label, expr_subst(e->e1, x, v));
    case ExprKind::TLam:
      return e_tlam(e->var, e->label, expr_subst(e->e1, x, v));
    case ExprKind::Bind:
      return e_bind(e->var, expr_subst(e->e1, x, v),
                    e->var == x ? e->e2 : expr_subst(e->e2, x, v));
    case ExprKind::Case:
      return e_case(expr_subst(e->e1, x, v), e->var,
                    e->var == x ? e->e2 : expr_subst(e->e2, x, v),
                    e->var == x ? e->e3 : expr_subst(e->e3, x, v), e->type);
    default: {
      if (!e->e1 && !e->e2 && !e->e3) return e;
      auto n = std::make_shared<Expr>(*e);
      n->hash_cache = 0;
      if (e->e1) n->e1 = expr_subst(e->e1, x, v);
      if (e->e2) n->e2 = expr_subst(e->e2, x, v);
      if (e->e3) n->e3 = expr_subst(e->e3, x, v);
      return n;
    }
  }
}

// e[X := t] over all type annotations (TApp reduction).
inline ExprPtr expr_tsubst(const ExprPtr& e, const std::string& x, const TypePtr& t) {
  if (e->kind == ExprKind::TLam && e->var == x) return e;
  auto n = std::make_shared<Expr>(*e);
  n->hash_cache = 0;
  if (e->type) n->type = type_subst(e->type, x, t);
  if (e->e1) n->e1 = expr_tsubst(e->e1, x, t);
  if (e->e2) n->e2 = expr_tsubst(e->e2, x, t);
  if (e->e3) n->e3 = expr_tsubst(e->e3, x, t);
  return n;
}

}  // namespace flaqr
