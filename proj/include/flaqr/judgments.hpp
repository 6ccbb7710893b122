#pragma once

// Auxiliary type-level judgments: clearance UB(tau), availability tau^a,
// protection l <= tau, reads p |> tau, fails l |>> tau, and the bracket
// erasure function C(tau).

#include "flaqr/actsfor.hpp"
#include "flaqr/ast.hpp"
#include "flaqr/principal.hpp"

namespace flaqr {

// Clearance: upper bound (authority-lattice join) of the pc annotations in a
// type. UB(unit) = bot, so a host clears a type iff it acts for every pc
// annotation inside it.
inline PrinPtr clearance(const TypePtr& t) {
  switch (t->kind) {
    case TypeKind::Unit:
    case TypeKind::TVar:
      return p_bot();
    case TypeKind::Sum:
    case TypeKind::Prod:
      return canonical(p_and(clearance(t->a), clearance(t->b)));
    case TypeKind::Fun:
      return canonical(p_and(clearance(t->a), p_and(t->label, clearance(t->b))));
    case TypeKind::Forall:
      return canonical(p_and(t->label, clearance(t->a)));
    case TypeKind::Says:
      return clearance(t->a);
  }
  return p_bot();
}

// Availability of a type, (tau)^a. unit (and type variables) carry top
// availability; says layers join in their label's availability facet.
inline PrinPtr type_avail(const TypePtr& t) {
  switch (t->kind) {
    case TypeKind::Unit:
    case TypeKind::TVar:
      return canonical(p_top());
    case TypeKind::Sum:
    case TypeKind::Prod:
      return flow_join(type_avail(t->a), type_avail(t->b));
    case TypeKind::Says:
      return flow_join(p_proj(t->label, Facet::A), type_avail(t->a));
    case TypeKind::Fun:
      return flow_join(type_avail(t->a),
                       flow_join(p_proj(t->label, Facet::A), type_avail(t->b)));
    case TypeKind::Forall:
      return flow_join(p_proj(t->label, Facet::A), type_avail(t->a));
  }
  return canonical(p_top());
}

// Protection: l flows to tau (P-Unit, P-Pair, P-Fun, P-TFun, P-Lbl).
// Sums and type variables are never protected.
inline bool protects(ActsForSolver& s, const PrinPtr& l, const TypePtr& t) {
  switch (t->kind) {
    case TypeKind::Unit:
      return true;
    case TypeKind::Prod:
      return protects(s, l, t->a) && protects(s, l, t->b);
    case TypeKind::Fun:
      return protects(s, l, t->b) && flows_to(s, l, t->label);
    case TypeKind::Forall:
      return protects(s, l, t->a) && flows_to(s, l, t->label);
    case TypeKind::Says:
      return flows_to(s, l, t->label);
    default:
      return false;
  }
}

// Reads: p |> tau. R-Lbl demands the reader's confidentiality authority for
// every says layer.
inline bool reads(ActsForSolver& s, const PrinPtr& p, const TypePtr& t) {
  switch (t->kind) {
    case TypeKind::Unit:
      return true;
    case TypeKind::Sum:
    case TypeKind::Prod:
      return reads(s, p, t->a) && reads(s, p, t->b);
    case TypeKind::Says:
      return s.acts_for(p_proj(p, Facet::C), p_proj(t->label, Facet::C)) &&
             reads(s, p, t->a);
    case TypeKind::Fun:
      return reads(s, p, t->a) && reads(s, p, t->b);
    case TypeKind::Forall:
      return reads(s, p, t->a);
    default:
      return false;
  }
}

namespace detail {
// A-IntegCom keys on a compare-shaped label: its integrity facet has a
// partial conjunction at top level. Returns the two operand integrity parts.
inline bool integ_compare_parts(const PrinPtr& label, PrinPtr& i1, PrinPtr& i2) {
  PrinPtr ip = facet_component(label, Facet::I);
  if (ip->kind != PrinKind::PAnd) return false;
  i1 = ip->a;
  i2 = ip->b;
  return true;
}
}  // namespace detail

// Fails: l |>> tau, "l can force a term of type tau to fail".
inline bool fails(ActsForSolver& s, const PrinPtr& l, const TypePtr& t) {
  switch (t->kind) {
    case TypeKind::Prod:
    case TypeKind::Sum:
      return fails(s, l, t->a) || fails(s, l, t->b);  // A-Pair / A-Sum
    case TypeKind::Fun:
      return fails(s, l, t->b);  // A-Fun
    case TypeKind::Says: {
      // A-Avail
      if (s.acts_for(p_proj(l, Facet::A), p_proj(t->label, Facet::A))) return true;
      // A-IntegCom
      PrinPtr i1, i2;
      if (detail::integ_compare_parts(t->label, i1, i2)) {
        if (s.acts_for(p_proj(l, Facet::I), i1) || s.acts_for(p_proj(l, Facet::I), i2))
          return true;
      }
      // A-Type
      return fails(s, l, t->a);
    }
    default:
      return false;
  }
}

namespace detail {
// Facet-wise collapse of the partial operators: top-level (*) becomes /\ and
// (+) becomes \/ within each facet component of a label.
inline PrinPtr collapse_partial(const PrinPtr& facet_part) {
  switch (facet_part->kind) {
    case PrinKind::PAnd:
      return p_and(facet_part->a, facet_part->b);
    case PrinKind::POr:
      return p_or(facet_part->a, facet_part->b);
    default:
      return facet_part;
  }
}
}  // namespace detail

inline PrinPtr cfun_label(const PrinPtr& l) {
  PrinPtr c = detail::collapse_partial(facet_component(l, Facet::C));
  PrinPtr i = detail::collapse_partial(facet_component(l, Facet::I));
  PrinPtr a = detail::collapse_partial(facet_component(l, Facet::A));
  return canonical(p_and(c, p_and(i, a)));
}

// C(tau): rewrite (+)-labelled says to \/ and (*)-labelled says to /\,
// recursively.
inline TypePtr cfun(const TypePtr& t) {
  switch (t->kind) {
    case TypeKind::Unit:
    case TypeKind::TVar:
      return t;
    case TypeKind::Sum:
      return t_sum(cfun(t->a), cfun(t->b));
    case TypeKind::Prod:
      return t_prod(cfun(t->a), cfun(t->b));
    case TypeKind::Fun:
      return t_fun(cfun(t->a), t->label, cfun(t->b));
    case TypeKind::Forall:
      return t_forall(t->var, t->label, cfun(t->a));
    case TypeKind::Says:
      return t_says(cfun_label(t->label), cfun(t->a));
  }
  return t;
}

// Convenience wrappers building a one-shot solver.
inline bool protects(const DelegationContext& ctx, const PrinPtr& l, const TypePtr& t) {
  ActsForSolver s(ctx);
  return protects(s, l, t);
}
inline bool reads(const DelegationContext& ctx, const PrinPtr& p, const TypePtr& t) {
  ActsForSolver s(ctx);
  return reads(s, p, t);
}
inline bool fails(const DelegationContext& ctx, const PrinPtr& l, const TypePtr& t) {
  ActsForSolver s(ctx);
  return fails(s, l, t);
}

}  // namespace flaqr
