#pragma once

// Blame constraints: DNF formulas over "l is faulty" atoms, entailment, the
// LFL update run on failed compares, and the AND distribution helper.
// Constraints stay in disjunctive normal form: a list of atom sets, each set
// one possible faulty set. Syntactically duplicate disjuncts are merged.

#include <algorithm>
#include <string>
#include <vector>

#include "flaqr/actsfor.hpp"
#include "flaqr/ast.hpp"
#include "flaqr/principal.hpp"

namespace flaqr {

// One disjunct: a set of canonical atoms, sorted for set semantics.
using FaultySet = std::vector<PrinPtr>;

struct BlameConstraint {
  // F = empty-set marker (no constraint yet) vs. a DNF formula. A formula
  // with zero disjuncts is unsatisfiable: any failure violates expectations.
  bool is_empty_marker = true;
  std::vector<FaultySet> disjuncts;

  static BlameConstraint empty() { return {}; }
  static BlameConstraint unsatisfiable() { return {false, {}}; }
};

namespace detail {

inline void set_insert(FaultySet& s, const PrinPtr& atom) {
  PrinPtr c = canonical(atom);
  auto it = std::lower_bound(s.begin(), s.end(), c,
                             [](const PrinPtr& a, const PrinPtr& b) { return prin_cmp(a, b) < 0; });
  if (it != s.end() && prin_eq(*it, c)) return;
  s.insert(it, c);
}

inline bool set_eq(const FaultySet& a, const FaultySet& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!prin_eq(a[i], b[i])) return false;
  return true;
}

inline void dedup_disjuncts(std::vector<FaultySet>& ds) {
  std::vector<FaultySet> out;
  for (auto& d : ds) {
    bool dup = false;
    for (auto& o : out)
      if (set_eq(o, d)) { dup = true; break; }
    if (!dup) out.push_back(std::move(d));
  }
  ds = std::move(out);
}

// Primitive names occurring in a principal (the base hosts of a toleration
// element |>(p1 /\ ... /\ pk)).
inline void primitive_names(const PrinPtr& p, std::vector<std::string>& out) {
  switch (p->kind) {
    case PrinKind::Primitive:
      if (std::find(out.begin(), out.end(), p->name) == out.end()) out.push_back(p->name);
      return;
    case PrinKind::Proj:
      primitive_names(p->a, out);
      return;
    case PrinKind::Top:
    case PrinKind::Bot:
      return;
    default:
      primitive_names(p->a, out);
      primitive_names(p->b, out);
  }
}

}  // namespace detail

// B_init: one disjunct per toleration element, atoms the element's primitive
// conjuncts. An empty toleration set yields the unsatisfiable marker.
inline BlameConstraint init_blame(const std::vector<PrinPtr>& toleration) {
  if (toleration.empty()) return BlameConstraint::unsatisfiable();
  BlameConstraint b;
  b.is_empty_marker = false;
  for (auto& t : toleration) {
    std::vector<std::string> names;
    detail::primitive_names(t, names);
    std::sort(names.begin(), names.end());
    FaultySet s;
    for (auto& n : names) detail::set_insert(s, p_prim(n));
    b.disjuncts.push_back(std::move(s));
  }
  detail::dedup_disjuncts(b.disjuncts);
  return b;
}

// B entails l in F: every disjunct has some atom acting for l (C-In/C-Or/C-AndL).
inline bool entails(ActsForSolver& s, const BlameConstraint& b, const PrinPtr& l) {
  if (b.is_empty_marker) return false;
  PrinPtr cl = canonical(l);
  for (auto& d : b.disjuncts) {
    bool found = false;
    for (auto& atom : d)
      if (s.acts_for(atom, cl)) { found = true; break; }
    if (!found) return false;
  }
  return true;
}

// AND function: distribute one atom into a constraint, staying in DNF.
inline BlameConstraint and_atom(const PrinPtr& l, const BlameConstraint& b) {
  BlameConstraint out;
  out.is_empty_marker = false;
  if (b.is_empty_marker) {
    FaultySet s;
    detail::set_insert(s, l);
    out.disjuncts.push_back(std::move(s));
    return out;
  }
  out.disjuncts = b.disjuncts;
  for (auto& d : out.disjuncts) detail::set_insert(d, l);
  detail::dedup_disjuncts(out.disjuncts);
  return out;
}

inline BlameConstraint blame_or(const BlameConstraint& a, const BlameConstraint& b) {
  if (a.is_empty_marker) return b;
  if (b.is_empty_marker) return a;
  BlameConstraint out;
  out.is_empty_marker = false;
  out.disjuncts = a.disjuncts;
  out.disjuncts.insert(out.disjuncts.end(), b.disjuncts.begin(), b.disjuncts.end());
  detail::dedup_disjuncts(out.disjuncts);
  return out;
}

// LFL: update the constraint for a failed compare of f1 against f2 whose
// outer seals were l1 and l2. Recurses through matching structure; the
// deepest protecting label found is blamed, with short-circuits whenever one
// of the candidates is already known faulty.
inline BlameConstraint lfl(ActsForSolver& s, const ExprPtr& f1, const ExprPtr& f2,
                           const BlameConstraint& b, const PrinPtr& l1, const PrinPtr& l2) {
  auto both = [&](ExprKind k) { return f1->kind == k && f2->kind == k; };

  if (both(ExprKind::Sealed) && prin_eq(canonical(f1->label), canonical(f2->label))) {
    if (entails(s, b, l1)) return b;
    if (entails(s, b, l2)) return b;
    if (entails(s, b, f1->label)) return b;
    return lfl(s, f1->e1, f2->e1, b, f1->label, f2->label);
  }
  if (both(ExprKind::UnitM) && prin_eq(canonical(f1->label), canonical(f2->label)))
    return lfl(s, f1->e1, f2->e1, b, l1, l2);
  if (both(ExprKind::Inj) && f1->index == f2->index && type_eq(f1->type, f2->type))
    return lfl(s, f1->e1, f2->e1, b, l1, l2);
  if (both(ExprKind::Pair) && type_eq(f1->type, f2->type))
    return lfl(s, f1->e1, f2->e1, lfl(s, f1->e2, f2->e2, b, l1, l2), l1, l2);
  if (both(ExprKind::Run) && type_eq(f1->type, f2->type) &&
      prin_eq(canonical(f1->label), canonical(f2->label)))
    return lfl(s, f1->e1, f2->e1, b, l1, l2);
  if (both(ExprKind::Select) && type_eq(f1->type, f2->type))
    return lfl(s, f1->e1, f2->e1, lfl(s, f1->e2, f2->e2, b, l1, l2), l1, l2);
  if (both(ExprKind::Compare) && type_eq(f1->type, f2->type))
    return lfl(s, f1->e1, f2->e1, lfl(s, f1->e2, f2->e2, b, l1, l2), l1, l2);
  if (both(ExprKind::Lam) && f1->var == f2->var && type_eq(f1->type, f2->type) &&
      prin_eq(canonical(f1->label), canonical(f2->label)))
    return lfl(s, f1->e1, f2->e1, b, l1, l2);
  if (both(ExprKind::TLam) && f1->var == f2->var &&
      prin_eq(canonical(f1->label), canonical(f2->label)))
    return lfl(s, f1->e1, f2->e1, b, l1, l2);
  if (both(ExprKind::Proj) && f1->index == f2->index)
    return lfl(s, f1->e1, f2->e1, b, l1, l2);
  if (both(ExprKind::Bind) && f1->var == f2->var)
    return lfl(s, f1->e1, f2->e1, lfl(s, f1->e2, f2->e2, b, l1, l2), l1, l2);
  if (both(ExprKind::Case) && f1->var == f2->var && type_eq(f1->type, f2->type))
    return lfl(s, f1->e1, f2->e1,
               lfl(s, f1->e2, f2->e2, lfl(s, f1->e3, f2->e3, b, l1, l2), l1, l2), l1, l2);

  // final case
  if (expr_eq(f1, f2)) return b;
  if (entails(s, b, l1)) return b;
  if (entails(s, b, l2)) return b;
  return blame_or(and_atom(l1, b), and_atom(l2, b));
}

// Order-insensitive constraint equality.
inline bool blame_eq(const BlameConstraint& a, const BlameConstraint& b) {
  if (a.is_empty_marker != b.is_empty_marker) return false;
  if (a.disjuncts.size() != b.disjuncts.size()) return false;
  for (auto& d : a.disjuncts) {
    bool found = false;
    for (auto& e : b.disjuncts)
      if (detail::set_eq(d, e)) { found = true; break; }
    if (!found) return false;
  }
  return true;
}

inline std::string to_string(const BlameConstraint& b) {
  if (b.is_empty_marker) return "F = {}";
  if (b.disjuncts.empty()) return "false";
  std::string out;
  for (size_t i = 0; i < b.disjuncts.size(); ++i) {
    if (i) out += " | ";
    out += '{';
    for (size_t j = 0; j < b.disjuncts[i].size(); ++j) {
      if (j) out += ',';
      out += to_string(b.disjuncts[i][j]);
    }
    out += '}';
  }
  return out;
}

}  // namespace flaqr
