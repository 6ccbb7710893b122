#pragma once

// S-expression printers for types and expressions. parse(print(x)) == x for
// canonical-label trees; compound principals are emitted as quoted strings in
// the infix principal syntax.

#include <string>

#include "flaqr/ast.hpp"
#include "flaqr/principal.hpp"

namespace flaqr {

inline std::string prin_token(const PrinPtr& p) {
  std::string s = to_string(p);
  if (s.find(' ') == std::string::npos) return s;
  return "\"" + s + "\"";
}

inline void type_print(const TypePtr& t, std::string& out) {
  switch (t->kind) {
    case TypeKind::Unit: out += "unit"; return;
    case TypeKind::TVar: out += t->var; return;
    case TypeKind::Sum:
      out += "(sum ";
      type_print(t->a, out);
      out += ' ';
      type_print(t->b, out);
      out += ')';
      return;
    case TypeKind::Prod:
      out += "(prod ";
      type_print(t->a, out);
      out += ' ';
      type_print(t->b, out);
      out += ')';
      return;
    case TypeKind::Fun:
      out += "(fun ";
      type_print(t->a, out);
      out += ' ';
      out += prin_token(t->label);
      out += ' ';
      type_print(t->b, out);
      out += ')';
      return;
    case TypeKind::Forall:
      out += "(forall " + t->var + " " + prin_token(t->label) + " ";
      type_print(t->a, out);
      out += ')';
      return;
    case TypeKind::Says:
      out += "(says " + prin_token(t->label) + " ";
      type_print(t->a, out);
      out += ')';
      return;
  }
}

inline std::string to_string(const TypePtr& t) {
  std::string s;
  type_print(t, s);
  return s;
}

inline void expr_print(const ExprPtr& e, std::string& out) {
  auto sub = [&out](const ExprPtr& x) { expr_print(x, out); };
  switch (e->kind) {
    case ExprKind::Unit: out += "()"; return;
    case ExprKind::Var: out += e->var; return;
    case ExprKind::App:
      out += '(';
      sub(e->e1);
      out += ' ';
      sub(e->e2);
      out += ')';
      return;
    case ExprKind::TApp:
      out += "(tapp ";
      sub(e->e1);
      out += ' ' + to_string(e->type) + ')';
      return;
    case ExprKind::Lam:
      out += "(lam (" + e->var + " " + to_string(e->type) + " " + prin_token(e->label) + ") ";
      sub(e->e1);
      out += ')';
      return;
    case ExprKind::TLam:
      out += "(tlam " + e->var + " " + prin_token(e->label) + " ";
      sub(e->e1);
      out += ')';
      return;
    case ExprKind::Pair:
      out += "(pair ";
      sub(e->e1);
      out += ' ';
      sub(e->e2);
      out += ' ' + to_string(e->type) + ')';
      return;
    case ExprKind::Proj:
      out += e->index == 1 ? "(proj1 " : "(proj2 ";
      sub(e->e1);
      out += ')';
      return;
    case ExprKind::Inj:
      out += e->index == 1 ? "(inj1 " : "(inj2 ";
      out += to_string(e->type) + ' ';
      sub(e->e1);
      out += ')';
      return;
    case ExprKind::Case:
      out += "(case ";
      sub(e->e1);
      out += ' ' + e->var + ' ';
      sub(e->e2);
      out += ' ';
      sub(e->e3);
      out += ' ' + to_string(e->type) + ')';
      return;
    case ExprKind::UnitM:
      out += "(unitm " + prin_token(e->label) + " ";
      sub(e->e1);
      out += ')';
      return;
    case ExprKind::Sealed:
      out += "(sealed " + prin_token(e->label) + " ";
      sub(e->e1);
      out += ')';
      return;
    case ExprKind::Bind:
      out += "(bind " + e->var + " ";
      sub(e->e1);
      out += ' ';
      sub(e->e2);
      out += ')';
      return;
    case ExprKind::Run:
      out += "(run " + to_string(e->type) + " ";
      sub(e->e1);
      out += ' ' + prin_token(e->label) + ')';
      return;
    case ExprKind::RetTo:
      out += "(ret ";
      sub(e->e1);
      out += ' ' + prin_token(e->label) + ')';
      return;
    case ExprKind::Expect:
      out += "(expect " + to_string(e->type) + ')';
      return;
    case ExprKind::Select:
      out += "(select ";
      sub(e->e1);
      out += ' ';
      sub(e->e2);
      out += ' ' + to_string(e->type) + ')';
      return;
    case ExprKind::Compare:
      out += "(compare " + to_string(e->type) + ' ';
      sub(e->e1);
      out += ' ';
      sub(e->e2);
      out += ')';
      return;
    case ExprKind::Fail:
      out += "(fail " + to_string(e->type) + ')';
      return;
    case ExprKind::Bracket:
      out += "(bracket ";
      sub(e->e1);
      out += ' ';
      sub(e->e2);
      out += ')';
      return;
    case ExprKind::Hole:
      out += "hole";
      return;
    case ExprKind::Opaque:
      out += "@";
      return;
  }
}

inline std::string to_string(const ExprPtr& e) {
  std::string s;
  expr_print(e, s);
  return s;
}

}  // namespace flaqr
