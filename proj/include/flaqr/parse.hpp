#pragma once

// Parsers for the textual principal syntax, the s-expression type and
// expression syntax, and whole source files with embedded pragmas. Every
// principal annotation is canonicalized on construction, so structural
// equality downstream compares canonical labels. Errors carry line:col.
//
// Principal grammar (loosest to tightest):  glb  lub  \/  /\  (+)  (*)  ^
//   p := 'top' | 'bot' | ident | '(' p ')' | p '^' [cia]+
//        | p '(*)' p | p '(+)' p | p '/\' p | p '\/' p | p 'lub' p | p 'glb' p
//
// Expression forms: (), identifiers, (e1 e2), (lam (x TYPE pc) e),
// (tlam X pc e), (tapp e TYPE), (pair e1 e2 TYPE), (proj1 e), (proj2 e),
// (inj1 TYPE e), (inj2 TYPE e), (case e x e1 e2 TYPE), (unitm l e),
// (sealed l v), (bind x e1 e2), (run TYPE e host), (ret e host),
// (expect TYPE), (select e1 e2 TYPE), (compare TYPE e1 e2), (fail TYPE).
// Brackets and holes have no concrete syntax; only the harness builds them.

#include <cctype>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "flaqr/actsfor.hpp"
#include "flaqr/ast.hpp"
#include "flaqr/principal.hpp"

namespace flaqr {

struct ParseError : std::runtime_error {
  int line, col;
  ParseError(const std::string& msg, int l, int c)
      : std::runtime_error(msg + " at " + std::to_string(l) + ":" + std::to_string(c)),
        line(l), col(c) {}
};

// --- principal text parser ----------------------------------------------------

namespace detail {

struct PrinLexer {
  const std::string& src;
  size_t pos = 0;
  int line = 1, col = 1;

  explicit PrinLexer(const std::string& s) : src(s) {}

  void advance(size_t n) {
    for (size_t i = 0; i < n && pos < src.size(); ++i, ++pos) {
      if (src[pos] == '\n') { ++line; col = 1; } else { ++col; }
    }
  }
  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) advance(1);
  }
  bool starts_with(const char* s) const {
    return src.compare(pos, std::char_traits<char>::length(s), s) == 0;
  }

  // token kinds: op strings, idents, '(', ')', end
  std::string peek_op() {
    skip_ws();
    for (const char* op : {"(*)", "(+)", "/\\", "\\/"})
      if (starts_with(op)) return op;
    if (starts_with("lub") || starts_with("glb")) {
      // word operators must not be an identifier prefix
      size_t end = pos + 3;
      if (end >= src.size() || !(std::isalnum(static_cast<unsigned char>(src[end])) ||
                                 src[end] == '_' || src[end] == '\''))
        return src.substr(pos, 3);
    }
    return "";
  }
};

inline PrinPtr parse_prin_level(PrinLexer& lx, int level);

inline PrinPtr parse_prin_primary(PrinLexer& lx) {
  lx.skip_ws();
  if (lx.pos >= lx.src.size()) throw ParseError("expected principal", lx.line, lx.col);
  char ch = lx.src[lx.pos];
  PrinPtr base;
  if (ch == '(') {
    lx.advance(1);
    base = parse_prin_level(lx, 0);
    lx.skip_ws();
    if (lx.pos >= lx.src.size() || lx.src[lx.pos] != ')')
      throw ParseError("expected ')'", lx.line, lx.col);
    lx.advance(1);
  } else if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
    size_t start = lx.pos;
    while (lx.pos < lx.src.size() &&
           (std::isalnum(static_cast<unsigned char>(lx.src[lx.pos])) ||
            lx.src[lx.pos] == '_' || lx.src[lx.pos] == '\''))
      lx.advance(1);
    std::string name = lx.src.substr(start, lx.pos - start);
    if (name == "top") base = p_top();
    else if (name == "bot") base = p_bot();
    else if (name == "lub" || name == "glb")
      throw ParseError("operator '" + name + "' needs a left operand", lx.line, lx.col);
    else base = p_prim(name);
  } else {
    throw ParseError(std::string("unexpected character '") + ch + "' in principal",
                     lx.line, lx.col);
  }
  // postfix projections, multi-letter allowed: ^ia == ^i /\ ^a
  while (true) {
    lx.skip_ws();
    if (lx.pos < lx.src.size() && lx.src[lx.pos] == '^') {
      lx.advance(1);
      std::vector<Facet> fs;
      while (lx.pos < lx.src.size()) {
        char f = lx.src[lx.pos];
        if (f == 'c') fs.push_back(Facet::C);
        else if (f == 'i') fs.push_back(Facet::I);
        else if (f == 'a') fs.push_back(Facet::A);
        else break;
        lx.advance(1);
      }
      if (fs.empty()) throw ParseError("expected projection letters c/i/a", lx.line, lx.col);
      base = p_proj_multi(base, fs);
    } else {
      break;
    }
  }
  return base;
}

// levels: 0 glb, 1 lub, 2 \/, 3 /\, 4 (+), 5 (*)
inline PrinPtr parse_prin_level(PrinLexer& lx, int level) {
  static const char* ops[6] = {"glb", "lub", "\\/", "/\\", "(+)", "(*)"};
  if (level == 6) return parse_prin_primary(lx);
  PrinPtr left = parse_prin_level(lx, level + 1);
  while (true) {
    std::string op = lx.peek_op();
    if (op != ops[level]) break;
    lx.advance(op.size());
    PrinPtr right = parse_prin_level(lx, level + 1);
    switch (level) {
      case 0: left = p_meet(left, right); break;
      case 1: left = p_join(left, right); break;
      case 2: left = p_or(left, right); break;
      case 3: left = p_and(left, right); break;
      case 4: left = p_por(left, right); break;
      case 5: left = p_pand(left, right); break;
    }
  }
  return left;
}

}  // namespace detail

// Parse a principal; lub/glb are expanded eagerly and the result is
// canonical.
inline PrinPtr parse_principal(const std::string& text) {
  detail::PrinLexer lx(text);
  PrinPtr p = detail::parse_prin_level(lx, 0);
  lx.skip_ws();
  if (lx.pos != lx.src.size())
    throw ParseError("trailing input after principal", lx.line, lx.col);
  return canonical(p);
}

// --- s-expression reader --------------------------------------------------------

namespace detail {

struct Sexp {
  // atom when children empty and !is_list
  bool is_list = false;
  bool is_string = false;  // quoted atom
  std::string atom;
  std::vector<Sexp> children;
  int line = 1, col = 1;
};

struct SexpReader {
  const std::string& src;
  size_t pos = 0;
  int line = 1, col = 1;

  explicit SexpReader(const std::string& s) : src(s) {}

  void advance() {
    if (pos < src.size()) {
      if (src[pos] == '\n') { ++line; col = 1; } else { ++col; }
      ++pos;
    }
  }
  void skip_ws() {
    while (pos < src.size()) {
      char c = src[pos];
      if (c == ';') {  // comment to end of line
        while (pos < src.size() && src[pos] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  Sexp read() {
    skip_ws();
    if (pos >= src.size()) throw ParseError("unexpected end of input", line, col);
    Sexp s;
    s.line = line;
    s.col = col;
    char c = src[pos];
    if (c == '(') {
      advance();
      s.is_list = true;
      while (true) {
        skip_ws();
        if (pos >= src.size()) throw ParseError("unclosed '('", s.line, s.col);
        if (src[pos] == ')') { advance(); break; }
        s.children.push_back(read());
      }
      return s;
    }
    if (c == ')') throw ParseError("unexpected ')'", line, col);
    if (c == '"') {
      advance();
      s.is_string = true;
      while (pos < src.size() && src[pos] != '"') {
        s.atom += src[pos];
        advance();
      }
      if (pos >= src.size()) throw ParseError("unclosed string", s.line, s.col);
      advance();
      return s;
    }
    while (pos < src.size() && !std::isspace(static_cast<unsigned char>(src[pos])) &&
           src[pos] != '(' && src[pos] != ')' && src[pos] != '"' && src[pos] != ';') {
      s.atom += src[pos];
      advance();
    }
    if (s.atom.empty()) throw ParseError("empty token", line, col);
    return s;
  }

  bool at_end() {
    skip_ws();
    return pos >= src.size();
  }
};

inline PrinPtr prin_of(const Sexp& s) {
  if (s.is_list) throw ParseError("expected a principal token", s.line, s.col);
  try {
    return parse_principal(s.atom);
  } catch (const ParseError& e) {
    throw ParseError(std::string("bad principal: ") + e.what(), s.line, s.col);
  }
}

inline TypePtr type_of(const Sexp& s);
inline ExprPtr expr_of(const Sexp& s);

inline const Sexp& arg(const Sexp& s, size_t i, const char* form, size_t arity) {
  if (s.children.size() != arity + 1)
    throw ParseError(std::string("(") + form + " ...) takes " + std::to_string(arity) +
                         " arguments",
                     s.line, s.col);
  return s.children[i + 1];
}

inline TypePtr type_of(const Sexp& s) {
  if (!s.is_list) {
    if (s.atom == "unit") return t_unit();
    if (s.is_string) throw ParseError("unexpected string in type", s.line, s.col);
    return t_var(s.atom);
  }
  if (s.children.empty()) throw ParseError("empty type form", s.line, s.col);
  const std::string& head = s.children[0].atom;
  if (head == "sum") return t_sum(type_of(arg(s, 0, "sum", 2)), type_of(arg(s, 1, "sum", 2)));
  if (head == "prod")
    return t_prod(type_of(arg(s, 0, "prod", 2)), type_of(arg(s, 1, "prod", 2)));
  if (head == "fun")
    return t_fun(type_of(arg(s, 0, "fun", 3)), prin_of(arg(s, 1, "fun", 3)),
                 type_of(arg(s, 2, "fun", 3)));
  if (head == "forall") {
    const Sexp& v = arg(s, 0, "forall", 3);
    if (v.is_list) throw ParseError("forall binder must be a name", v.line, v.col);
    return t_forall(v.atom, prin_of(arg(s, 1, "forall", 3)), type_of(arg(s, 2, "forall", 3)));
  }
  if (head == "says")
    return t_says(prin_of(arg(s, 0, "says", 2)), type_of(arg(s, 1, "says", 2)));
  throw ParseError("unknown type form '" + head + "'", s.line, s.col);
}

inline std::string name_of(const Sexp& s) {
  if (s.is_list || s.is_string) throw ParseError("expected a name", s.line, s.col);
  return s.atom;
}

inline ExprPtr expr_of(const Sexp& s) {
  if (!s.is_list) {
    if (s.is_string) throw ParseError("unexpected string in expression", s.line, s.col);
    if (s.atom == "unit") return e_unit();
    return e_var(s.atom);
  }
  if (s.children.empty()) return e_unit();  // ()
  const Sexp& h = s.children[0];
  const std::string& head = h.atom;
  if (!h.is_list) {
    if (head == "lam") {
      const Sexp& binder = arg(s, 0, "lam", 2);
      if (!binder.is_list || binder.children.size() != 3)
        throw ParseError("lam binder must be (name TYPE pc)", binder.line, binder.col);
      return e_lam(name_of(binder.children[0]), type_of(binder.children[1]),
                   prin_of(binder.children[2]), expr_of(arg(s, 1, "lam", 2)));
    }
    if (head == "tlam")
      return e_tlam(name_of(arg(s, 0, "tlam", 3)), prin_of(arg(s, 1, "tlam", 3)),
                    expr_of(arg(s, 2, "tlam", 3)));
    if (head == "tapp")
      return e_tapp(expr_of(arg(s, 0, "tapp", 2)), type_of(arg(s, 1, "tapp", 2)));
    if (head == "pair")
      return e_pair(expr_of(arg(s, 0, "pair", 3)), expr_of(arg(s, 1, "pair", 3)),
                    type_of(arg(s, 2, "pair", 3)));
    if (head == "proj1") return e_proj(1, expr_of(arg(s, 0, "proj1", 1)));
    if (head == "proj2") return e_proj(2, expr_of(arg(s, 0, "proj2", 1)));
    if (head == "inj1")
      return e_inj(1, type_of(arg(s, 0, "inj1", 2)), expr_of(arg(s, 1, "inj1", 2)));
    if (head == "inj2")
      return e_inj(2, type_of(arg(s, 0, "inj2", 2)), expr_of(arg(s, 1, "inj2", 2)));
    if (head == "case")
      return e_case(expr_of(arg(s, 0, "case", 5)), name_of(arg(s, 1, "case", 5)),
                    expr_of(arg(s, 2, "case", 5)), expr_of(arg(s, 3, "case", 5)),
                    type_of(arg(s, 4, "case", 5)));
    if (head == "unitm")
      return e_unitm(prin_of(arg(s, 0, "unitm", 2)), expr_of(arg(s, 1, "unitm", 2)));
    if (head == "sealed")
      return e_sealed(prin_of(arg(s, 0, "sealed", 2)), expr_of(arg(s, 1, "sealed", 2)));
    if (head == "bind")
      return e_bind(name_of(arg(s, 0, "bind", 3)), expr_of(arg(s, 1, "bind", 3)),
                    expr_of(arg(s, 2, "bind", 3)));
    if (head == "run")
      return e_run(type_of(arg(s, 0, "run", 3)), expr_of(arg(s, 1, "run", 3)),
                   prin_of(arg(s, 2, "run", 3)));
    if (head == "ret")
      return e_ret(expr_of(arg(s, 0, "ret", 2)), prin_of(arg(s, 1, "ret", 2)));
    if (head == "expect") return e_expect(type_of(arg(s, 0, "expect", 1)));
    if (head == "select")
      return e_select(expr_of(arg(s, 0, "select", 3)), expr_of(arg(s, 1, "select", 3)),
                      type_of(arg(s, 2, "select", 3)));
    if (head == "compare")
      return e_compare(type_of(arg(s, 0, "compare", 3)), expr_of(arg(s, 1, "compare", 3)),
                       expr_of(arg(s, 2, "compare", 3)));
    if (head == "fail") return e_fail(type_of(arg(s, 0, "fail", 1)));
    if (head == "bracket" || head == "hole")
      throw ParseError("bracketed terms have no source syntax", s.line, s.col);
  }
  // application
  if (s.children.size() != 2)
    throw ParseError("application takes exactly two expressions", s.line, s.col);
  return e_app(expr_of(s.children[0]), expr_of(s.children[1]));
}

}  // namespace detail

inline TypePtr parse_type(const std::string& text) {
  detail::SexpReader r(text);
  detail::Sexp s = r.read();
  if (!r.at_end()) throw ParseError("trailing input after type", r.line, r.col);
  return detail::type_of(s);
}

inline ExprPtr parse_expr(const std::string& text) {
  detail::SexpReader r(text);
  detail::Sexp s = r.read();
  if (!r.at_end()) throw ParseError("trailing input after expression", r.line, r.col);
  return detail::expr_of(s);
}

// --- source files ---------------------------------------------------------------

struct SourceFile {
  ExprPtr program;
  std::optional<PrinPtr> pc;
  std::optional<PrinPtr> host;
  DelegationContext delegations;
};

// A file is either a bare expression or
//   (flaqr (pc P)? (host C)? (pi (>= P Q) ...)? (program e))
inline SourceFile parse_source(const std::string& text) {
  detail::SexpReader r(text);
  detail::Sexp s = r.read();
  if (!r.at_end()) throw ParseError("trailing input after program", r.line, r.col);
  SourceFile f;
  if (!s.is_list || s.children.empty() || s.children[0].is_list ||
      s.children[0].atom != "flaqr") {
    f.program = detail::expr_of(s);
    return f;
  }
  bool have_program = false;
  for (size_t i = 1; i < s.children.size(); ++i) {
    const detail::Sexp& c = s.children[i];
    if (!c.is_list || c.children.empty())
      throw ParseError("expected (pc ...), (host ...), (pi ...) or (program ...)", c.line, c.col);
    const std::string& head = c.children[0].atom;
    if (head == "pc") {
      f.pc = detail::prin_of(detail::arg(c, 0, "pc", 1));
    } else if (head == "host") {
      f.host = detail::prin_of(detail::arg(c, 0, "host", 1));
    } else if (head == "pi") {
      for (size_t j = 1; j < c.children.size(); ++j) {
        const detail::Sexp& d = c.children[j];
        if (!d.is_list || d.children.size() != 3 || d.children[0].atom != ">=")
          throw ParseError("delegation must be (>= stronger weaker)", d.line, d.col);
        f.delegations.add(detail::prin_of(d.children[1]), detail::prin_of(d.children[2]));
      }
    } else if (head == "program") {
      f.program = detail::expr_of(detail::arg(c, 0, "program", 1));
      have_program = true;
    } else {
      throw ParseError("unknown file section '" + head + "'", c.line, c.col);
    }
  }
  if (!have_program) throw ParseError("file has no (program ...) section", s.line, s.col);
  return f;
}

// Delegation list syntax for the command line: "p >= q; r >= s" (comma also
// accepted as a separator).
inline DelegationContext parse_delegations(const std::string& text) {
  DelegationContext ctx;
  size_t start = 0;
  auto emit = [&ctx](const std::string& part) {
    if (part.find_first_not_of(" \t\r\n") == std::string::npos) return;
    size_t ge = part.find(">=");
    if (ge == std::string::npos)
      throw ParseError("delegation must look like 'p >= q'", 1, 1);
    ctx.add(parse_principal(part.substr(0, ge)), parse_principal(part.substr(ge + 2)));
  };
  for (size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == ';' || text[i] == ',') {
      emit(text.substr(start, i - start));
      start = i + 1;
    }
  }
  return ctx;
}

}  // namespace flaqr
