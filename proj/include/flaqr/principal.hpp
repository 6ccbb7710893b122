#pragma once

// FLAQR principals: primitives, top/bot, authority projections (c/i/a),
// conjunction, disjunction, partial conjunction (*), partial disjunction (+),
// and the derived flow operators lub/glb.
//
// Principals are immutable trees behind shared_ptr. canonical() rewrites a
// principal into a fixed shape used for hashing, memoization and structural
// equality:
//   * projections pushed down to primitive/top atoms,
//   * the whole term factored into c/i/a components (ConjBasis),
//   * n-ary sorted conjunctions of disjunctions per component,
//   * conjunction/disjunction extracted out of the right operand of (*)/(+).
// Partial conjunction and disjunction do not commute, so their operand order
// is preserved.

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace flaqr {

enum class Facet : uint8_t { C = 0, I = 1, A = 2 };

inline char facet_char(Facet f) {
  switch (f) {
    case Facet::C: return 'c';
    case Facet::I: return 'i';
    case Facet::A: return 'a';
  }
  return '?';
}

enum class PrinKind : uint8_t {
  Primitive,
  Top,
  Bot,
  Proj,   // base^facet
  And,    // p /\ q
  Or,     // p \/ q
  PAnd,   // p (*) q   partial conjunction
  POr,    // p (+) q   partial disjunction
  Join,   // p lub q   (expanded eagerly by canonical/parser)
  Meet,   // p glb q
};

struct Prin;
using PrinPtr = std::shared_ptr<const Prin>;

struct Prin {
  PrinKind kind;
  std::string name;        // Primitive
  Facet facet{Facet::C};   // Proj
  PrinPtr a, b;            // children (Proj uses a)
  mutable size_t hash_cache = 0;

  Prin(PrinKind k) : kind(k) {}
};

inline PrinPtr p_prim(std::string n) {
  auto p = std::make_shared<Prin>(PrinKind::Primitive);
  p->name = std::move(n);
  return p;
}
inline PrinPtr p_top() {
  static PrinPtr t = std::make_shared<Prin>(PrinKind::Top);
  return t;
}
inline PrinPtr p_bot() {
  static PrinPtr b = std::make_shared<Prin>(PrinKind::Bot);
  return b;
}
inline PrinPtr p_proj(PrinPtr base, Facet f) {
  auto p = std::make_shared<Prin>(PrinKind::Proj);
  p->a = std::move(base);
  p->facet = f;
  return p;
}
inline PrinPtr p_bin(PrinKind k, PrinPtr l, PrinPtr r) {
  auto p = std::make_shared<Prin>(k);
  p->a = std::move(l);
  p->b = std::move(r);
  return p;
}
inline PrinPtr p_and(PrinPtr l, PrinPtr r) { return p_bin(PrinKind::And, std::move(l), std::move(r)); }
inline PrinPtr p_or(PrinPtr l, PrinPtr r) { return p_bin(PrinKind::Or, std::move(l), std::move(r)); }
inline PrinPtr p_pand(PrinPtr l, PrinPtr r) { return p_bin(PrinKind::PAnd, std::move(l), std::move(r)); }
inline PrinPtr p_por(PrinPtr l, PrinPtr r) { return p_bin(PrinKind::POr, std::move(l), std::move(r)); }
inline PrinPtr p_join(PrinPtr l, PrinPtr r) { return p_bin(PrinKind::Join, std::move(l), std::move(r)); }
inline PrinPtr p_meet(PrinPtr l, PrinPtr r) { return p_bin(PrinKind::Meet, std::move(l), std::move(r)); }

// alice^{ia} style shorthand: conjunction of single-facet projections.
inline PrinPtr p_proj_multi(PrinPtr base, const std::vector<Facet>& fs) {
  assert(!fs.empty());
  PrinPtr acc = p_proj(base, fs[0]);
  for (size_t i = 1; i < fs.size(); ++i) acc = p_and(acc, p_proj(base, fs[i]));
  return acc;
}
inline PrinPtr p_reach(PrinPtr base) {  // |> l  ==  l^i /\ l^a
  return p_and(p_proj(base, Facet::I), p_proj(base, Facet::A));
}

// --- structural comparison / printing ---------------------------------------

inline int prin_cmp(const PrinPtr& x, const PrinPtr& y) {
  if (x == y) return 0;
  if (x->kind != y->kind) return x->kind < y->kind ? -1 : 1;
  switch (x->kind) {
    case PrinKind::Primitive:
      return x->name.compare(y->name) < 0 ? -1 : (x->name == y->name ? 0 : 1);
    case PrinKind::Top:
    case PrinKind::Bot:
      return 0;
    case PrinKind::Proj: {
      if (x->facet != y->facet) return x->facet < y->facet ? -1 : 1;
      return prin_cmp(x->a, y->a);
    }
    default: {
      int c = prin_cmp(x->a, y->a);
      if (c != 0) return c;
      return prin_cmp(x->b, y->b);
    }
  }
}
inline size_t prin_hash(const PrinPtr& p);

inline bool prin_eq(const PrinPtr& x, const PrinPtr& y) {
  if (x == y) return true;
  if (x->hash_cache != 0 && y->hash_cache != 0 && x->hash_cache != y->hash_cache) return false;
  return prin_cmp(x, y) == 0;
}

inline size_t prin_hash(const PrinPtr& p) {
  if (p->hash_cache != 0) return p->hash_cache;
  size_t h = (static_cast<size_t>(p->kind) + 2) * 1099511628211ull;
  auto mix = [&h](size_t v) { h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2); };
  switch (p->kind) {
    case PrinKind::Primitive: mix(std::hash<std::string>{}(p->name)); break;
    case PrinKind::Proj:
      mix(static_cast<size_t>(p->facet));
      mix(prin_hash(p->a));
      break;
    case PrinKind::Top:
    case PrinKind::Bot: break;
    default:
      mix(prin_hash(p->a));
      mix(prin_hash(p->b));
  }
  if (h == 0) h = 1;
  p->hash_cache = h;
  return h;
}

namespace detail {
inline int prec_of(PrinKind k) {
  switch (k) {
    case PrinKind::Proj: return 7;
    case PrinKind::PAnd: return 6;
    case PrinKind::POr: return 5;
    case PrinKind::And: return 4;
    case PrinKind::Or: return 3;
    case PrinKind::Join: return 2;
    case PrinKind::Meet: return 1;
    default: return 8;
  }
}
}  // namespace detail

inline void prin_print(const PrinPtr& p, std::string& out, int parent_prec = 0) {
  int prec = detail::prec_of(p->kind);
  bool paren = prec < parent_prec;
  if (paren) out += '(';
  switch (p->kind) {
    case PrinKind::Primitive: out += p->name; break;
    case PrinKind::Top: out += "top"; break;
    case PrinKind::Bot: out += "bot"; break;
    case PrinKind::Proj:
      prin_print(p->a, out, detail::prec_of(PrinKind::Proj) + 1);
      out += '^';
      out += facet_char(p->facet);
      break;
    default: {
      const char* op = "?";
      switch (p->kind) {
        case PrinKind::And: op = " /\\ "; break;
        case PrinKind::Or: op = " \\/ "; break;
        case PrinKind::PAnd: op = " (*) "; break;
        case PrinKind::POr: op = " (+) "; break;
        case PrinKind::Join: op = " lub "; break;
        case PrinKind::Meet: op = " glb "; break;
        default: break;
      }
      // And/Or are kept right-flat by canonical; print children at own level.
      prin_print(p->a, out, prec + 1);
      out += op;
      prin_print(p->b, out, prec);
      break;
    }
  }
  if (paren) out += ')';
}

inline std::string to_string(const PrinPtr& p) {
  std::string s;
  prin_print(p, s);
  return s;
}

// --- canonicalization --------------------------------------------------------

namespace detail {

// Push a projection through a term. Justified by ProjIdemp, ProjBasis,
// ProjDistConj/Disj and ProjPAndL/R, ProjPOrL/R (all are two-sided).
inline PrinPtr push_proj(const PrinPtr& p, Facet f);

// lub/glb expand to their authority-lattice definitions eagerly.
inline PrinPtr expand_flow_ops(const PrinPtr& p) {
  switch (p->kind) {
    case PrinKind::Primitive:
    case PrinKind::Top:
    case PrinKind::Bot:
      return p;
    case PrinKind::Proj: {
      auto a = expand_flow_ops(p->a);
      return a == p->a ? p : p_proj(a, p->facet);
    }
    case PrinKind::Join: {
      auto l = expand_flow_ops(p->a), r = expand_flow_ops(p->b);
      // p lub q = (p^c /\ q^c) /\ (p^i \/ q^i) /\ (p^a \/ q^a)
      return p_and(p_and(p_proj(l, Facet::C), p_proj(r, Facet::C)),
                   p_and(p_or(p_proj(l, Facet::I), p_proj(r, Facet::I)),
                         p_or(p_proj(l, Facet::A), p_proj(r, Facet::A))));
    }
    case PrinKind::Meet: {
      auto l = expand_flow_ops(p->a), r = expand_flow_ops(p->b);
      // p glb q = (p^c \/ q^c) /\ (p^i /\ q^i) /\ (p^a /\ q^a)
      return p_and(p_or(p_proj(l, Facet::C), p_proj(r, Facet::C)),
                   p_and(p_and(p_proj(l, Facet::I), p_proj(r, Facet::I)),
                         p_and(p_proj(l, Facet::A), p_proj(r, Facet::A))));
    }
    default: {
      auto l = expand_flow_ops(p->a), r = expand_flow_ops(p->b);
      return (l == p->a && r == p->b) ? p : p_bin(p->kind, l, r);
    }
  }
}

inline PrinPtr push_proj(const PrinPtr& p, Facet f) {
  switch (p->kind) {
    case PrinKind::Primitive: return p_proj(p, f);
    case PrinKind::Top: return p_proj(p, f);
    case PrinKind::Bot: return p_bot();  // bot^pi == bot
    case PrinKind::Proj:
      return p->facet == f ? p : p_bot();  // idempotent / mixed basis
    case PrinKind::And: return p_and(push_proj(p->a, f), push_proj(p->b, f));
    case PrinKind::Or: return p_or(push_proj(p->a, f), push_proj(p->b, f));
    case PrinKind::PAnd: return p_pand(push_proj(p->a, f), push_proj(p->b, f));
    case PrinKind::POr: return p_por(push_proj(p->a, f), push_proj(p->b, f));
    default:
      return push_proj(expand_flow_ops(p), f);
  }
}

// Facet-pure normalization. Operates on terms whose atoms are all of one
// facet; produces right-flat sorted /\ and \/ chains with unit collapsing,
// and extracts /\ and \/ out of the *right* operand of (*)/(+) (the
// distributivity axioms only cover the right operand).
inline PrinPtr norm_facet(const PrinPtr& p);

inline void collect(const PrinPtr& p, PrinKind k, std::vector<PrinPtr>& out) {
  if (p->kind == k) {
    collect(p->a, k, out);
    collect(p->b, k, out);
  } else {
    out.push_back(p);
  }
}

inline PrinPtr rebuild_sorted(PrinKind k, std::vector<PrinPtr> xs) {
  std::sort(xs.begin(), xs.end(), [](const PrinPtr& l, const PrinPtr& r) { return prin_cmp(l, r) < 0; });
  xs.erase(std::unique(xs.begin(), xs.end(), prin_eq), xs.end());
  PrinPtr acc = xs.back();
  for (size_t i = xs.size() - 1; i-- > 0;) acc = p_bin(k, xs[i], acc);
  return acc;
}

inline PrinPtr norm_lattice(PrinKind k, const PrinPtr& l, const PrinPtr& r) {
  std::vector<PrinPtr> xs;
  collect(l, k, xs);
  collect(r, k, xs);
  std::vector<PrinPtr> kept;
  for (auto& x : xs) {
    if (k == PrinKind::And) {
      if (x->kind == PrinKind::Bot) continue;        // p /\ bot == p
      if (x->kind == PrinKind::Top) return p_top();  // p /\ top == top
    } else {
      if (x->kind == PrinKind::Top) continue;        // p \/ top == p
      if (x->kind == PrinKind::Bot) return p_bot();  // p \/ bot == bot
    }
    kept.push_back(x);
  }
  if (kept.empty()) return k == PrinKind::And ? p_bot() : p_top();
  return rebuild_sorted(k, std::move(kept));
}

inline PrinPtr norm_partial(PrinKind k, PrinPtr l, PrinPtr r) {
  // x (*) x == x and x (+) x == x are derivable; nothing else collapses.
  if (prin_eq(l, r)) return l;
  // Distribute over /\ and \/ in the right operand only (PAndDistAnd/Or,
  // POrDistAnd/Or axiom pairs).
  if (r->kind == PrinKind::And || r->kind == PrinKind::Or) {
    std::vector<PrinPtr> parts;
    collect(r, r->kind, parts);
    std::vector<PrinPtr> mapped;
    mapped.reserve(parts.size());
    for (auto& q : parts) mapped.push_back(norm_facet(p_bin(k, l, q)));
    PrinPtr acc = mapped[0];
    for (size_t i = 1; i < mapped.size(); ++i)
      acc = norm_lattice(r->kind, acc, mapped[i]);
    return acc;
  }
  return p_bin(k, std::move(l), std::move(r));
}

inline PrinPtr norm_facet(const PrinPtr& p) {
  switch (p->kind) {
    case PrinKind::Bot:
    case PrinKind::Proj:
      return p;  // atoms: n^f, top^f (proj of primitive/top), bot
    case PrinKind::And:
    case PrinKind::Or:
      return norm_lattice(p->kind, norm_facet(p->a), norm_facet(p->b));
    case PrinKind::PAnd:
    case PrinKind::POr:
      return norm_partial(p->kind, norm_facet(p->a), norm_facet(p->b));
    default:
      assert(false && "norm_facet: non facet-pure term");
      return p;
  }
}

}  // namespace detail

// Facet component of p in canonical facet-pure form.
inline PrinPtr facet_component(const PrinPtr& p, Facet f) {
  return detail::norm_facet(detail::push_proj(detail::expand_flow_ops(p), f));
}

// canonical(p): /\ of the three facet components (ConjBasis), each
// facet-pure normalized. Idempotent; acts-for-equivalent to p.
inline PrinPtr canonical(const PrinPtr& p) {
  PrinPtr c = facet_component(p, Facet::C);
  PrinPtr i = facet_component(p, Facet::I);
  PrinPtr a = facet_component(p, Facet::A);
  std::vector<PrinPtr> parts;
  for (auto& x : {c, i, a})
    if (x->kind != PrinKind::Bot) parts.push_back(x);
  if (parts.empty()) return p_bot();
  PrinPtr acc = parts.back();
  for (size_t k = parts.size() - 1; k-- > 0;) acc = p_and(parts[k], acc);
  return acc;
}

// --- label operators from the calculus ---------------------------------------

// compare action: (l1^c /\ l2^c) /\ (l1^i (*) l2^i) /\ (l1^a \/ l2^a)
inline PrinPtr compare_action(const PrinPtr& l1, const PrinPtr& l2) {
  return canonical(p_and(p_and(p_proj(l1, Facet::C), p_proj(l2, Facet::C)),
                         p_and(p_pand(p_proj(l1, Facet::I), p_proj(l2, Facet::I)),
                               p_or(p_proj(l1, Facet::A), p_proj(l2, Facet::A)))));
}

// select action: (l1^c /\ l2^c) /\ (l1^i (+) l2^i) /\ (l1^a /\ l2^a)
inline PrinPtr select_action(const PrinPtr& l1, const PrinPtr& l2) {
  return canonical(p_and(p_and(p_proj(l1, Facet::C), p_proj(l2, Facet::C)),
                         p_and(p_por(p_proj(l1, Facet::I), p_proj(l2, Facet::I)),
                               p_and(p_proj(l1, Facet::A), p_proj(l2, Facet::A)))));
}

// flow join: (p^c /\ q^c) /\ (p^i \/ q^i) /\ (p^a \/ q^a)
inline PrinPtr flow_join(const PrinPtr& p, const PrinPtr& q) {
  return canonical(p_join(p, q));
}

// flow meet: (p^c \/ q^c) /\ (p^i /\ q^i) /\ (p^a /\ q^a)
inline PrinPtr flow_meet(const PrinPtr& p, const PrinPtr& q) {
  return canonical(p_meet(p, q));
}

}  // namespace flaqr
