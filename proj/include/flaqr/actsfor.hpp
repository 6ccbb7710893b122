#pragma once

// Decision procedure for the FLAQR acts-for relation.
//
// Goal-directed backward search over the static principal lattice rules plus
// the partial conjunction/disjunction rules. Terms are canonicalized first
// (projections at atoms, facet factoring, lattice flattening, right-operand
// distribution for (*)/(+)), which discharges the projection and
// distributivity axioms structurally. The remaining rule set is applied
// backwards:
//
//   Bot, Refl               direct checks
//   ConjR / ConjL           goal or subject conjunction chains
//   DisjR / DisjL           goal or subject disjunction chains
//   PAndR                   p >= g1, p >= g2  =>  p >= g1 (*) g2
//   PAndL                   p1 >= g           =>  p1 (*) p2 >= g
//   PAndPOr                 p >= g1 (*) g2    =>  p >= g1 (+) g2
//   POrOr                   p1 \/ p2 >= g     =>  p1 (+) p2 >= g
//   hypothesis + Trans      p >= h1, h2 >= g for (h1,h2) in the context
//   Trans                   through candidate midpoints from subterms
//
// PAndL keys on the first operand only: partial conjunction and disjunction
// are order-sensitive (the distributivity axioms also only rewrite their
// right operand), and the first operand is the one whose authority survives.
//
// The search is sound; completeness is bounded by the transitivity depth
// budget. A query that trips the budget reports Unknown internally, which the
// boolean interface collapses to false while keeping a diagnostics flag.

#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "flaqr/principal.hpp"

namespace flaqr {

struct DelegationContext {
  // (stronger, weaker): stronger acts for weaker by hypothesis.
  std::vector<std::pair<PrinPtr, PrinPtr>> pairs;

  void add(PrinPtr stronger, PrinPtr weaker) {
    pairs.emplace_back(std::move(stronger), std::move(weaker));
  }
  bool empty() const { return pairs.empty(); }
};

enum class Verdict : uint8_t { No = 0, Unknown = 1, Yes = 2 };

struct SolverOptions {
  int trans_depth = 8;        // budget for Trans chaining
  bool subterm_trans = false; // also try Trans through subterm midpoints
};

class ActsForSolver {
 public:
  explicit ActsForSolver(const DelegationContext& ctx = {}, SolverOptions opts = {})
      : opts_(opts) {
    // Hypotheses are kept facet-split; the full pair is recoverable from the
    // three projections through ConjBasis, so storing it adds nothing.
    for (auto& [p, q] : ctx.pairs) {
      for (Facet f : {Facet::C, Facet::I, Facet::A}) {
        auto pf = facet_component(p, f);
        auto qf = facet_component(q, f);
        if (qf->kind == PrinKind::Bot) continue;
        bool dup = false;
        for (auto& [a, b] : hyps_)
          if (prin_eq(a, pf) && prin_eq(b, qf)) { dup = true; break; }
        if (!dup) hyps_.emplace_back(pf, qf);
      }
    }
  }

  // Public boolean interface; Unknown collapses to false.
  bool acts_for(const PrinPtr& p, const PrinPtr& q) {
    return query(p, q) == Verdict::Yes;
  }

  Verdict query(const PrinPtr& p, const PrinPtr& q) {
    budget_hit_ = false;
    stack_.clear();
    PrinPtr cp = canonical(p), cq = canonical(q);
    Res r = go(cp, cq, opts_.trans_depth);
    if (r.v != Verdict::Yes && r.saw_budget) return Verdict::Unknown;
    return r.v;
  }

  // Diagnostics: whether the last query exhausted its search budget.
  bool budget_exhausted() const { return budget_hit_; }

 private:
  struct Key {
    PrinPtr p, q;
    bool operator==(const Key& o) const { return prin_eq(p, o.p) && prin_eq(q, o.q); }
  };
  struct KeyHash {
    size_t operator()(const Key& k) const { return prin_hash(k.p) * 31 + prin_hash(k.q); }
  };
  struct Res {
    Verdict v;
    bool on_stack_dep = false;  // touched an in-progress goal
    bool saw_budget = false;    // hit the trans budget somewhere below
  };

  struct NoEntry {
    int depth;        // largest budget at which the goal failed
    bool saw_budget;  // the failure may be a budget artifact
  };

  SolverOptions opts_;
  std::vector<std::pair<PrinPtr, PrinPtr>> hyps_;
  std::unordered_map<Key, Verdict, KeyHash> memo_;       // depth-independent Yes
  std::unordered_map<Key, NoEntry, KeyHash> no_memo_;    // No, monotone in budget
  std::unordered_map<Key, bool, KeyHash> in_progress_;
  std::vector<Key> stack_;
  bool budget_hit_ = false;

  static void chain(const PrinPtr& p, PrinKind k, std::vector<PrinPtr>& out) {
    if (p->kind == k) {
      chain(p->a, k, out);
      chain(p->b, k, out);
    } else {
      out.push_back(p);
    }
  }

  static bool is_atom(const PrinPtr& p) {
    return p->kind == PrinKind::Proj || p->kind == PrinKind::Bot ||
           p->kind == PrinKind::Primitive || p->kind == PrinKind::Top;
  }

  void subterms(const PrinPtr& p, std::vector<PrinPtr>& out, int fuel = 64) const {
    if (fuel <= 0) return;
    out.push_back(p);
    switch (p->kind) {
      case PrinKind::And:
      case PrinKind::Or:
      case PrinKind::PAnd:
      case PrinKind::POr:
        subterms(p->a, out, fuel - 1);
        subterms(p->b, out, fuel - 1);
        break;
      default:
        break;
    }
  }

  Res go(const PrinPtr& p, const PrinPtr& q, int depth) {
    // Bot and Refl.
    if (q->kind == PrinKind::Bot) return {Verdict::Yes};
    if (prin_eq(p, q)) return {Verdict::Yes};
    if (p->kind == PrinKind::Bot) {
      // bot >= q only via hypotheses.
      return hyp_routes(p, q, depth, {Verdict::No});
    }

    Key key{p, q};
    if (auto it = memo_.find(key); it != memo_.end()) return {it->second};
    if (auto it = no_memo_.find(key); it != no_memo_.end() && depth <= it->second.depth)
      return {Verdict::No, false, it->second.saw_budget};
    if (in_progress_.count(key)) return {Verdict::No, true, false};

    in_progress_.emplace(key, true);
    Res r = rules(p, q, depth);
    in_progress_.erase(key);

    if (r.v == Verdict::Yes) {
      memo_[key] = Verdict::Yes;
    } else if (!r.on_stack_dep) {
      // "Not derivable within budget d" stays valid for any budget <= d.
      auto [it, fresh] = no_memo_.try_emplace(key, NoEntry{depth, r.saw_budget});
      if (!fresh && depth > it->second.depth) it->second = NoEntry{depth, r.saw_budget};
    }
    return r;
  }

  static Res merge_or(Res acc, const Res& next) {
    if (next.v == Verdict::Yes) return next;
    acc.on_stack_dep |= next.on_stack_dep;
    acc.saw_budget |= next.saw_budget;
    return acc;
  }

  Res rules(const PrinPtr& p, const PrinPtr& q, int depth) {
    Res acc{Verdict::No};

    // ConjR: goal conjunction needs every conjunct.
    if (q->kind == PrinKind::And) {
      std::vector<PrinPtr> gs;
      chain(q, PrinKind::And, gs);
      Res all{Verdict::Yes};
      for (auto& g : gs) {
        Res r = go(p, g, depth);
        if (r.v != Verdict::Yes) {
          all = {Verdict::No, r.on_stack_dep, r.saw_budget};
          break;
        }
        all.on_stack_dep |= r.on_stack_dep;
        all.saw_budget |= r.saw_budget;
      }
      if (all.v == Verdict::Yes) return all;
      acc = merge_or(acc, all);
    }

    // DisjR: goal disjunction, any single disjunct suffices. Subset splits
    // are reached through hypothesis transitivity.
    if (q->kind == PrinKind::Or) {
      std::vector<PrinPtr> gs;
      chain(q, PrinKind::Or, gs);
      for (auto& g : gs) {
        Res r = go(p, g, depth);
        if (r.v == Verdict::Yes) return r;
        acc = merge_or(acc, r);
      }
    }

    // PAndR: split a partial-conjunction goal.
    if (q->kind == PrinKind::PAnd) {
      Res r1 = go(p, q->a, depth);
      if (r1.v == Verdict::Yes) {
        Res r2 = go(p, q->b, depth);
        if (r2.v == Verdict::Yes) return r2;
        acc = merge_or(acc, r2);
      } else {
        acc = merge_or(acc, r1);
      }
    }

    // PAndPOr: reach a partial-disjunction goal through the matching (*).
    if (q->kind == PrinKind::POr) {
      Res r = go(p, p_pand(q->a, q->b), depth);
      if (r.v == Verdict::Yes) return r;
      acc = merge_or(acc, r);
    }

    // ConjL: some conjunct of the subject.
    if (p->kind == PrinKind::And) {
      std::vector<PrinPtr> ps;
      chain(p, PrinKind::And, ps);
      for (auto& s : ps) {
        Res r = go(s, q, depth);
        if (r.v == Verdict::Yes) return r;
        acc = merge_or(acc, r);
      }
    }

    // DisjL: every disjunct of the subject.
    if (p->kind == PrinKind::Or) {
      std::vector<PrinPtr> ps;
      chain(p, PrinKind::Or, ps);
      Res all{Verdict::Yes};
      for (auto& s : ps) {
        Res r = go(s, q, depth);
        if (r.v != Verdict::Yes) {
          all = {Verdict::No, r.on_stack_dep, r.saw_budget};
          break;
        }
        all.on_stack_dep |= r.on_stack_dep;
        all.saw_budget |= r.saw_budget;
      }
      if (all.v == Verdict::Yes) return all;
      acc = merge_or(acc, all);
    }

    // PAndL: first operand of a partial conjunction carries its authority.
    if (p->kind == PrinKind::PAnd) {
      Res r = go(p->a, q, depth);
      if (r.v == Verdict::Yes) return r;
      acc = merge_or(acc, r);
    }

    // POrOr: p1 (+) p2 >= p1 \/ p2, then DisjL.
    if (p->kind == PrinKind::POr) {
      Res r1 = go(p->a, q, depth);
      if (r1.v == Verdict::Yes) {
        Res r2 = go(p->b, q, depth);
        if (r2.v == Verdict::Yes) return r2;
        acc = merge_or(acc, r2);
      } else {
        acc = merge_or(acc, r1);
      }
    }

    // Top atom: top^f >= any f-pure atom (Top + Proj).
    if (p->kind == PrinKind::Proj && p->a->kind == PrinKind::Top &&
        q->kind == PrinKind::Proj && q->facet == p->facet) {
      return {Verdict::Yes};
    }

    return hyp_routes(p, q, depth, acc);
  }

  Res hyp_routes(const PrinPtr& p, const PrinPtr& q, int depth, Res acc) {
    if (hyps_.empty() && !opts_.subterm_trans) return acc;
    if (depth <= 0) {
      budget_hit_ = true;
      acc.saw_budget = true;
      return acc;
    }

    // Trans through a hypothesis: p >= h1, h2 >= q.
    for (auto& [h1, h2] : hyps_) {
      if (prin_eq(h1, h2)) continue;
      Res r1 = go(p, h1, depth - 1);
      if (r1.v != Verdict::Yes) {
        acc = merge_or(acc, r1);
        continue;
      }
      Res r2 = go(h2, q, depth - 1);
      if (r2.v == Verdict::Yes) return r2;
      acc = merge_or(acc, r2);
    }

    // Trans through canonical subterm midpoints of either side.
    if (opts_.subterm_trans) {
      std::vector<PrinPtr> cands;
      subterms(p, cands);
      subterms(q, cands);
      for (auto& m : cands) {
        if (is_atom(m)) continue;
        if (prin_eq(m, p) || prin_eq(m, q)) continue;
        Res r1 = go(p, m, depth - 1);
        if (r1.v != Verdict::Yes) {
          acc = merge_or(acc, r1);
          continue;
        }
        Res r2 = go(m, q, depth - 1);
        if (r2.v == Verdict::Yes) return r2;
        acc = merge_or(acc, r2);
      }
    }
    return acc;
  }
};

// One-shot helpers. Each call builds a fresh solver, so concurrent use from
// multiple threads is safe.
inline bool acts_for(const DelegationContext& ctx, const PrinPtr& p, const PrinPtr& q) {
  ActsForSolver s(ctx);
  return s.acts_for(p, q);
}

// p flows to q:  q^c >= p^c  and  p^i >= q^i  and  p^a >= q^a
inline bool flows_to(ActsForSolver& s, const PrinPtr& p, const PrinPtr& q) {
  return s.acts_for(p_proj(q, Facet::C), p_proj(p, Facet::C)) &&
         s.acts_for(p_proj(p, Facet::I), p_proj(q, Facet::I)) &&
         s.acts_for(p_proj(p, Facet::A), p_proj(q, Facet::A));
}

inline bool flows_to(const DelegationContext& ctx, const PrinPtr& p, const PrinPtr& q) {
  ActsForSolver s(ctx);
  return flows_to(s, p, q);
}

inline bool prin_equiv(ActsForSolver& s, const PrinPtr& p, const PrinPtr& q) {
  return s.acts_for(p, q) && s.acts_for(q, p);
}

}  // namespace flaqr
