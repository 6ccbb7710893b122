#pragma once

// Brute-force acts-for oracle: exhaustive forward closure of the lattice and
// partial-conjunction/disjunction rules over a finite carrier, run to
// fixpoint. Used to validate the goal-directed solver; the two share only the
// canonicalizer (whose rewrites are unit-tested as two-sided derivable
// equivalences), not the search algorithm.
//
// The carrier is the canonical subterm closure of the query pair and the
// delegation context, enriched with the bridge terms the closed-world rules
// need: And(x,y) for each PAnd(x,y), PAnd(x,y)/Or(x,y) for each POr(x,y),
// and the chain suffixes of flattened conjunctions/disjunctions.

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "flaqr/actsfor.hpp"
#include "flaqr/principal.hpp"

namespace flaqr::testing {

enum class PAndLPolicy { LeftOnly, Some, All };

class SaturationOracle {
 public:
  SaturationOracle(const DelegationContext& ctx, const PrinPtr& p, const PrinPtr& q,
                   PAndLPolicy policy = PAndLPolicy::LeftOnly)
      : policy_(policy) {
    seed(canonical(p));
    seed(canonical(q));
    for (auto& [h1, h2] : ctx.pairs) {
      size_t a = seed(canonical(h1));
      size_t b = seed(canonical(h2));
      hyp_edges_.emplace_back(a, b);
      for (Facet f : {Facet::C, Facet::I, Facet::A}) {
        size_t af = seed(facet_component(h1, f));
        size_t bf = seed(facet_component(h2, f));
        hyp_edges_.emplace_back(af, bf);
      }
    }
    enrich();
    saturate();
  }

  bool acts_for(const PrinPtr& p, const PrinPtr& q) {
    size_t a = lookup(canonical(p));
    size_t b = lookup(canonical(q));
    return edge(a, b);
  }

  size_t carrier_size() const { return terms_.size(); }

 private:
  PAndLPolicy policy_;
  std::vector<PrinPtr> terms_;
  std::unordered_map<size_t, std::vector<size_t>> index_;  // hash -> ids
  std::vector<std::pair<size_t, size_t>> hyp_edges_;
  std::vector<std::vector<uint64_t>> reach_;
  size_t words_ = 0;

  bool edge(size_t a, size_t b) const { return (reach_[a][b >> 6] >> (b & 63)) & 1; }
  bool set_edge(size_t a, size_t b) {
    uint64_t& w = reach_[a][b >> 6];
    uint64_t bit = 1ull << (b & 63);
    if (w & bit) return false;
    w |= bit;
    return true;
  }

  size_t find(const PrinPtr& t) const {
    auto it = index_.find(prin_hash(t));
    if (it == index_.end()) return SIZE_MAX;
    for (size_t id : it->second)
      if (prin_eq(terms_[id], t)) return id;
    return SIZE_MAX;
  }

  // Insert a canonical term and its subterms.
  size_t seed(const PrinPtr& t) {
    size_t id = find(t);
    if (id != SIZE_MAX) return id;
    id = terms_.size();
    terms_.push_back(t);
    index_[prin_hash(t)].push_back(id);
    switch (t->kind) {
      case PrinKind::And:
      case PrinKind::Or:
      case PrinKind::PAnd:
      case PrinKind::POr:
        seed(t->a);
        seed(t->b);
        break;
      default:
        break;
    }
    return id;
  }

  size_t lookup(const PrinPtr& t) {
    size_t id = find(t);
    if (id != SIZE_MAX) return id;
    // Query outside the saturated carrier: extend and re-saturate.
    seed(t);
    enrich();
    saturate();
    return find(t);
  }

  static PrinPtr norm_and(const PrinPtr& x, const PrinPtr& y) {
    return canonical(p_and(x, y));
  }
  static PrinPtr norm_or(const PrinPtr& x, const PrinPtr& y) {
    return canonical(p_or(x, y));
  }

  void enrich() {
    // Two enrichment rounds give the bridge terms of bridge terms, which is
    // as deep as the closed rule set ever needs for small queries.
    for (int round = 0; round < 2; ++round) {
      std::vector<PrinPtr> snapshot = terms_;
      for (auto& t : snapshot) {
        if (t->kind == PrinKind::PAnd) {
          seed(norm_and(t->a, t->b));  // AndPAnd bridge
          seed(canonical(p_por(t->a, t->b)));
        } else if (t->kind == PrinKind::POr) {
          seed(canonical(p_pand(t->a, t->b)));  // PAndPOr bridge
          seed(norm_or(t->a, t->b));            // POrOr bridge
        }
      }
    }
  }

  void saturate() {
    size_t n = terms_.size();
    words_ = (n + 63) / 64;
    reach_.assign(n, std::vector<uint64_t>(words_, 0));

    // Refl + Bot edges; Top^f over same-facet atoms.
    for (size_t i = 0; i < n; ++i) {
      set_edge(i, i);
      if (terms_[i]->kind == PrinKind::Bot)
        for (size_t j = 0; j < n; ++j) set_edge(j, i);
    }
    for (size_t i = 0; i < n; ++i) {
      auto& t = terms_[i];
      if (t->kind == PrinKind::Proj && t->a->kind == PrinKind::Top) {
        for (size_t j = 0; j < n; ++j) {
          auto& u = terms_[j];
          if (u->kind == PrinKind::Proj && u->facet == t->facet) set_edge(i, j);
        }
      }
    }
    for (auto& [a, b] : hyp_edges_) set_edge(a, b);

    // Axiom edges between structurally related nodes.
    for (size_t i = 0; i < n; ++i) {
      auto& t = terms_[i];
      if (t->kind == PrinKind::PAnd) {
        size_t conj = find(norm_and(t->a, t->b));
        if (conj != SIZE_MAX) set_edge(conj, i);  // AndPAnd
        size_t por = find(canonical(p_por(t->a, t->b)));
        if (por != SIZE_MAX) set_edge(i, por);  // PAndPOr
      }
      if (t->kind == PrinKind::POr) {
        size_t disj = find(norm_or(t->a, t->b));
        if (disj != SIZE_MAX) set_edge(i, disj);  // POrOr
      }
    }

    bool changed = true;
    while (changed) {
      changed = false;
      for (size_t i = 0; i < n; ++i) {
        auto& t = terms_[i];
        switch (t->kind) {
          case PrinKind::And: {
            size_t l = find(t->a), r = find(t->b);
            for (size_t v = 0; v < n; ++v) {
              if ((edge(l, v) || edge(r, v)) && set_edge(i, v)) changed = true;  // ConjL
              if (edge(v, l) && edge(v, r) && set_edge(v, i)) changed = true;    // ConjR
            }
            break;
          }
          case PrinKind::Or: {
            size_t l = find(t->a), r = find(t->b);
            for (size_t v = 0; v < n; ++v) {
              if (edge(l, v) && edge(r, v) && set_edge(i, v)) changed = true;    // DisjL
              if ((edge(v, l) || edge(v, r)) && set_edge(v, i)) changed = true;  // DisjR
            }
            break;
          }
          case PrinKind::PAnd: {
            size_t l = find(t->a), r = find(t->b);
            for (size_t v = 0; v < n; ++v) {
              bool prem = false;
              switch (policy_) {
                case PAndLPolicy::LeftOnly: prem = edge(l, v); break;
                case PAndLPolicy::Some: prem = edge(l, v) || edge(r, v); break;
                case PAndLPolicy::All: prem = edge(l, v) && edge(r, v); break;
              }
              if (prem && set_edge(i, v)) changed = true;                        // PAndL
              if (edge(v, l) && edge(v, r) && set_edge(v, i)) changed = true;    // PAndR
            }
            break;
          }
          default:
            break;
        }
      }
      // Trans
      for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) {
          if (i != j && edge(i, j)) {
            for (size_t w = 0; w < words_; ++w) {
              uint64_t nv = reach_[i][w] | reach_[j][w];
              if (nv != reach_[i][w]) {
                reach_[i][w] = nv;
                changed = true;
              }
            }
          }
        }
      }
    }
  }
};

inline bool oracle_acts_for(const DelegationContext& ctx, const PrinPtr& p, const PrinPtr& q,
                            PAndLPolicy policy = PAndLPolicy::LeftOnly) {
  SaturationOracle o(ctx, p, q, policy);
  return o.acts_for(p, q);
}

}  // namespace flaqr::testing
