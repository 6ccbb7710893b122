#pragma once

// Quorum systems: toleration sets, attacker-set membership, the Q-Guard
// valid-quorum-type check, and majority classification.

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "flaqr/actsfor.hpp"
#include "flaqr/blame.hpp"
#include "flaqr/judgments.hpp"
#include "flaqr/principal.hpp"

namespace flaqr {

struct QuorumSystem {
  std::vector<std::set<std::string>> quorums;  // non-empty sets of host names

  std::set<std::string> universe() const {
    std::set<std::string> u;
    for (auto& q : quorums) u.insert(q.begin(), q.end());
    return u;
  }
};

// |> l: a principal's maximal authority as an availability attacker.
inline PrinPtr reach(const PrinPtr& l) { return canonical(p_reach(l)); }

namespace detail {
inline PrinPtr conj_of(const std::set<std::string>& names) {
  PrinPtr acc;
  for (auto& n : names) acc = acc ? p_and(acc, p_prim(n)) : p_prim(n);
  return acc;
}
}  // namespace detail

// T(Q): |> of each maximal host set whose simultaneous failure leaves some
// quorum intact. Those are the complements of the inclusion-minimal quorums.
// Deduplicated; the empty set is never emitted.
inline std::vector<PrinPtr> toleration_set(const QuorumSystem& q) {
  std::set<std::string> u = q.universe();
  std::vector<std::set<std::string>> complements;
  for (auto& quorum : q.quorums) {
    std::set<std::string> f;
    std::set_difference(u.begin(), u.end(), quorum.begin(), quorum.end(),
                        std::inserter(f, f.begin()));
    if (f.empty()) continue;
    complements.push_back(std::move(f));
  }
  std::vector<PrinPtr> out;
  for (size_t i = 0; i < complements.size(); ++i) {
    bool maximal = true, dup = false;
    for (size_t j = 0; j < complements.size(); ++j) {
      if (i == j) continue;
      if (complements[i] == complements[j]) {
        if (j < i) dup = true;
        continue;
      }
      if (std::includes(complements[j].begin(), complements[j].end(),
                        complements[i].begin(), complements[i].end()))
        maximal = false;
    }
    if (maximal && !dup) out.push_back(reach(detail::conj_of(complements[i])));
  }
  return out;
}

// l is a tolerated attacker: some toleration element acts for it.
inline bool in_attacker_set(const DelegationContext& ctx, const PrinPtr& l,
                            const QuorumSystem& q) {
  ActsForSolver s(ctx);
  for (auto& t : toleration_set(q))
    if (s.acts_for(t, l)) return true;
  return false;
}

// Q-Guard: no tolerated attacker can fail tau. Checking the toleration
// elements suffices since fails is monotone in the attacker; a few dominated
// attackers are sampled as a consistency cross-check.
inline bool guards(const DelegationContext& ctx, const QuorumSystem& q, const TypePtr& t,
                   bool crosscheck = true) {
  ActsForSolver s(ctx);
  for (auto& tol : toleration_set(q)) {
    if (fails(s, tol, t)) return false;
    if (crosscheck) {
      // dominated members of the attacker set must not fail tau either
      for (Facet f : {Facet::I, Facet::A}) {
        PrinPtr weaker = canonical(p_proj(tol, f));
        if (fails(s, weaker, t)) return false;
      }
    }
  }
  return true;
}

// (m, n) for an m-out-of-n majority system: every size-m subset of the
// n-host universe is a quorum and m > n/2.
inline std::optional<std::pair<int, int>> majority_bound(const QuorumSystem& q) {
  std::set<std::string> u = q.universe();
  int n = static_cast<int>(u.size());
  if (q.quorums.empty()) return std::nullopt;
  size_t m = q.quorums[0].size();
  for (auto& quorum : q.quorums)
    if (quorum.size() != m) return std::nullopt;
  if (2 * m <= static_cast<size_t>(n)) return std::nullopt;
  // all distinct size-m subsets present, and nothing else
  std::vector<std::set<std::string>> uniq;
  for (auto& quorum : q.quorums)
    if (std::find(uniq.begin(), uniq.end(), quorum) == uniq.end()) uniq.push_back(quorum);
  uint64_t expect = 1;
  for (size_t i = 0; i < m; ++i) expect = expect * (n - i) / (i + 1);
  if (uniq.size() != expect) return std::nullopt;
  return std::make_pair(static_cast<int>(m), n);
}

// B_init of the quorum system (one-to-one with the toleration set).
inline BlameConstraint quorum_init_blame(const QuorumSystem& q) {
  return init_blame(toleration_set(q));
}

}  // namespace flaqr
