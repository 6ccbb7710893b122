// Scratch driver: explores the PAndL policy readings and the {x,y} closure
// size so the lattice constants can be pinned. Not part of the test suite.

#include <cstdio>
#include <string>
#include <vector>

#include "flaqr/actsfor.hpp"
#include "flaqr/principal.hpp"
#include "saturation_oracle.hpp"

using namespace flaqr;
using flaqr::testing::PAndLPolicy;
using flaqr::testing::oracle_acts_for;

static const char* pol_name(PAndLPolicy p) {
  switch (p) {
    case PAndLPolicy::LeftOnly: return "left";
    case PAndLPolicy::Some: return "some";
    case PAndLPolicy::All: return "all";
  }
  return "?";
}

// Closure of {x,y} under /\ \/ (*) (+) up to a combination depth, quotiented
// by mutual oracle acts-for; top/bot adjoined afterwards.
static std::vector<PrinPtr> closure(PAndLPolicy pol, int depth, size_t cap, bool* hit_cap) {
  DelegationContext empty;
  auto x = p_prim("x"), y = p_prim("y");
  std::vector<PrinPtr> pts = {canonical(x), canonical(y)};
  *hit_cap = false;
  auto equiv = [&](const PrinPtr& a, const PrinPtr& b) {
    return oracle_acts_for(empty, a, b, pol) && oracle_acts_for(empty, b, a, pol);
  };
  for (int d = 0; d < depth; ++d) {
    std::vector<PrinPtr> fresh;
    size_t base = pts.size();
    for (size_t i = 0; i < base; ++i) {
      for (size_t j = 0; j < base; ++j) {
        for (PrinKind k : {PrinKind::And, PrinKind::Or, PrinKind::PAnd, PrinKind::POr}) {
          PrinPtr t = canonical(p_bin(k, pts[i], pts[j]));
          bool dup = false;
          for (auto& p : pts)
            if (prin_eq(p, t) || equiv(p, t)) { dup = true; break; }
          if (!dup)
            for (auto& p : fresh)
              if (prin_eq(p, t) || equiv(p, t)) { dup = true; break; }
          if (!dup) fresh.push_back(t);
          if (pts.size() + fresh.size() > cap) { *hit_cap = true; goto done; }
        }
      }
    }
  done:
    if (fresh.empty() || *hit_cap) {
      for (auto& f : fresh) pts.push_back(f);
      break;
    }
    for (auto& f : fresh) pts.push_back(f);
  }
  pts.push_back(canonical(p_bot()));
  pts.push_back(canonical(p_top()));
  return pts;
}

int main() {
  DelegationContext empty;
  auto x = p_prim("x"), y = p_prim("y");

  for (PAndLPolicy pol : {PAndLPolicy::LeftOnly, PAndLPolicy::Some, PAndLPolicy::All}) {
    printf("== policy %s\n", pol_name(pol));
    // chain: x/\y >= x(*)y >= x/\(x(+)y) >= x(+)y >= x\/y, all strict
    PrinPtr chain[5] = {
        p_and(x, y),
        p_pand(x, y),
        p_and(x, p_por(x, y)),
        p_por(x, y),
        p_or(x, y),
    };
    for (int i = 0; i + 1 < 5; ++i) {
      bool fwd = oracle_acts_for(empty, chain[i], chain[i + 1], pol);
      bool bwd = oracle_acts_for(empty, chain[i + 1], chain[i], pol);
      printf("  link %d: fwd=%d bwd=%d\n", i, fwd, bwd);
    }
    for (int depth = 1; depth <= 3; ++depth) {
      bool cap = false;
      auto pts = closure(pol, depth, 64, &cap);
      printf("  closure depth %d: %zu points%s\n", depth, pts.size(), cap ? " (cap hit)" : "");
      if (depth == 2 && !cap && pts.size() < 40) {
        for (auto& p : pts) printf("    %s\n", to_string(p).c_str());
      }
    }
  }
  return 0;
}
