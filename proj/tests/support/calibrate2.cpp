// Scratch driver #2: count equivalence classes of single-op combinations over
// the full seed set {bot, x, y, top}, and of the two-level closure.

#include <cstdio>
#include <vector>

#include "flaqr/actsfor.hpp"
#include "flaqr/principal.hpp"
#include "saturation_oracle.hpp"

using namespace flaqr;
using flaqr::testing::PAndLPolicy;
using flaqr::testing::oracle_acts_for;

int main() {
  DelegationContext empty;
  auto x = p_prim("x"), y = p_prim("y");
  std::vector<PrinPtr> seeds = {p_bot(), x, y, p_top()};

  auto equiv = [&](const PrinPtr& a, const PrinPtr& b) {
    return oracle_acts_for(empty, a, b) && oracle_acts_for(empty, b, a);
  };

  std::vector<PrinPtr> pts;
  auto add = [&](PrinPtr t) {
    t = canonical(t);
    for (auto& p : pts)
      if (prin_eq(p, t) || equiv(p, t)) return;
    pts.push_back(t);
  };

  for (auto& s : seeds) add(s);
  for (auto& a : seeds)
    for (auto& b : seeds)
      for (PrinKind k : {PrinKind::And, PrinKind::Or, PrinKind::PAnd, PrinKind::POr})
        add(p_bin(k, a, b));

  printf("one-level combinations over {bot,x,y,top}: %zu classes\n", pts.size());
  for (auto& p : pts) printf("  %s\n", to_string(p).c_str());
  return 0;
}
