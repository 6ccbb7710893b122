// Scratch driver #3: full depth-2 closure of {x,y} under left-bias, printed,
// using one growing oracle instance for the quotient.

#include <cstdio>
#include <vector>

#include "flaqr/actsfor.hpp"
#include "flaqr/principal.hpp"
#include "saturation_oracle.hpp"

using namespace flaqr;
using flaqr::testing::SaturationOracle;

int main() {
  DelegationContext empty;
  auto x = p_prim("x"), y = p_prim("y");
  SaturationOracle oracle(empty, x, y);

  auto equiv = [&](const PrinPtr& a, const PrinPtr& b) {
    return oracle.acts_for(a, b) && oracle.acts_for(b, a);
  };

  std::vector<PrinPtr> pts = {canonical(x), canonical(y)};
  auto add = [&](PrinPtr t) {
    t = canonical(t);
    for (auto& p : pts)
      if (prin_eq(p, t) || equiv(p, t)) return false;
    pts.push_back(t);
    return true;
  };

  for (int level = 0; level < 2; ++level) {
    size_t base = pts.size();
    std::vector<PrinPtr> snapshot(pts.begin(), pts.begin() + base);
    for (auto& a : snapshot)
      for (auto& b : snapshot)
        for (PrinKind k : {PrinKind::And, PrinKind::Or, PrinKind::PAnd, PrinKind::POr})
          add(p_bin(k, a, b));
    printf("after level %d: %zu points\n", level + 1, pts.size());
  }
  for (auto& p : pts) printf("  %s\n", to_string(p).c_str());
  printf("carrier: %zu\n", oracle.carrier_size());
  return 0;
}
