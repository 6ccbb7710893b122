// Scratch driver #4: random-pair agreement between solver and oracle
// (prototype of acceptance criterion 2).

#include <cstdio>
#include <random>
#include <vector>

#include "flaqr/actsfor.hpp"
#include "flaqr/principal.hpp"
#include "saturation_oracle.hpp"

using namespace flaqr;
using flaqr::testing::SaturationOracle;

static PrinPtr random_prin(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> leaf(0, 4), node(0, 9);
  if (depth == 0 || node(rng) < 2) {
    switch (leaf(rng)) {
      case 0: return p_prim("a");
      case 1: return p_prim("b");
      case 2: return p_prim("c");
      case 3: return p_top();
      default: return p_bot();
    }
  }
  int k = node(rng);
  if (k < 3) return p_proj(random_prin(rng, depth - 1), static_cast<Facet>(k % 3));
  PrinPtr l = random_prin(rng, depth - 1), r = random_prin(rng, depth - 1);
  switch (k % 4) {
    case 0: return p_and(l, r);
    case 1: return p_or(l, r);
    case 2: return p_pand(l, r);
    default: return p_por(l, r);
  }
}

int main(int argc, char** argv) {
  int n = argc > 1 ? atoi(argv[1]) : 1000;
  std::mt19937_64 rng(20260810);
  DelegationContext ctx;
  ctx.add(p_prim("b"), p_prim("a"));  // exercise hypothesis routes
  int mism = 0, yes = 0;
  for (int i = 0; i < n; ++i) {
    PrinPtr p = random_prin(rng, 3), q = random_prin(rng, 3);
    SaturationOracle oracle(ctx, p, q);
    bool o = oracle.acts_for(p, q);
    ActsForSolver solver(ctx);
    bool s = solver.acts_for(p, q);
    yes += o;
    if (o != s) {
      ++mism;
      if (mism <= 12)
        printf("MISMATCH oracle=%d solver=%d\n  p = %s\n  q = %s\n", o, s,
               to_string(canonical(p)).c_str(), to_string(canonical(q)).c_str());
    }
  }
  printf("%d pairs, %d oracle-yes, %d mismatches\n", n, yes, mism);
  return mism != 0;
}
