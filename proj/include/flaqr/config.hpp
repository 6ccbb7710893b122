#pragma once

// Global configuration stack <e ; c ; t> and static fault plans.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "flaqr/ast.hpp"
#include "flaqr/principal.hpp"

namespace flaqr {

// One suspended caller: an evaluation context with exactly one expect hole,
// plus the host it runs on.
struct Frame {
  ExprPtr ctx_expr;  // contains exactly one Expect
  PrinPtr host;
};

struct GlobalConfig {
  ExprPtr expr;
  PrinPtr host;
  std::vector<Frame> stack;  // front() is the top frame
};

enum class FaultKind : uint8_t { Honest, Crash, ByzConst, ByzSeeded };

struct FaultMode {
  FaultKind kind = FaultKind::Honest;
  ExprPtr value;       // ByzConst substitute
  uint64_t seed = 0;   // ByzSeeded generator seed
};

// Static fault assignment, fixed before execution. Host names are primitive
// principal names.
struct FaultPlan {
  std::map<std::string, FaultMode> modes;

  const FaultMode* mode_of(const PrinPtr& host) const {
    if (host->kind != PrinKind::Primitive) return nullptr;
    auto it = modes.find(host->name);
    return it == modes.end() ? nullptr : &it->second;
  }
};

// Locate the unique expect in a frame context. Returns nullptr if there is
// none or more than one.
inline TypePtr unique_expect_ann(const ExprPtr& e) {
  std::vector<TypePtr> found;
  struct Walk {
    std::vector<TypePtr>& found;
    void operator()(const ExprPtr& x) {
      if (!x) return;
      if (x->kind == ExprKind::Expect) found.push_back(x->type);
      (*this)(x->e1);
      (*this)(x->e2);
      (*this)(x->e3);
    }
  } walk{found};
  walk(e);
  return found.size() == 1 ? found[0] : nullptr;
}

// Replace the unique expect with a result term (the E-RetV / E-RetFail plug).
inline ExprPtr plug_expect(const ExprPtr& e, const ExprPtr& result) {
  if (!e) return e;
  if (e->kind == ExprKind::Expect) return result;
  if (!e->e1 && !e->e2 && !e->e3) return e;
  auto n = std::make_shared<Expr>(*e);
  n->hash_cache = 0;
  n->e1 = plug_expect(e->e1, result);
  n->e2 = plug_expect(e->e2, result);
  n->e3 = plug_expect(e->e3, result);
  return n;
}

}  // namespace flaqr
