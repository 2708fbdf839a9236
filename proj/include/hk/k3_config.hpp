#pragma once

#include <numeric>
#include <vector>

#include "hk/common.hpp"
#include "hk/kodaira.hpp"

// Fiber-configuration accounting for an elliptic fibration with section over
// the sphere: Euler-number budget, base-moduli count, and the per-fiber
// gluing-parameter counts whose grand total is always 20.

namespace hk {

struct FiberConfig {
  std::vector<KodairaFiber> fibers;
};

// finite-monodromy fibers carry a flat sector model; the I_nu / I_nu* rows
// (nu >= 1) instead carry chains of monopole bubbles
inline bool finite_monodromy(const KodairaFiber& f) {
  if (f.type == KodairaType::I) return false;
  if (f.type == KodairaType::Istar) return f.nu == 0;
  return f.type != KodairaType::I0;
}

struct ValidationReport {
  bool pass = false;
  int euler_sum = 0;
  int k1 = 0, k2 = 0, k3 = 0;  // finite-monodromy, I_nu, I_nu* counts
  bool euler_ok = false;       // Euler numbers sum to 24
  bool base_ok = false;        // 2 k1 + k2 + 2 k3 >= 6, so the base family is nonempty
};

inline ValidationReport validate(const FiberConfig& cfg) {
  ValidationReport rep;
  for (const KodairaFiber& f : cfg.fibers) {
    rep.euler_sum += euler_number(f);
    if (finite_monodromy(f))
      ++rep.k1;
    else if (f.type == KodairaType::I)
      ++rep.k2;
    else if (f.type == KodairaType::Istar)
      ++rep.k3;
    // smooth I0 rows contribute nothing
  }
  rep.euler_ok = rep.euler_sum == 24;
  rep.base_ok = 2 * rep.k1 + rep.k2 + 2 * rep.k3 >= 6;
  rep.pass = rep.euler_ok && rep.base_ok;
  return rep;
}

struct ModuliDims {
  int dim_base = 0;           // 2 k1 + k2 + 2 k3 - 5
  std::vector<int> dim_u;     // per finite-monodromy fiber: b2 - 1
  std::vector<int> dim_v;     // per I_nu fiber: nu - 1
  std::vector<int> dim_w;     // per I_nu* fiber: nu + 4
  int total = 0;              // 1 + dim_base + sum of the above
};

inline ModuliDims moduli_dims(const FiberConfig& cfg) {
  const ValidationReport rep = validate(cfg);
  if (!rep.pass) throw InvalidConfig("moduli_dims: fiber configuration fails validation");
  ModuliDims out;
  out.dim_base = 2 * rep.k1 + rep.k2 + 2 * rep.k3 - 5;
  for (const KodairaFiber& f : cfg.fibers) {
    if (finite_monodromy(f))
      out.dim_u.push_back(sector_h2_rank(f.type) - 1);
    else if (f.type == KodairaType::I)
      out.dim_v.push_back(f.nu - 1);
    else if (f.type == KodairaType::Istar)
      out.dim_w.push_back(f.nu + 4);
  }
  auto sum = [](const std::vector<int>& v) { return std::accumulate(v.begin(), v.end(), 0); };
  out.total = 1 + out.dim_base + sum(out.dim_u) + sum(out.dim_v) + sum(out.dim_w);
  return out;
}

}  // namespace hk
