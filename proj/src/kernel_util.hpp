#pragma once

#include "brickelast/assembly.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace brickelast {
namespace detail {

// Scale factors carrying a reference stress value to the physical cell:
// entry (i,j) picks up h_i h_j under the diagonal Piola map. Order matches
// Sym3 storage.
inline std::array<double, 6> stress_scales(const Vec3& h) {
  return {h[0] * h[0], h[0] * h[1], h[0] * h[2], h[1] * h[1], h[1] * h[2], h[2] * h[2]};
}

inline Sym3 scale_stress(const Sym3& s, const std::array<double, 6>& sc) {
  Sym3 out = s;
  for (size_t k = 0; k < 6; ++k) out.v[k] *= sc[k];
  return out;
}

// Run a cellwise kernel either serially or with OpenMP. Results land in
// per-cell slots, so the execution order never affects the output.
template <typename F>
void for_each_cell(int ncells, Exec exec, F&& body) {
  if (exec == Exec::Parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int c = 0; c < ncells; ++c) body(c);
  } else {
    for (int c = 0; c < ncells; ++c) body(c);
  }
}

}  // namespace detail
}  // namespace brickelast
