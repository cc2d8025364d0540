#pragma once

#include <optional>
#include <string>
#include <vector>

#include "brickelast/element.hpp"

namespace brickelast {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Everything the structural checks need. Built either from an in-process
/// ReferenceElement or from a loaded element file; loaded data is checked
/// as-is so that file corruption shows up instead of being silently rebuilt.
struct ElementCheckInput {
  ElementVariant variant = ElementVariant::Full;
  std::vector<SymPolyMatrix> stress_basis;
  std::vector<VectorPoly> displacement_basis;
  std::vector<DofFunctional> dofs;
  std::optional<RatMatrix> nodal_coeffs;
};

ElementCheckInput check_input_from(const ReferenceElement& el);

/// Runs the full exact-arithmetic structural audit: dimension counts, pattern
/// membership, divergence constraints, the 102/24/78 rank ledger,
/// unisolvency, trace degrees, face-trace determination and (rigid variant)
/// strain-free displacement members.
std::vector<CheckResult> run_element_checks(const ElementCheckInput& in);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace brickelast
