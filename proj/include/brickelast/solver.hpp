#pragma once

#include <string>
#include <vector>

#include "brickelast/assembly.hpp"
#include "brickelast/fields.hpp"
#include "brickelast/interpolation.hpp"

namespace brickelast {

struct SolveDiagnostics {
  int n = 0;            // total unknowns
  bool dense = false;   // dense fallback used
  double residual = 0;  // relative algebraic residual
};

struct MixedSolution {
  Eigen::VectorXd sigma;
  Eigen::VectorXd u;
  SolveDiagnostics diag;
};

/// Direct solve of the assembled saddle system. Dense LU with partial
/// pivoting below 2000 unknowns, sparse LU above. Throws std::runtime_error
/// when factorization fails (rank-deficient divergence block) or the
/// relative residual exceeds 1e-9.
MixedSolution solve_saddle(const SaddleSystem& sys);

enum class Recipe { PolynomialBubble, Trigonometric, LinearShear };

std::string recipe_name(Recipe r);
Recipe recipe_from_name(const std::string& name);

/// Closed-form (sigma, u) pair with sigma = 2 mu eps(u) + lambda div(u) I and
/// the body force f = div sigma, all consistent by construction. Polynomial
/// recipes carry exact representations.
struct ManufacturedCase {
  Recipe recipe = Recipe::PolynomialBubble;
  Material material;
  StressField sigma;
  DisplacementField u;
  DisplacementField div_sigma;  // also the body force
  bool zero_boundary = true;    // u vanishes on the boundary of any box with
                                // integer corner coordinates
};

/// polynomial-bubble: u_i = c_i x1(1-x1) x2(1-x2) x3(1-x3), exact polynomials.
/// trigonometric:     u_i = c_i sin(pi x1) sin(pi x2) sin(pi x3).
/// linear-shear:      u with per-component bilinear patterns matching the
///                    displacement space and divergence-free strain, so the
///                    exact solution lies in the discrete spaces and f = 0.
ManufacturedCase manufactured_case(const Material& material, Recipe r);

struct ErrorNorms {
  double e_sigma = 0;
  double e_u = 0;
  double e_div = 0;
};

ErrorNorms error_norms(const MixedSolution& sol, const ManufacturedCase& mc,
                       const BrickMesh& mesh, const ReferenceElement& element,
                       const GlobalDofMap& map, const GaussRule& rule,
                       Exec exec = Exec::Parallel);

/// Relative L2 gap between the expansion of div(sigma_h) in the displacement
/// space and the projection of the exact divergence; the discrete divergence
/// identity says this is zero up to roundoff.
double divergence_identity_gap(const Eigen::VectorXd& stress_coeffs,
                               const DisplacementField& div_sigma, const BrickMesh& mesh,
                               const ReferenceElement& element, const GlobalDofMap& map,
                               const GaussRule& rule, Exec exec = Exec::Parallel);

struct CaseRun {
  int n_stress = 0;
  int n_disp = 0;
  MixedSolution sol;
  ErrorNorms err;
  JumpReport jump;
  double div_gap = 0;
};

/// Assemble, solve and evaluate one manufactured problem on one mesh. The
/// natural boundary term is always assembled from the exact displacement, so
/// recipes with nonzero boundary values remain consistent.
CaseRun run_case(const ManufacturedCase& mc, const BrickMesh& mesh,
                 const ReferenceElement& element, int quad_order, Exec exec = Exec::Parallel);

struct ConvergenceRow {
  std::array<int, 3> n{};
  double h = 0;
  ErrorNorms err;
  double jump_rel = 0;
  double div_gap = 0;
  // Observed rate vs the previous level; NaN on the first row or when either
  // level sits at machine precision.
  std::array<double, 3> rate{};
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  bool exact_capture = false;  // every level resolved the solution exactly

  /// CSV with the fixed schema
  /// h,e_sigma,e_u,e_div,rate_sigma,rate_u,rate_div; undefined rates render
  /// as empty cells.
  std::string to_csv() const;
};

/// Uniform refinement study on cube subdivisions n x n x n for n in `levels`.
ConvergenceReport convergence_study(const ManufacturedCase& mc, const Box& domain,
                                    const std::vector<int>& levels, ElementVariant variant,
                                    int quad_order, Exec exec = Exec::Parallel);

}  // namespace brickelast
