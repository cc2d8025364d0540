#pragma once

#include <Eigen/Dense>

#include "brickelast/assembly.hpp"
#include "brickelast/fields.hpp"

namespace brickelast {

/// Treatment of the edge moments when interpolating a stress field.
/// Match takes the moments of the input field (canonical interpolant, well
/// defined for the smooth fields used here); Zero sets them to zero, which is
/// the variant applied to the rough part inside the regularized operator.
/// Either choice leaves the commutation identity with the divergence intact,
/// since that identity only involves face and interior moments.
enum class EdgePolicy { Match, Zero };

/// Which stress interpolant a diagnostic should exercise.
enum class StressInterp { Moment, Regularized };

/// Cellwise moment interpolant onto the stress space. Each cell pulls the
/// field back to the reference cell, evaluates the element's moments by
/// tensor Gauss quadrature and writes them through the global map. Shared
/// moments are computed from every incident cell; values disagreeing beyond
/// 1e-10 (relative) raise std::runtime_error.
Eigen::VectorXd interpolate_stress(const StressField& tau, const BrickMesh& mesh,
                                   const ReferenceElement& element, const GlobalDofMap& map,
                                   const GaussRule& rule, EdgePolicy policy = EdgePolicy::Match,
                                   Exec exec = Exec::Parallel);

/// Cellwise L2 projection onto the displacement space; coefficients are laid
/// out cell-major exactly like the displacement unknowns of the solver.
Eigen::VectorXd project_displacement(const DisplacementField& v, const BrickMesh& mesh,
                                     const ReferenceElement& element, const GaussRule& rule,
                                     Exec exec = Exec::Parallel);

/// Continuous piecewise-trilinear symmetric matrix field built from vertex
/// patch means: the value at a mesh vertex is the volume-weighted mean of the
/// field over the incident cells.
struct ClementField {
  const BrickMesh* mesh = nullptr;
  std::vector<Sym3> vertex_vals;

  Sym3 eval_ref(int cell, const Vec3& xhat) const;
  Sym3 eval(const Vec3& x) const;
};

ClementField clement_regularize(const StressField& tau, const BrickMesh& mesh,
                                const GaussRule& rule, Exec exec = Exec::Parallel);

StressField as_stress_field(const ClementField& f);

/// Regularized interpolant: the moment interpolant with zeroed edge moments
/// applied to (tau - R tau) plus the full moment interpolant of the smoothed
/// part R tau, which is representable through its own moments because it is
/// continuous across cells.
Eigen::VectorXd interpolate_stress_regularized(const StressField& tau, const BrickMesh& mesh,
                                               const ReferenceElement& element,
                                               const GlobalDofMap& map, const GaussRule& rule,
                                               Exec exec = Exec::Parallel);

/// L2 norm over the mesh of div(interpolant of tau) - (projection of div tau).
/// Zero up to roundoff/quadrature for any field with exact divergence
/// `div_tau`; the identity behind inf-sup stability.
double commutativity_residual(const StressField& tau, const DisplacementField& div_tau,
                              const BrickMesh& mesh, const ReferenceElement& element,
                              const GlobalDofMap& map, const GaussRule& rule, StressInterp which,
                              EdgePolicy moment_policy = EdgePolicy::Match,
                              Exec exec = Exec::Parallel);

/// Exact-rational version of the same identity on the reference cell: returns
/// the displacement-basis coefficients of div(interpolant) minus the L2
/// projection of the divergence. Every entry must be exactly zero.
std::vector<Rational> commutativity_residual_exact(const SymPolyMatrix& tau,
                                                   const ReferenceElement& element,
                                                   EdgePolicy policy);

/// L2 distance between a stress field and a coefficient vector in the global
/// stress space.
double stress_error_l2(const StressField& tau, const Eigen::VectorXd& coeffs,
                       const BrickMesh& mesh, const ReferenceElement& element,
                       const GlobalDofMap& map, const GaussRule& rule,
                       Exec exec = Exec::Parallel);

/// L2 distance between a vector field and cell-major displacement
/// coefficients.
double displacement_error_l2(const DisplacementField& v, const Eigen::VectorXd& coeffs,
                             const BrickMesh& mesh, const ReferenceElement& element,
                             const GaussRule& rule, Exec exec = Exec::Parallel);

/// L2 distance between div(sigma_h) and a vector field (typically the exact
/// divergence of the stress being approximated).
double divergence_error_l2(const DisplacementField& w, const Eigen::VectorXd& stress_coeffs,
                           const BrickMesh& mesh, const ReferenceElement& element,
                           const GlobalDofMap& map, const GaussRule& rule,
                           Exec exec = Exec::Parallel);

/// L2 distance between a stress field and its Clement regularization.
double clement_error_l2(const StressField& tau, const ClementField& r, const BrickMesh& mesh,
                        const GaussRule& rule, Exec exec = Exec::Parallel);

}  // namespace brickelast
