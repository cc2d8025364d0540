#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <functional>

#include "brickelast/element.hpp"
#include "brickelast/material.hpp"
#include "brickelast/mesh.hpp"
#include "brickelast/quadrature.hpp"

namespace brickelast {

/// Execution policy for cellwise kernels. Parallel runs compute per-cell
/// results concurrently and reduce in fixed cell order, so both policies
/// produce bitwise identical output.
enum class Exec { Serial, Parallel };

using VectorField3 = std::function<Vec3(const Vec3&)>;

/// Reference-cell dual basis and displacement basis evaluated at the tensor
/// Gauss points, plus the exact divergence expansion table rounded to double.
struct ElementTables {
  int nq = 0;
  int nb = 0;
  int nd = 0;
  std::vector<Vec3> qp;
  std::vector<double> qw;
  std::vector<Sym3> stress_vals;  // index q*nb + b
  std::vector<Vec3> disp_vals;    // index q*nd + c
  Eigen::MatrixXd div_table;      // nd x nb

  static ElementTables build(const ReferenceElement& el, const GaussRule& rule);
};

/// Dual basis normal-column values on the six reference faces at tensor Gauss
/// points, used for boundary load terms and jump diagnostics.
struct FaceTables {
  int nq = 0;                      // points per face
  std::vector<std::array<double, 2>> qp;  // in-face reference coordinates
  std::vector<double> qw;
  // vals[face][ (q*nb + b)*3 + i ] = reference value of entry (i, axis) of
  // dual member b at face point q; face = axis*2 + side.
  std::array<std::vector<double>, 6> vals;

  static FaceTables build(const ReferenceElement& el, const GaussRule& rule);
};

struct LocalMatrices {
  Eigen::MatrixXd a;          // nb x nb compliance form
  Eigen::MatrixXd b;          // nd x nb divergence coupling
  Eigen::MatrixXd disp_mass;  // nd x nd displacement mass
};

LocalMatrices local_matrices(const ElementTables& tables, const CellGeometry& geom,
                             const Material& material);

/// Assembled Hellinger-Reissner saddle system
///   [ A  B^T ] [ sigma ]   [ load_stress ]
///   [ B  0   ] [  u    ] = [ load_disp   ]
/// with load_stress the natural boundary term (zero when the prescribed
/// boundary displacement vanishes).
struct SaddleSystem {
  int n_stress = 0;
  int n_disp = 0;
  Eigen::SparseMatrix<double> a;
  Eigen::SparseMatrix<double> b;
  Eigen::VectorXd load_stress;
  Eigen::VectorXd load_disp;
};

SaddleSystem assemble_system(const BrickMesh& mesh, const ReferenceElement& element,
                             const GlobalDofMap& map, const Material& material,
                             const VectorField3& body_force, const GaussRule& rule,
                             Exec exec = Exec::Parallel,
                             const VectorField3* boundary_displacement = nullptr);

double stress_l2_norm(const BrickMesh& mesh, const ReferenceElement& element,
                      const GlobalDofMap& map, const Eigen::VectorXd& sigma,
                      const GaussRule& rule, Exec exec = Exec::Parallel);

struct JumpReport {
  double max_face_jump = 0.0;  // max over interior faces of the facewise L2 jump of sigma.n
  double stress_norm = 0.0;    // domain L2 norm of sigma_h
  double relative() const { return stress_norm > 0 ? max_face_jump / stress_norm : max_face_jump; }
};

/// Two-sided face quadrature of the normal trace mismatch. Zero for the
/// assembled conforming space; a test hook can perturb coefficients cellwise
/// to confirm the diagnostic reacts.
JumpReport normal_jump(const BrickMesh& mesh, const ReferenceElement& element,
                       const GlobalDofMap& map, const Eigen::VectorXd& sigma,
                       const GaussRule& rule, Exec exec = Exec::Parallel);

/// Same diagnostic on independently supplied per-cell coefficient arrays
/// (cells x nb), bypassing the global map; used by fault-injection tests.
JumpReport normal_jump_cellwise(const BrickMesh& mesh, const ReferenceElement& element,
                                const std::vector<Eigen::VectorXd>& cell_coeffs,
                                const GaussRule& rule);

}  // namespace brickelast
