#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>

#include "brickelast/assembly.hpp"
#include "brickelast/element_checks.hpp"
#include "brickelast/mesh.hpp"

namespace brickelast {

/// Serializable element description: construction basis, displacement basis,
/// moment set and the nodal coefficient matrix, all with exact rational
/// entries. Loading does not re-derive anything, so structural checks run on
/// the file contents as-is.
struct ElementRecord {
  ElementVariant variant = ElementVariant::Full;
  std::vector<SymPolyMatrix> stress_basis;
  std::vector<VectorPoly> displacement_basis;
  std::vector<DofFunctional> dofs;
  RatMatrix nodal_coeffs;
};

ElementRecord record_of(const ReferenceElement& el);
ElementCheckInput check_input_of(const ElementRecord& rec);

/// Versioned plain-text format; every coefficient is an exact "num/den"
/// token. Round-trips bit-for-bit.
void dump_element(std::ostream& os, const ElementRecord& rec);
ElementRecord load_element(std::istream& is);

void dump_element_file(const std::string& path, const ElementRecord& rec);
ElementRecord load_element_file(const std::string& path);

/// Legacy ASCII VTK (version 3.0) unstructured grid of the mesh with
/// vertex-averaged displacement vectors and stress tensors as point data.
void write_vtk_solution(std::ostream& os, const BrickMesh& mesh, const ReferenceElement& element,
                        const GlobalDofMap& map, const Eigen::VectorXd& sigma,
                        const Eigen::VectorXd& u);

/// Deterministic plain-text dump of the assembled blocks in coordinate
/// format, for external inspection and golden-file diffs.
void dump_system(std::ostream& os, const SaddleSystem& sys);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace brickelast
