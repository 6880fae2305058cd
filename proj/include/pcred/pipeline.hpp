#pragma once

// End-to-end reductions: covariant, LLL, and the resulting unimodular change
// of coordinates, for point clusters, binary forms, pencils of ternary
// quadrics and ternary forms.
//
// Conventions. A transform U acts on forms by substitution, F -> F(U x), and
// on points contragrediently, P -> P U^{-T}; the covariant then moves to
// U^T z U, which is what LLL makes reduced.

#include "pcred/covariant.hpp"
#include "pcred/lattice.hpp"
#include "pcred/roots.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace pcred {

struct PipelineOptions {
  unsigned prec_bits = 0;  // 0: 212 bits, or 424 for ternary forms of degree >= 4
  Real tol = Real("1e-12");
  Real delta = Real("0.99");
  int max_iter = 20000;
  std::uint64_t seed = 1;
};

struct ReductionReport {
  std::string kind;  // "cluster", "binary", "pencil" or "ternary"
  std::string input_descriptor;
  unsigned precision_bits = 0;

  CMatrix covariant;    // determinant-normalized z(Z)
  RMatrix gram;         // its real part
  RMatrix reduced_gram; // U^T gram U
  std::string covariant_method;  // "minimize" or "simplex"
  UnimodularTransform transform = UnimodularTransform::identity(1);
  // Pencils only: column j holds the coefficients of the j-th new pencil
  // member in terms of the input pair.
  std::optional<UnimodularTransform> pencil_transform;

  std::optional<PointCluster> cluster;
  std::optional<PointCluster> reduced_cluster;
  std::vector<MultiPoly> input_forms;
  std::vector<MultiPoly> adjusted_forms;  // after the pencil basis change
  std::vector<MultiPoly> reduced_forms;
  std::optional<MultiPoly> binary_cubic;
  std::optional<MultiPoly> reduced_binary_cubic;

  StabilityClass stability;
  int iterations = 0;
  Real gradient_norm;
  Real theta;
  std::vector<Real> residuals;  // per computed point (intersection residuals)
  Real max_residual;
  // Max |coefficient| of the forms; for bare clusters, the largest diagonal
  // entry of the determinant-1 Gram matrix.
  Real height_before;
  Real height_after;
  bool height_warning = false;
  std::vector<std::string> notes;
};

// Largest absolute coefficient over a list of forms.
Integer coefficient_height(const std::vector<MultiPoly>& forms);

// Requires a stable cluster fixed by complex conjugation.
ReductionReport reduce_cluster(const PointCluster& cluster, const PipelineOptions& opts = {});
ReductionReport reduce_binary_form(const MultiPoly& f, const PipelineOptions& opts = {});
ReductionReport reduce_quadric_pencil(const MultiPoly& q1, const MultiPoly& q2, const PipelineOptions& opts = {});
ReductionReport reduce_ternary_form(const MultiPoly& f, const PipelineOptions& opts = {});

// det(x M1 + y M2) for the second-partial matrices of two ternary quadrics.
MultiPoly pencil_cubic(const MultiPoly& q1, const MultiPoly& q2);

}  // namespace pcred
