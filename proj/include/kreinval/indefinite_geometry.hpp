#pragma once

#include <vector>

#include "kreinval/core_model.hpp"

namespace kreinval {

inline constexpr double kTolNull = 1e-9;
inline constexpr double kTolFrame = 1e-9;
inline constexpr double kTolRank = 1e-10;

enum class ConeClass { Positive, Negative, Null };

const char* to_string(ConeClass c);

/// <z, w> = sum_{i<=p} z_i conj(w_i) - sum_{j>p} z_j conj(w_j) = w^dagger z.
Complex pair(const ComplexVector& z, const ComplexVector& w, Signature sig);

struct ClassifiedVector {
  ComplexVector vector;
  double self_pairing = 0.0;
  ConeClass cone_class = ConeClass::Null;
};

/// Null band is |<z,z>| < tol_null * ||z||^2.
ClassifiedVector classify(const ComplexVector& z, Signature sig, double tol_null = kTolNull);

/// Columns span a k-dimensional subspace of C^n.
class SubspaceBasis {
 public:
  /// Throws RankDeficient when sigma_min / sigma_max < tol_rank.
  explicit SubspaceBasis(ComplexMatrix columns, double tol_rank = kTolRank);

  const ComplexMatrix& columns() const noexcept { return columns_; }
  int dim() const noexcept { return static_cast<int>(columns_.cols()); }
  int ambient() const noexcept { return static_cast<int>(columns_.rows()); }
  /// Basis of the first k columns.
  SubspaceBasis leading(int k) const;

 private:
  ComplexMatrix columns_;
};

/// G_ij = <b_j, b_i>, i.e. B^* J B.
ComplexMatrix gram(const ComplexMatrix& basis, Signature sig);
inline ComplexMatrix gram(const SubspaceBasis& basis, Signature sig) {
  return gram(basis.columns(), sig);
}

enum class Orientation { Positive, Negative };

/// Vectors with <x_i, x_j> = +delta_ij (positive) or -delta_ij (negative).
class PseudoOrthonormalFrame {
 public:
  PseudoOrthonormalFrame(Signature sig, ComplexMatrix vectors, Orientation orientation,
                         double tol = kTolFrame);

  const Signature& signature() const noexcept { return sig_; }
  const ComplexMatrix& vectors() const noexcept { return vectors_; }
  Orientation orientation() const noexcept { return orientation_; }
  int size() const noexcept { return static_cast<int>(vectors_.cols()); }
  ComplexVector vector(int i) const { return vectors_.col(i); }

 private:
  Signature sig_;
  ComplexMatrix vectors_;
  Orientation orientation_;
};

/// Indefinite Gram-Schmidt with one re-orthogonalization pass. Output spans the
/// same subspace, in the same order, so column k lies in span(v_1..v_k).
PseudoOrthonormalFrame pseudo_orthonormalize(const ComplexMatrix& vectors, Signature sig,
                                             Orientation orientation = Orientation::Positive,
                                             double tol_null = kTolNull);

/// P = X (X^dagger X)^{-1} X^dagger with X^dagger = X^* J: the projector onto
/// span(frame) along its J-orthogonal complement.
ComplexMatrix projector(const PseudoOrthonormalFrame& frame);

/// Smallest eigenvalue of the pairing restricted to span(basis), measured on a
/// Euclidean-orthonormal basis of that span so it does not depend on the basis.
double positive_cone_margin(const SubspaceBasis& basis, Signature sig);

bool subspace_in_positive_cone(const SubspaceBasis& basis, Signature sig, double tol = kTolNull);

/// Euclidean orthonormal basis for the J-orthogonal complement of span(basis).
ComplexMatrix j_orthogonal_complement(const ComplexMatrix& basis, Signature sig,
                                      double tol_rank = kTolRank);

}  // namespace kreinval
