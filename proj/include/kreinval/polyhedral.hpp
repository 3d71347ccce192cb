#pragma once

#include <cstddef>
#include <vector>

#include <nlohmann/json.hpp>

#include "kreinval/core_model.hpp"
#include "kreinval/report.hpp"

namespace kreinval {

inline constexpr std::size_t kVertexCap = 40320;
inline constexpr double kTolLp = 1e-9;

/// Pi + C: the convex hull of the S_p x S_q orbit of the base point plus the
/// cone spanned by e_i - e_j (i in the lambda block, j in the mu block).
/// Coordinates follow the canonical diagonal order.
struct PolyhedralRegion {
  Signature signature;
  RealVector base_point;
  std::vector<RealVector> vertices;
  std::vector<RealVector> generators;

  PolyhedralRegion translated(const RealVector& shift) const;
};

/// Throws SizeGuard when p! * q! exceeds vertex_cap.
PolyhedralRegion build_region(const AdmissibleSpectrum& spec, std::size_t vertex_cap = kVertexCap);

nlohmann::json region_to_json(const PolyhedralRegion& region);

struct LpCertificate {
  bool feasible = false;
  bool rejected_by_sum = false;  // coordinate-sum pre-check fired
  RealVector t;                  // vertex weights, sum 1
  RealVector s;                  // cone weights, >= 0
  double residual = 0.0;         // ||sum t w + sum s c - point||_inf on feasible
  double phase1_objective = 0.0;
  int pivots = 0;
};

/// Decides point in region with a dense Phase-I simplex (Bland's rule).
/// Throws CyclingGuard if the pivot budget runs out.
LpCertificate lp_feasible(const PolyhedralRegion& region, const RealVector& point, double tol = kTolLp);

/// Diagonal of A (block order) lies in the region of its own spectrum.
CheckReport check_diag_membership(const PseudoHermitianMatrix& a, double tol = kTolLp);

/// spec(A+B) lies in spec(A) + S_B and in spec(B) + S_A.
CheckReport check_sum_membership(const PseudoHermitianMatrix& a, const PseudoHermitianMatrix& b,
                                 double tol = kTolLp);

}  // namespace kreinval
