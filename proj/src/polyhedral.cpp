#include "kreinval/polyhedral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "kreinval/spectral.hpp"

namespace kreinval {

namespace {

std::uint64_t factorial(int k) {
  std::uint64_t f = 1;
  for (int i = 2; i <= k; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

// Distinct permutations of a multiset, in lexicographic order of the sorted input.
std::vector<std::vector<double>> distinct_permutations(std::vector<double> values) {
  std::vector<std::vector<double>> out;
  std::sort(values.begin(), values.end());
  do {
    out.push_back(values);
  } while (std::next_permutation(values.begin(), values.end()));
  return out;
}

// Dense tableau for min sum(artificials) s.t. A x + a = b, x, a >= 0, b >= 0.
class PhaseOneSimplex {
 public:
  PhaseOneSimplex(const Eigen::MatrixXd& a, const Eigen::VectorXd& b)
      : rows_(static_cast<int>(a.rows())), cols_(static_cast<int>(a.cols())),
        tab_(Eigen::MatrixXd::Zero(rows_, cols_ + rows_ + 1)), basis_(static_cast<std::size_t>(rows_)) {
    for (int i = 0; i < rows_; ++i) {
      const double sign = b(i) < 0.0 ? -1.0 : 1.0;
      tab_.row(i).head(cols_) = sign * a.row(i);
      tab_(i, cols_ + i) = 1.0;
      tab_(i, cols_ + rows_) = sign * b(i);
      basis_[static_cast<std::size_t>(i)] = cols_ + i;
    }
    cost_ = Eigen::VectorXd::Zero(cols_ + rows_ + 1);
    for (int i = 0; i < rows_; ++i) cost_.head(cols_) -= tab_.row(i).head(cols_).transpose();
    for (int i = 0; i < rows_; ++i) cost_(cols_ + rows_) -= tab_(i, cols_ + rows_);
  }

  int solve(int max_pivots) {
    constexpr double kEps = 1e-11;
    int pivots = 0;
    while (true) {
      int enter = -1;
      for (int j = 0; j < cols_ + rows_; ++j)
        if (cost_(j) < -kEps) {
          enter = j;
          break;
        }
      if (enter < 0) return pivots;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < rows_; ++i) {
        const double piv = tab_(i, enter);
        if (piv <= kEps) continue;
        const double ratio = tab_(i, cols_ + rows_) / piv;
        if (ratio < best - kEps ||
            (ratio <= best + kEps && leave >= 0 && basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)])) {
          if (ratio < best) best = ratio;
          leave = i;
        }
      }
      if (leave < 0) throw Error(ErrorKind::SolverFailure, "phase-one objective unbounded");
      pivot(leave, enter);
      if (++pivots > max_pivots) {
        std::ostringstream os;
        os << "simplex exceeded " << max_pivots << " pivots";
        throw Error(ErrorKind::CyclingGuard, os.str());
      }
    }
  }

  double objective() const { return -cost_(cols_ + rows_); }

  Eigen::VectorXd primal() const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(cols_);
    for (int i = 0; i < rows_; ++i) {
      const int b = basis_[static_cast<std::size_t>(i)];
      if (b < cols_) x(b) = std::max(0.0, tab_(i, cols_ + rows_));
    }
    return x;
  }

 private:
  void pivot(int r, int c) {
    tab_.row(r) /= tab_(r, c);
    for (int i = 0; i < rows_; ++i)
      if (i != r && tab_(i, c) != 0.0) tab_.row(i) -= tab_(i, c) * tab_.row(r);
    if (cost_(c) != 0.0) cost_ -= cost_(c) * tab_.row(r).transpose();
    basis_[static_cast<std::size_t>(r)] = c;
  }

  int rows_;
  int cols_;
  Eigen::MatrixXd tab_;
  Eigen::VectorXd cost_;
  std::vector<int> basis_;
};

}  // namespace

PolyhedralRegion PolyhedralRegion::translated(const RealVector& shift) const {
  PolyhedralRegion out = *this;
  out.base_point += shift;
  for (auto& v : out.vertices) v += shift;
  return out;
}

PolyhedralRegion build_region(const AdmissibleSpectrum& spec, std::size_t vertex_cap) {
  const int p = spec.p();
  const int q = spec.q();
  if (factorial(p) * factorial(q) > vertex_cap) {
    std::ostringstream os;
    os << "orbit size " << p << "! * " << q << "! exceeds cap " << vertex_cap;
    throw Error(ErrorKind::SizeGuard, os.str());
  }
  PolyhedralRegion region{spec.signature(), spec.canonical_vector(), {}, {}};
  const auto lambda_perms = distinct_permutations(spec.lambdas());
  const auto mu_perms = distinct_permutations(spec.mus());
  for (const auto& lp : lambda_perms) {
    for (const auto& mp : mu_perms) {
      RealVector v(p + q);
      for (int i = 0; i < p; ++i) v(i) = lp[static_cast<std::size_t>(i)];
      for (int j = 0; j < q; ++j) v(p + j) = mp[static_cast<std::size_t>(j)];
      region.vertices.push_back(std::move(v));
    }
  }
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < q; ++j) {
      RealVector g = RealVector::Zero(p + q);
      g(i) = 1.0;
      g(p + j) = -1.0;
      region.generators.push_back(std::move(g));
    }
  }
  return region;
}

nlohmann::json region_to_json(const PolyhedralRegion& region) {
  const auto vec = [](const RealVector& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  nlohmann::json vertices = nlohmann::json::array();
  for (const auto& v : region.vertices) vertices.push_back(vec(v));
  nlohmann::json generators = nlohmann::json::array();
  for (const auto& g : region.generators) generators.push_back(vec(g));
  return {{"p", region.signature.p()},
          {"q", region.signature.q()},
          {"base_point", vec(region.base_point)},
          {"vertices", std::move(vertices)},
          {"generators", std::move(generators)}};
}

LpCertificate lp_feasible(const PolyhedralRegion& region, const RealVector& point, double tol) {
  const int n = region.signature.n();
  if (point.size() != n) throw Error(ErrorKind::DimensionMismatch, "query point dimension");
  LpCertificate cert;
  const int nv = static_cast<int>(region.vertices.size());
  const int ng = static_cast<int>(region.generators.size());
  cert.t = RealVector::Zero(nv);
  cert.s = RealVector::Zero(ng);

  const double sum_gap = std::abs(point.sum() - region.base_point.sum());
  if (sum_gap > tol) {
    cert.rejected_by_sum = true;
    cert.phase1_objective = sum_gap;
    cert.residual = sum_gap;
    return cert;
  }

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n + 1, nv + ng);
  Eigen::VectorXd b(n + 1);
  for (int k = 0; k < nv; ++k) {
    a.col(k).head(n) = region.vertices[static_cast<std::size_t>(k)];
    a(n, k) = 1.0;
  }
  for (int g = 0; g < ng; ++g) a.col(nv + g).head(n) = region.generators[static_cast<std::size_t>(g)];
  b.head(n) = point;
  b(n) = 1.0;

  PhaseOneSimplex simplex(a, b);
  cert.pivots = simplex.solve(50 * (nv + ng + n + 1) + 1000);
  cert.phase1_objective = simplex.objective();
  const Eigen::VectorXd x = simplex.primal();
  cert.t = x.head(nv);
  cert.s = x.tail(ng);
  const Eigen::VectorXd r = a * x - b;
  cert.residual = r.cwiseAbs().maxCoeff();
  cert.feasible = cert.residual <= tol;
  return cert;
}

namespace {

double certificate_score(const LpCertificate& c) {
  return c.feasible ? c.residual : std::max(c.residual, c.phase1_objective);
}

}  // namespace

CheckReport check_diag_membership(const PseudoHermitianMatrix& a, double tol) {
  CheckReport report("diag_membership", {a.signature().p(), a.signature().q(), 0, 0});
  std::optional<AdmissibleSpectrum> spec;
  try {
    spec = check_admissible(a);
  } catch (const Error& e) {
    report.fail(Outcome::NotAdmissibleInput, e.what());
    return report;
  }
  const int p = a.signature().p();
  const RealVector point = a.matrix().diagonal().real();
  const PolyhedralRegion region = build_region(*spec);
  const LpCertificate cert = lp_feasible(region, point, tol);
  report.add_le("diag_in_region", {}, certificate_score(cert), 0.0, tol);
  report.add_ge("lambda_block_sum", {}, point.head(p).sum(), region.base_point.head(p).sum(), tol);
  return report;
}

CheckReport check_sum_membership(const PseudoHermitianMatrix& a, const PseudoHermitianMatrix& b, double tol) {
  CheckReport report("sum_membership", {a.signature().p(), a.signature().q(), 0, 0});
  std::vector<AdmissibleSpectrum> specs;
  try {
    specs.push_back(check_admissible(a));
    specs.push_back(check_admissible(b));
  } catch (const Error& e) {
    report.fail(Outcome::NotAdmissibleInput, e.what());
    return report;
  }
  try {
    specs.push_back(check_admissible(a + b));
  } catch (const Error& e) {
    report.fail(Outcome::NotAdmissibleSum, e.what());
    return report;
  }
  const RealVector va = specs[0].canonical_vector();
  const RealVector vb = specs[1].canonical_vector();
  const RealVector vc = specs[2].canonical_vector();
  const LpCertificate ab = lp_feasible(build_region(specs[1]).translated(va), vc, tol);
  const LpCertificate ba = lp_feasible(build_region(specs[0]).translated(vb), vc, tol);
  report.add_le("spec_A_plus_S_B", {}, certificate_score(ab), 0.0, tol);
  report.add_le("spec_B_plus_S_A", {}, certificate_score(ba), 0.0, tol);
  return report;
}

}  // namespace kreinval
