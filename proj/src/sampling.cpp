#include "kreinval/sampling.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace kreinval {

namespace {

ComplexMatrix thin_isometry(const ComplexMatrix& m) {
  Eigen::HouseholderQR<ComplexMatrix> qr(m);
  return qr.householderQ() * ComplexMatrix::Identity(m.rows(), m.cols());
}

double spectral_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(0);
}

// Random matrix with 2-norm exactly cap * u, u ~ U(0, 1).
ComplexMatrix random_contraction(int rows, int cols, double cap, Rng& rng) {
  ComplexMatrix k = rng.complex_normal(rows, cols);
  if (k.size() == 0) return k;
  const double target = cap * rng.uniform(0.0, 1.0);
  const double norm = spectral_norm(k);
  return norm > 0.0 ? ComplexMatrix(k * (target / norm)) : ComplexMatrix(ComplexMatrix::Zero(rows, cols));
}

}  // namespace

Rng Rng::stream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    0x6b726569u};
  Rng r(0);
  r.engine_.seed(seq);
  return r;
}

double Rng::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

double Rng::normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

Complex Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re * M_SQRT1_2, im * M_SQRT1_2};
}

ComplexMatrix Rng::complex_normal(int rows, int cols) {
  ComplexMatrix m(rows, cols);
  // Column-major fill order is part of the determinism contract.
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = complex_normal();
  return m;
}

void SamplerConfig::validate() const {
  std::ostringstream os;
  if (!(gap_min > 0.0)) os << "gap_min must be > 0; ";
  if (!(value_hi > value_lo)) os << "value_range must have hi > lo; ";
  if (!(boost_scale >= 0.0)) os << "boost_scale must be >= 0; ";
  if (!(cond_cap > 1.0)) os << "cond_cap must be > 1; ";
  if (!(contraction_cap >= 0.0 && contraction_cap < 1.0)) os << "contraction_cap must lie in [0, 1); ";
  if (max_retries < 1) os << "max_retries must be >= 1; ";
  if (!os.str().empty()) throw Error(ErrorKind::Config, os.str());
}

AdmissibleSpectrum sample_spectrum(Signature sig, const SamplerConfig& cfg, Rng& rng) {
  std::vector<double> lambdas(static_cast<std::size_t>(sig.p()));
  std::vector<double> mus(static_cast<std::size_t>(sig.q()));
  for (double& x : lambdas) x = rng.uniform(cfg.value_lo, cfg.value_hi);
  for (double& x : mus) x = rng.uniform(cfg.value_lo, cfg.value_hi);
  std::sort(lambdas.begin(), lambdas.end());
  std::sort(mus.begin(), mus.end(), std::greater<>());
  if (!lambdas.empty() && !mus.empty()) {
    const double deficit = cfg.gap_min - (lambdas.front() - mus.front());
    if (deficit > 0.0)
      for (double& x : lambdas) x += deficit;
    // Rounding in the shift must not undercut the margin.
    while (lambdas.front() - mus.front() < cfg.gap_min)
      for (double& x : lambdas) x = std::nextafter(x, std::numeric_limits<double>::infinity());
  }
  return AdmissibleSpectrum(std::move(lambdas), std::move(mus));
}

PseudoUnitary lie_algebra_exponential(Signature sig, const ComplexMatrix& generator) {
  if (generator.rows() != sig.n() || generator.cols() != sig.n())
    throw Error(ErrorKind::DimensionMismatch, "generator must be n x n");
  // X J + J X^* = 0  <=>  X^dagger = -X
  const double res = max_abs(matrix_dagger(generator, sig) + generator);
  if (res > 1e-12 * std::max(1.0, max_abs(generator))) {
    std::ostringstream os;
    os << "generator is not in u(p,q): max|XJ + JX*| = " << res;
    throw Error(ErrorKind::InvalidArgument, os.str());
  }
  ComplexMatrix u = generator.exp();
  const double scale = std::max(1.0, u.squaredNorm());
  return PseudoUnitary(sig, std::move(u), 1e-12 * scale);
}

ComplexMatrix sample_lie_algebra(Signature sig, const SamplerConfig& cfg, Rng& rng) {
  const int p = sig.p();
  const int q = sig.q();
  ComplexMatrix x = ComplexMatrix::Zero(sig.n(), sig.n());
  const ComplexMatrix hp = rng.complex_normal(p, p);
  const ComplexMatrix hq = rng.complex_normal(q, q);
  x.topLeftCorner(p, p) = 0.5 * (hp - hp.adjoint());
  x.bottomRightCorner(q, q) = 0.5 * (hq - hq.adjoint());
  if (cfg.boost_scale > 0.0 && p > 0 && q > 0) {
    const ComplexMatrix k = random_contraction(p, q, cfg.boost_scale, rng);
    x.topRightCorner(p, q) = k;
    x.bottomLeftCorner(q, p) = k.adjoint();
  }
  return x;
}

PseudoUnitary sample_pseudo_unitary(Signature sig, const SamplerConfig& cfg, Rng& rng) {
  double worst = 0.0;
  for (int attempt = 0; attempt < cfg.max_retries; ++attempt) {
    PseudoUnitary u = lie_algebra_exponential(sig, sample_lie_algebra(sig, cfg, rng));
    const double c = u.condition();
    if (c <= cfg.cond_cap) return u;
    worst = std::max(worst, c);
  }
  std::ostringstream os;
  os << "no pseudo-unitary with cond <= " << cfg.cond_cap << " in " << cfg.max_retries
     << " draws (largest seen " << worst << ")";
  throw Error(ErrorKind::RetriesExhausted, os.str());
}

PlantedInstance plant(const AdmissibleSpectrum& spec, const PseudoUnitary& u) {
  const Signature sig = spec.signature();
  const RealVector d = spec.canonical_vector();
  const ComplexMatrix a = u.matrix() * d.cast<Complex>().asDiagonal() * u.inverse();
  return PlantedInstance{PseudoHermitianMatrix::symmetrized(sig, a), spec, u};
}

PlantedInstance sample_admissible(Signature sig, const SamplerConfig& cfg, Rng& rng) {
  AdmissibleSpectrum spec = sample_spectrum(sig, cfg, rng);
  PseudoUnitary u = sample_pseudo_unitary(sig, cfg, rng);
  return plant(spec, u);
}

SubspaceBasis sample_positive_subspace(Signature sig, int k, const SamplerConfig& cfg, Rng& rng) {
  const int p = sig.p();
  const int q = sig.q();
  if (k < 1 || k > p) {
    std::ostringstream os;
    os << "positive subspace dimension " << k << " outside [1, " << p << "]";
    throw Error(ErrorKind::InvalidArgument, os.str());
  }
  const ComplexMatrix iso = thin_isometry(rng.complex_normal(p, k));
  const ComplexMatrix contraction = random_contraction(q, p, cfg.contraction_cap, rng);
  ComplexMatrix basis(sig.n(), k);
  basis.topRows(p) = iso;
  if (q > 0) basis.bottomRows(q) = contraction * iso;
  if (cfg.rotate_subspaces && q > 0) {
    const PseudoUnitary u = sample_pseudo_unitary(sig, cfg, rng);
    basis = u.matrix() * basis;
  }
  return SubspaceBasis(std::move(basis));
}

SubspaceBasis sample_positive_subspace_within(Signature sig, const ComplexMatrix& host, int k,
                                              const SamplerConfig& cfg, Rng& rng) {
  if (host.rows() != sig.n()) throw Error(ErrorKind::DimensionMismatch, "host basis rows");
  const ComplexMatrix g = gram(host, sig);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(g);
  const RealVector& d = es.eigenvalues();
  std::vector<int> pos;
  std::vector<int> neg;
  for (int i = 0; i < d.size(); ++i) {
    if (d(i) > kTolNull) pos.push_back(i);
    else if (d(i) < -kTolNull) neg.push_back(i);
    else throw Error(ErrorKind::NullDegeneracy, "host subspace is degenerate for the pairing");
  }
  const int rp = static_cast<int>(pos.size());
  const int rn = static_cast<int>(neg.size());
  if (k < 1 || k > rp) {
    std::ostringstream os;
    os << "host has positive index " << rp << ", cannot hold a " << k << "-dimensional positive subspace";
    throw Error(ErrorKind::InvalidArgument, os.str());
  }
  // J-orthonormal bases of the positive and negative parts of the host.
  ComplexMatrix plus(sig.n(), rp);
  ComplexMatrix minus(sig.n(), rn);
  for (int i = 0; i < rp; ++i)
    plus.col(i) = host * es.eigenvectors().col(pos[static_cast<std::size_t>(i)]) / std::sqrt(d(pos[static_cast<std::size_t>(i)]));
  for (int i = 0; i < rn; ++i)
    minus.col(i) = host * es.eigenvectors().col(neg[static_cast<std::size_t>(i)]) / std::sqrt(-d(neg[static_cast<std::size_t>(i)]));
  const ComplexMatrix iso = thin_isometry(rng.complex_normal(rp, k));
  const ComplexMatrix contraction = random_contraction(rn, rp, cfg.contraction_cap, rng);
  ComplexMatrix basis = plus * iso;
  if (rn > 0) basis += minus * (contraction * iso);
  return SubspaceBasis(std::move(basis));
}

PositiveFlag::PositiveFlag(IndexTuple dims, SubspaceBasis basis) : dims_(std::move(dims)), basis_(std::move(basis)) {
  if (dims_.size() < 1 || basis_.dim() != dims_.back())
    throw Error(ErrorKind::InvalidArgument, "flag basis dimension must equal the top level");
}

PseudoOrthonormalFrame sample_subordinate_frame(const PositiveFlag& flag, Signature sig, Rng& rng) {
  constexpr int kAttempts = 16;
  for (int attempt = 0;; ++attempt) {
    ComplexMatrix raw(sig.n(), flag.levels());
    for (int j = 0; j < flag.levels(); ++j) raw.col(j) = flag.level(j) * rng.complex_normal(flag.dims()[j], 1);
    try {
      return pseudo_orthonormalize(raw, sig, Orientation::Positive);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NullDegeneracy || attempt + 1 >= kAttempts) throw;
    }
  }
}

std::pair<PositiveFlag, PseudoOrthonormalFrame> sample_flag_with_subordinate(
    Signature sig, const IndexTuple& dims, const SamplerConfig& cfg, Rng& rng) {
  if (dims.size() < 1 || dims.back() > sig.p())
    throw Error(ErrorKind::InvalidArgument, "flag dimensions must lie within [1, p]");
  PositiveFlag flag(dims, sample_positive_subspace(sig, dims.back(), cfg, rng));
  PseudoOrthonormalFrame frame = sample_subordinate_frame(flag, sig, rng);
  return {std::move(flag), std::move(frame)};
}

double subordination_residual(const PositiveFlag& flag, const PseudoOrthonormalFrame& frame) {
  if (frame.size() != flag.levels()) throw Error(ErrorKind::DimensionMismatch, "frame size vs flag levels");
  const Signature sig = frame.signature();
  double worst = 0.0;
  for (int j = 0; j < flag.levels(); ++j) {
    const ComplexMatrix p = projector(pseudo_orthonormalize(flag.level(j), sig));
    const ComplexVector x = frame.vector(j);
    worst = std::max(worst, (p * x - x).norm() / x.norm());
  }
  return worst;
}

}  // namespace kreinval
