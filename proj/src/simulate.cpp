#include "fgp/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "fgp/errors.hpp"
#include "fgp/parallel.hpp"

namespace fgp {
namespace {

constexpr std::size_t kColumnChunk = 64;

}  // namespace

Grid::Grid(double T, int n) : T_(T), n_(n) {
  if (!(T > 0) || !std::isfinite(T)) throw DomainError("grid horizon must be positive");
  if (n < 2) throw DomainError("grid needs at least 2 steps");
}

Eigen::VectorXd Grid::weights() const {
  Eigen::VectorXd w = Eigen::VectorXd::Constant(n_ + 1, dt());
  w(0) *= 0.5;
  w(n_) *= 0.5;
  return w;
}

double min_eigenvalue(const Eigen::MatrixXd& sym) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

Eigen::MatrixXd increment_cov_matrix(const CovarianceModel& m, const Grid& grid) {
  const int n = grid.n();
  Eigen::MatrixXd S(n, n);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t jj) {
    const int j = static_cast<int>(jj);
    const double tj = grid.node(j), tj1 = grid.node(j + 1);
    double a_prev = cov(m, tj1, 0.0), b_prev = cov(m, tj, 0.0);
    for (int k = 0; k <= j; ++k) {
      const double tk1 = grid.node(k + 1);
      const double a = cov(m, tj1, tk1), b = cov(m, tj, tk1);
      S(j, k) = (a - a_prev) - (b - b_prev);
      a_prev = a;
      b_prev = b;
    }
  });
  S.triangularView<Eigen::StrictlyUpper>() = S.transpose();

  if (n <= kPsdCheckMaxSize) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    const double radius = std::max(std::fabs(ev.minCoeff()), std::fabs(ev.maxCoeff()));
    if (ev.minCoeff() < -1e-8 * radius) {
      std::ostringstream os;
      os << family_name(m.family()) << " increment covariance on T=" << grid.T()
         << ", n=" << n << " is not PSD: minimum eigenvalue " << ev.minCoeff();
      throw DomainError(os.str());
    }
  }
  return S;
}

IncrementFactor::IncrementFactor(Eigen::MatrixXd sigma) : L_(std::move(sigma)) {
  const Eigen::Index n = L_.rows();
  if (L_.cols() != n) throw DomainError("covariance matrix must be square");
  const Eigen::VectorXd diag = L_.diagonal();
  const double scale = diag.size() ? diag.maxCoeff() : 0.0;
  if (scale < 0.0) throw DomainError("covariance with negative diagonal");
  if (scale == 0.0) {
    if (L_.cwiseAbs().maxCoeff() != 0.0)
      throw DomainError("covariance with zero diagonal but nonzero entries");
    zero_ = true;
    return;
  }
  for (double rel : {0.0, 1e-14, 1e-12, 1e-10}) {
    // LLT reads and overwrites only the lower triangle; restore it from the
    // untouched upper triangle before each attempt.
    L_.triangularView<Eigen::StrictlyLower>() = L_.transpose();
    L_.diagonal() = diag.array() + rel * scale;
    Eigen::LLT<Eigen::Ref<Eigen::MatrixXd>, Eigen::Lower> llt(L_);
    if (llt.info() == Eigen::Success) {
      ridge_ = rel * scale;
      return;
    }
  }
  std::ostringstream os;
  os << "Cholesky factorization of a " << n << "x" << n
     << " covariance failed even with ridge 1e-10 * " << scale;
  throw FactorizationError(os.str());
}

Eigen::MatrixXd IncrementFactor::sample(int n_paths, std::uint64_t seed) const {
  if (n_paths < 0) throw DomainError("path count must be nonnegative");
  const Eigen::Index n = L_.rows();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n_paths);
  if (zero_ || n_paths == 0) return out;
  const std::size_t chunks = (n_paths + kColumnChunk - 1) / kColumnChunk;
  parallel_for(chunks, [&](std::size_t c) {
    const Eigen::Index first = static_cast<Eigen::Index>(c * kColumnChunk);
    const Eigen::Index width =
        std::min<Eigen::Index>(kColumnChunk, n_paths - first);
    Eigen::MatrixXd Z(n, width);
    for (Eigen::Index p = 0; p < width; ++p) {
      std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(first + p)));
      std::normal_distribution<double> normal;
      for (Eigen::Index i = 0; i < n; ++i) Z(i, p) = normal(rng);
    }
    out.middleCols(first, width).noalias() =
        L_.triangularView<Eigen::Lower>() * Z;
  });
  return out;
}

Eigen::MatrixXd cumulative_paths(const Eigen::MatrixXd& increments) {
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(increments.rows() + 1, increments.cols());
  for (Eigen::Index i = 0; i < increments.rows(); ++i)
    G.row(i + 1) = G.row(i) + increments.row(i);
  return G;
}

Eigen::MatrixXd sample_paths(const Eigen::MatrixXd& sigma_inc, int n_paths,
                             std::uint64_t seed) {
  IncrementFactor factor(sigma_inc);
  return cumulative_paths(factor.sample(n_paths, seed));
}

Eigen::MatrixXd FouSystem::weight_matrix() const {
  const int n = grid.n();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n + 1, n);
  for (int j = 1; j <= n; ++j)
    for (int k = 0; k < j; ++k)
      A(j, k) = std::exp(-theta * (grid.node(j) - 0.5 * (grid.node(k) + grid.node(k + 1))));
  return A;
}

FouSystem fou_system(const CovarianceModel& m, const Grid& grid, double theta) {
  if (!(theta > 0) || !std::isfinite(theta))
    throw DomainError("theta must be positive");
  const int n = grid.n();
  const double q = std::exp(-theta * grid.dt());
  const double r = std::exp(-0.5 * theta * grid.dt());

  FouSystem sys{m, grid, theta, increment_cov_matrix(m, grid), {}, {}, nullptr};
  const Eigen::MatrixXd& S = sys.sigma_inc;

  // M = A S row by row, then Sigma_zeta = M A^T column by column.
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n + 1, n);
  for (int j = 1; j <= n; ++j) M.row(j) = q * M.row(j - 1) + r * S.row(j - 1);
  sys.lse_correction = M.diagonal().head(n);

  Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(n + 1, n + 1);
  for (int i = 1; i <= n; ++i) Z.col(i) = q * Z.col(i - 1) + r * M.col(i - 1);
  // Symmetrize away the rounding asymmetry of the two recursions.
  sys.sigma_zeta = 0.5 * (Z + Z.transpose());

  sys.factor = std::make_shared<const IncrementFactor>(S);
  return sys;
}

FouDraw fou_from_increments(const FouSystem& sys, Eigen::MatrixXd dG) {
  const int n = sys.grid.n();
  if (dG.rows() != n) throw DomainError("increment matrix does not match the grid");
  const double q = std::exp(-sys.theta * sys.grid.dt());
  const double r = std::exp(-0.5 * sys.theta * sys.grid.dt());
  FouDraw d{Eigen::MatrixXd::Zero(n + 1, dG.cols()), std::move(dG)};
  for (int j = 1; j <= n; ++j) d.zeta.row(j) = q * d.zeta.row(j - 1) + r * d.dG.row(j - 1);
  return d;
}

FouDraw fou_paths(const FouSystem& sys, int n_paths, std::uint64_t seed) {
  return fou_from_increments(sys, sys.factor->sample(n_paths, seed));
}

}  // namespace fgp
