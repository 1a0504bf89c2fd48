#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <random>

#include "condensate/bulk_spectrum.hpp"
#include "condensate/error.hpp"
#include "condensate/fingerprint.hpp"

namespace condensate {

namespace {

// Nodes (i h, j h) of the half-domain. Row i holds the contiguous run
// j in [j_lo(i), j_hi(i)].
class HalfDomainGrid {
 public:
  HalfDomainGrid(const WireParams& wire, double h) {
    wire.validate();
    if (!(h > 0.0) || !(h < wire.d / 8.0))
      throw ValidationError("bulk.h", "mesh spacing must satisfy 0 < h < d/8");
    n_ = aligned(wire.L / h, "L");
    w_ = aligned(wire.d / h, "d");
    neumann_ = wire.outer_bc == OuterBoundary::neumann;
    i_max_ = neumann_ ? n_ : n_ - 1;
    j_min_ = neumann_ ? 0 : 1;
    start_.assign(static_cast<std::size_t>(i_max_) + 2, 0);
    std::size_t total = 0;
    for (long i = 0; i <= i_max_; ++i) {
      start_[i] = total;
      const long lo = j_lo(i), hi = j_hi(i);
      if (hi >= lo) total += static_cast<std::size_t>(hi - lo + 1);
    }
    start_[i_max_ + 1] = total;
    size_ = total;
  }

  std::size_t size() const noexcept { return size_; }
  long n() const noexcept { return n_; }
  long i_max() const noexcept { return i_max_; }
  long j_lo(long i) const noexcept { return std::max(j_min_, i - w_ + 1); }
  long j_hi(long i) const noexcept { return i - 1; }

  bool contains(long i, long j) const noexcept {
    return i >= 1 && i <= i_max_ && j >= j_lo(i) && j <= j_hi(i);
  }
  std::size_t index(long i, long j) const noexcept {
    return start_[i] + static_cast<std::size_t>(j - j_lo(i));
  }
  // Half-volume weight of Neumann edge nodes; never both edges at once since
  // y = 0 and x = L only meet outside the strip.
  double weight(long i, long j) const noexcept {
    return neumann_ && (j == 0 || i == n_) ? 0.5 : 1.0;
  }
  bool neumann() const noexcept { return neumann_; }

 private:
  static long aligned(double ratio, const char* what) {
    const double r = std::round(ratio);
    if (std::abs(ratio - r) > 1e-9 * std::max(1.0, ratio))
      throw SizingError(std::string("fd2d grid: ") + what +
                        "/h must be an integer (got " + format_double(ratio) + ")");
    return static_cast<long>(r);
  }

  long n_ = 0, w_ = 0, i_max_ = 0, j_min_ = 1;
  bool neumann_ = false;
  std::vector<std::size_t> start_;
  std::size_t size_ = 0;
};

// Symmetric operator W^{-1/2} A W^{-1/2}, where A is the five-point
// Laplacian scaled by the node weights W (ghost-point reflection on Neumann
// edges).
Eigen::SparseMatrix<double> assemble(const HalfDomainGrid& grid, double h) {
  const double inv_h2 = 1.0 / (h * h);
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(grid.size() * 5);
  const long n = grid.n();
  for (long i = 1; i <= grid.i_max(); ++i) {
    for (long j = grid.j_lo(i); j <= grid.j_hi(i); ++j) {
      const std::size_t p = grid.index(i, j);
      const double wp = grid.weight(i, j);
      triplets.emplace_back(p, p, 4.0 * inv_h2);  // (w_p * 4) / w_p
      const long nbr[4][2] = {{i - 1, j}, {i + 1, j}, {i, j - 1}, {i, j + 1}};
      for (const auto& q : nbr) {
        long qi = q[0], qj = q[1];
        if (grid.neumann()) {
          if (qj == -1) qj = 1;
          if (qi == n + 1) qi = n - 1;
        }
        if (!grid.contains(qi, qj)) continue;
        const double wq = grid.weight(qi, qj);
        // Raw coefficient -1 (doubled by reflection is handled by visiting the
        // mirrored neighbor twice), scaled by w_p then symmetrized.
        const double value = -wp * inv_h2 / std::sqrt(wp * wq);
        triplets.emplace_back(p, grid.index(qi, qj), value);
      }
    }
  }
  Eigen::SparseMatrix<double> b(grid.size(), grid.size());
  b.setFromTriplets(triplets.begin(), triplets.end());
  return b;
}

std::string fd_fingerprint(const WireParams& wire, double h, std::size_t n_lowest) {
  return Fingerprint{}
      .add("fd2d")
      .add(wire.d)
      .add(wire.L)
      .add(to_string(wire.outer_bc))
      .add(h)
      .add(static_cast<std::uint64_t>(n_lowest))
      .hex();
}

std::vector<double> dense_lowest(const Eigen::SparseMatrix<double>& b, std::size_t k) {
  Eigen::MatrixXd dense(b);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw SolverError("fd2d dense eigensolve failed");
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + k};
}

// Shift-invert subspace iteration with Rayleigh-Ritz projection.
std::vector<double> subspace_lowest(const Eigen::SparseMatrix<double>& b, std::size_t k,
                                    double shift, const Fd2dOptions& options,
                                    const std::string& fingerprint) {
  const Eigen::Index n = b.rows();
  const Eigen::Index p = static_cast<Eigen::Index>(
      std::min<std::size_t>(n, k + std::max(options.extra_vectors, k)));

  Eigen::SparseMatrix<double> shifted = b;
  for (Eigen::Index i = 0; i < n; ++i) shifted.coeffRef(i, i) -= shift;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> factor(shifted);
  if (factor.info() != Eigen::Success)
    throw SolverError("fd2d: factorization of shifted operator failed (" + fingerprint + ")");

  std::mt19937 rng(options.seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::MatrixXd x(n, p);
  for (Eigen::Index c = 0; c < p; ++c)
    for (Eigen::Index r = 0; r < n; ++r) x(r, c) = dist(rng);

  double worst = 0.0;
  for (int it = 0; it < options.max_iterations; ++it) {
    Eigen::MatrixXd y = factor.solve(x);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, p);
    Eigen::MatrixXd bq = b * q;
    Eigen::MatrixXd h = q.transpose() * bq;
    h = 0.5 * (h + h.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ritz(h);
    x = q * ritz.eigenvectors();
    Eigen::MatrixXd bx = bq * ritz.eigenvectors();
    worst = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      const double theta = ritz.eigenvalues()(c);
      const double res = (bx.col(c) - theta * x.col(c)).norm();
      worst = std::max(worst, res / std::abs(theta));
    }
    if (worst <= options.tolerance) {
      const auto& ev = ritz.eigenvalues();
      return {ev.data(), ev.data() + k};
    }
  }
  throw SolverError("fd2d: subspace iteration did not converge after " +
                    std::to_string(options.max_iterations) + " iterations (residual " +
                    format_double(worst) + ", " + fingerprint + ")");
}

}  // namespace

std::size_t fd2d_unknowns(const WireParams& wire, double h) {
  return HalfDomainGrid(wire, h).size();
}

Spectrum fd2d_spectrum(const WireParams& wire, double h, std::size_t n_lowest,
                       const Fd2dOptions& options) {
  if (n_lowest < 1) throw ValidationError("bulk.n_lowest", "need at least one eigenvalue");
  const HalfDomainGrid grid(wire, h);
  if (grid.size() < n_lowest)
    throw SizingError("fd2d grid has " + std::to_string(grid.size()) +
                      " interior nodes, fewer than the " + std::to_string(n_lowest) +
                      " requested eigenvalues");
  const std::string fp = fd_fingerprint(wire, h, n_lowest);
  const Eigen::SparseMatrix<double> b = assemble(grid, h);

  Spectrum s;
  s.source = SpectrumSource::fd2d;
  s.mesh_h = h;
  s.fingerprint = fp;
  if (grid.size() <= options.dense_limit) {
    s.eigenvalues = dense_lowest(b, n_lowest);
  } else {
    s.eigenvalues = subspace_lowest(b, n_lowest, 0.5 * bulk_threshold(wire.d), options, fp);
  }
  std::sort(s.eigenvalues.begin(), s.eigenvalues.end());
  s.cutoff_energy = s.eigenvalues.back();
  return s;
}

double richardson_extrapolate(std::span<const double> mesh, std::span<const double> values) {
  if (mesh.size() != values.size() || mesh.empty())
    throw ValidationError("bulk.richardson", "need matching, nonempty mesh and value lists");
  // Neville's scheme in t = h^2, evaluated at t = 0.
  std::vector<double> p(values.begin(), values.end());
  const std::size_t n = p.size();
  for (std::size_t level = 1; level < n; ++level) {
    for (std::size_t i = 0; i + level < n; ++i) {
      const double ti = mesh[i] * mesh[i];
      const double tj = mesh[i + level] * mesh[i + level];
      p[i] = (tj * p[i] - ti * p[i + 1]) / (tj - ti);
    }
  }
  return p[0];
}

RichardsonResult richardson_ground(const WireParams& wire, std::span<const double> mesh,
                                   const Fd2dOptions& options) {
  RichardsonResult r;
  r.mesh.assign(mesh.begin(), mesh.end());
  for (double h : mesh) r.ground.push_back(fd2d_spectrum(wire, h, 1, options).ground());
  r.extrapolated = richardson_extrapolate(r.mesh, r.ground);
  return r;
}

}  // namespace condensate
