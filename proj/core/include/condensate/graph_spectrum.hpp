#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace condensate {

/// How the edge weights of a defect chain are generated. Weights are always
/// indexed by edge: weight n (1-based) sits on edge {n, n+1}.
struct WeightSpec {
  enum class Kind { constant, explicit_list, reciprocal, random_uniform };

  Kind kind = Kind::constant;
  double value = 1.0;           // constant
  std::vector<double> values;   // explicit_list
  double scale = 1.0;           // reciprocal: scale / (offset + n)^power
  double offset = 1.0;
  double power = 1.0;
  double low = 0.5;             // random_uniform on (low, high]
  double high = 1.5;
  std::uint64_t seed = 0;

  static WeightSpec constant_weight(double w);
  static WeightSpec explicit_weights(std::vector<double> w);
  static WeightSpec reciprocal(double scale, double offset, double power);
  static WeightSpec random(double low, double high, std::uint64_t seed);

  /// Weights for a chain with `edges` edges. Throws ValidationError when the
  /// generator cannot produce that many strictly positive weights.
  std::vector<double> generate(std::size_t edges) const;
};

std::string to_string(WeightSpec::Kind kind);
WeightSpec::Kind weight_kind_from_string(const std::string& name);

/// A finite chain of surface defects: `count` sites joined by a weighted path.
struct DefectLattice {
  std::size_t count = 1;
  std::vector<double> weights;  // size count - 1
  double delta = 0.0;           // target lim L / n(L)
  WeightSpec weight_spec;

  static DefectLattice build(std::size_t count, const WeightSpec& spec,
                             double delta = 0.0);

  void validate() const;
};

/// Symmetric tridiagonal matrix: diagonal[i], and off_diagonal[i] coupling
/// rows i and i+1.
struct SymmetricTridiagonal {
  std::vector<double> diagonal;
  std::vector<double> off_diagonal;

  std::size_t size() const noexcept { return diagonal.size(); }
  double trace() const noexcept;
  std::string fingerprint() const;
};

/// Positive semidefinite path-graph Laplacian,
/// (Lf)(n) = sum_m gamma_nm (f(n) - f(m)). Row sums vanish exactly up to
/// floating-point rounding of the weights themselves.
SymmetricTridiagonal build_path_laplacian(const DefectLattice& lattice);

struct TridiagonalOptions {
  int max_sweeps_per_eigenvalue = 60;
  bool bisection_fallback = true;
};

/// All eigenvalues, ascending, with multiplicity. Implicit-shift QL first;
/// if that stalls, Sturm-sequence bisection.
std::vector<double> eigenvalues_tridiagonal(const SymmetricTridiagonal& matrix,
                                            const TridiagonalOptions& options = {});

/// Eigenvalues by Sturm bisection alone (also used as the fallback path).
std::vector<double> eigenvalues_bisection(const SymmetricTridiagonal& matrix);

/// Number of eigenvalues strictly below x.
std::size_t sturm_count(const SymmetricTridiagonal& matrix, double x);

/// max_i |(M 1)_i|, i.e. how far the constant vector is from the kernel.
double zero_mode_residual(const SymmetricTridiagonal& matrix);

/// Convenience: Laplacian spectrum of a lattice.
std::vector<double> graph_spectrum(const DefectLattice& lattice);

}  // namespace condensate
