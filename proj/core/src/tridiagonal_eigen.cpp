#include <algorithm>
#include <cmath>
#include <limits>

#include "condensate/error.hpp"
#include "condensate/graph_spectrum.hpp"

namespace condensate {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_finite(const SymmetricTridiagonal& m) {
  if (m.off_diagonal.size() + 1 != m.diagonal.size() && !m.diagonal.empty())
    throw ValidationError("matrix", "off-diagonal must have size n - 1");
  auto finite = [](double v) { return std::isfinite(v); };
  if (!std::all_of(m.diagonal.begin(), m.diagonal.end(), finite) ||
      !std::all_of(m.off_diagonal.begin(), m.off_diagonal.end(), finite))
    throw SolverError("tridiagonal eigensolve: non-finite entry (matrix " +
                      m.fingerprint() + ")");
}

// Implicit-shift QL on (d, e); returns false if some eigenvalue needs more
// than max_iter sweeps. e[i] couples i and i+1, e[n-1] is scratch.
bool implicit_ql(std::vector<double>& d, std::vector<double>& e, int max_iter) {
  const std::size_t n = d.size();
  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= kEps * dd) break;
      }
      if (m != l) {
        if (iter++ == max_iter) return false;
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        bool underflow = false;
        for (std::size_t i = m; i-- > l;) {
          const double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
  return true;
}

}  // namespace

std::size_t sturm_count(const SymmetricTridiagonal& matrix, double x) {
  const std::size_t n = matrix.size();
  std::size_t count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e2 = i == 0 ? 0.0 : matrix.off_diagonal[i - 1] * matrix.off_diagonal[i - 1];
    q = (matrix.diagonal[i] - x) - (i == 0 ? 0.0 : e2 / q);
    if (q == 0.0) q = -kEps * (std::abs(matrix.diagonal[i]) + std::abs(x) + kEps);
    if (q < 0.0) ++count;
  }
  return count;
}

std::vector<double> eigenvalues_bisection(const SymmetricTridiagonal& matrix) {
  require_finite(matrix);
  const std::size_t n = matrix.size();
  if (n == 0) return {};
  // Gershgorin enclosure.
  double lo = std::numeric_limits<double>::max();
  double hi = std::numeric_limits<double>::lowest();
  for (std::size_t i = 0; i < n; ++i) {
    double radius = 0.0;
    if (i > 0) radius += std::abs(matrix.off_diagonal[i - 1]);
    if (i + 1 < n) radius += std::abs(matrix.off_diagonal[i]);
    lo = std::min(lo, matrix.diagonal[i] - radius);
    hi = std::max(hi, matrix.diagonal[i] + radius);
  }
  const double pad = kEps * std::max({std::abs(lo), std::abs(hi), 1.0}) * 4.0;
  lo -= pad;
  hi += pad;

  std::vector<double> eig(n);
  for (std::size_t k = 0; k < n; ++k) {
    // k-th eigenvalue: smallest x with sturm_count(x) > k.
    double a = lo, b = hi;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      if (sturm_count(matrix, mid) > k)
        b = mid;
      else
        a = mid;
      if (b - a <= 2.0 * kEps * std::max(std::abs(a), std::abs(b))) break;
    }
    eig[k] = 0.5 * (a + b);
    lo = a;  // eigenvalues are sorted; the next one is not below this one
  }
  return eig;
}

std::vector<double> eigenvalues_tridiagonal(const SymmetricTridiagonal& matrix,
                                            const TridiagonalOptions& options) {
  require_finite(matrix);
  const std::size_t n = matrix.size();
  if (n == 0) return {};
  std::vector<double> d = matrix.diagonal;
  std::vector<double> e(n, 0.0);
  std::copy(matrix.off_diagonal.begin(), matrix.off_diagonal.end(), e.begin());

  if (!implicit_ql(d, e, options.max_sweeps_per_eigenvalue)) {
    if (!options.bisection_fallback)
      throw SolverError("tridiagonal eigensolve: QL did not converge within " +
                        std::to_string(options.max_sweeps_per_eigenvalue) +
                        " sweeps (n=" + std::to_string(n) + ", matrix " +
                        matrix.fingerprint() + ")");
    return eigenvalues_bisection(matrix);
  }
  std::sort(d.begin(), d.end());
  return d;
}

}  // namespace condensate
