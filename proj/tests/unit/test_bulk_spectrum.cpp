#include <doctest.h>

#include <cmath>

#include <condensate/bulk_spectrum.hpp>
#include <condensate/error.hpp>

using namespace condensate;

namespace {

constexpr double kTwoPiSq = 19.739208802178716;

// Independent count of (k, m) pairs with E_{k,m} <= cutoff.
std::size_t brute_count(double d, double L, bool neumann, double cutoff) {
  const double pi2 = kPi * kPi;
  std::size_t n = 0;
  for (int k = 1; k < 1000; ++k) {
    if (2.0 * pi2 * k * k / (d * d) > cutoff) break;
    for (int m = neumann ? 0 : 1; m < 100000; ++m) {
      const double e = 2.0 * pi2 * k * k / (d * d) + pi2 * m * m / (2.0 * L * L);
      if (e > cutoff) break;
      ++n;
    }
  }
  return n;
}

}  // namespace

TEST_CASE("separable ground level") {
  WireParams w{1.0, 10.0, OuterBoundary::dirichlet};
  const Spectrum s = separable_spectrum(w, 25.0);
  CHECK(std::abs(s.ground() - 19.788556824184164) < 1e-12);
  CHECK(bulk_threshold(1.0) == doctest::Approx(kTwoPiSq).epsilon(1e-15));
  for (double e : s.eigenvalues) CHECK(e <= 25.0);
  CHECK(std::is_sorted(s.eigenvalues.begin(), s.eigenvalues.end()));
}

TEST_CASE("separable count matches lattice enumeration") {
  for (bool neumann : {false, true})
    for (double L : {2.0, 10.0, 37.5})
      for (double cutoff : {25.0, 90.0, 200.0}) {
        WireParams w{1.0, L, neumann ? OuterBoundary::neumann : OuterBoundary::dirichlet};
        const auto want = brute_count(1.0, L, neumann, cutoff);
        CHECK(separable_spectrum(w, cutoff).size() == want);
        CHECK(separable_count(w, cutoff) == want);
      }
}

TEST_CASE("separable ground approaches the threshold from above") {
  double prev = 1e300;
  for (double L : {2.0, 4.0, 8.0, 16.0, 1000.0, 1e6}) {
    const double g = separable_ground({1.0, L, OuterBoundary::dirichlet});
    CHECK(g > kTwoPiSq);
    CHECK(g < prev);
    prev = g;
  }
  CHECK(prev - kTwoPiSq < 1e-10);
  // Neumann keeps m = 0, so the ground sits exactly on the threshold.
  CHECK(separable_ground({1.0, 5.0, OuterBoundary::neumann}) == doctest::Approx(kTwoPiSq));
}

TEST_CASE("Weyl-type linear growth of the count") {
  const double cutoff = 60.0;
  const double c10 = static_cast<double>(separable_count({1.0, 10.0}, cutoff));
  for (double L : {20.0, 40.0, 80.0}) {
    const double c = static_cast<double>(separable_count({1.0, L}, cutoff));
    CHECK(std::abs(c - c10 * L / 10.0) <= 2.0 * L / 10.0 + 2.0);
  }
}

TEST_CASE("separable errors") {
  CHECK_THROWS_AS(separable_spectrum({1.0, 10.0}, 10.0), DomainError);
  CHECK_THROWS_AS(WireParams({2.0, 1.0}).validate(), ValidationError);
  try {
    WireParams{12.0, 10.0}.validate();
  } catch (const ValidationError& e) {
    CHECK(e.field() == "wire.d");
  }
}

TEST_CASE("fd2d lies above the threshold band and is deterministic") {
  WireParams w{1.0, 3.0, OuterBoundary::dirichlet};
  const Spectrum a = fd2d_spectrum(w, 1.0 / 16.0, 6);
  const Spectrum b = fd2d_spectrum(w, 1.0 / 16.0, 6);
  CHECK(a.eigenvalues == b.eigenvalues);
  REQUIRE(a.size() == 6);
  CHECK(a.mesh_h.value() == 1.0 / 16.0);
  CHECK(a.cutoff_energy == a.eigenvalues.back());
  // Five-point stencils underestimate by O(h^2); 2% is generous at h = d/16.
  for (double e : a.eigenvalues) CHECK(e > kTwoPiSq * (1.0 - 0.02));
}

TEST_CASE("fd2d dense and iterative extraction agree") {
  WireParams w{1.0, 2.5, OuterBoundary::dirichlet};
  Fd2dOptions dense;
  dense.dense_limit = 100000;
  Fd2dOptions sparse;
  sparse.dense_limit = 0;
  const auto a = fd2d_spectrum(w, 1.0 / 16.0, 5, dense);
  const auto b = fd2d_spectrum(w, 1.0 / 16.0, 5, sparse);
  for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(a.eigenvalues[i] - b.eigenvalues[i]) < 1e-8 * a.eigenvalues[i]);

  w.outer_bc = OuterBoundary::neumann;
  const auto c = fd2d_spectrum(w, 1.0 / 16.0, 5, dense);
  const auto d = fd2d_spectrum(w, 1.0 / 16.0, 5, sparse);
  for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(c.eigenvalues[i] - d.eigenvalues[i]) < 1e-8 * c.eigenvalues[i]);
  // Neumann ends relax the problem.
  CHECK(c.ground() < a.ground());
}

TEST_CASE("Richardson ground agrees with the separable model") {
  WireParams w{1.0, 6.0, OuterBoundary::dirichlet};
  const std::vector<double> mesh{1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0};
  const RichardsonResult r = richardson_ground(w, mesh);
  const double sep = separable_ground(w);
  CHECK(std::abs(r.extrapolated - sep) <= 0.01 * sep);
  CHECK(r.extrapolated > kTwoPiSq);
  // Raw values converge monotonically toward the extrapolation.
  CHECK(std::abs(r.ground[2] - r.extrapolated) < std::abs(r.ground[0] - r.extrapolated));
}

TEST_CASE("Richardson extrapolation is exact on even polynomials") {
  const std::vector<double> h{0.4, 0.2, 0.1};
  std::vector<double> v;
  for (double x : h) v.push_back(3.0 + 2.0 * x * x - 5.0 * x * x * x * x);
  CHECK(richardson_extrapolate(h, v) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("fd2d sizing and validation") {
  WireParams w{1.0, 2.0, OuterBoundary::dirichlet};
  CHECK_THROWS_AS(fd2d_spectrum(w, 0.2, 1), ValidationError);          // h >= d/8
  CHECK_THROWS_AS(fd2d_spectrum(w, 1.0 / 9.5, 1), SizingError);        // d/h not integral
  CHECK_THROWS_AS(fd2d_spectrum(w, 1.0 / 10.0, 100000), SizingError);  // too few nodes
  CHECK(fd2d_unknowns(w, 1.0 / 10.0) > 0);
}
