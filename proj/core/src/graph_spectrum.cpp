#include "condensate/graph_spectrum.hpp"

#include <cmath>
#include <random>

#include "condensate/error.hpp"
#include "condensate/fingerprint.hpp"

namespace condensate {

WeightSpec WeightSpec::constant_weight(double w) {
  WeightSpec s;
  s.kind = Kind::constant;
  s.value = w;
  return s;
}

WeightSpec WeightSpec::explicit_weights(std::vector<double> w) {
  WeightSpec s;
  s.kind = Kind::explicit_list;
  s.values = std::move(w);
  return s;
}

WeightSpec WeightSpec::reciprocal(double scale, double offset, double power) {
  WeightSpec s;
  s.kind = Kind::reciprocal;
  s.scale = scale;
  s.offset = offset;
  s.power = power;
  return s;
}

WeightSpec WeightSpec::random(double low, double high, std::uint64_t seed) {
  WeightSpec s;
  s.kind = Kind::random_uniform;
  s.low = low;
  s.high = high;
  s.seed = seed;
  return s;
}

std::vector<double> WeightSpec::generate(std::size_t edges) const {
  std::vector<double> w;
  w.reserve(edges);
  switch (kind) {
    case Kind::constant:
      if (!(value > 0.0) || !std::isfinite(value))
        throw ValidationError("lattice.weights.value", "weight must be positive");
      w.assign(edges, value);
      break;
    case Kind::explicit_list:
      if (values.size() != edges)
        throw ValidationError("lattice.weights.values",
                              "expected " + std::to_string(edges) +
                                  " weights (count - 1), got " +
                                  std::to_string(values.size()));
      w = values;
      break;
    case Kind::reciprocal:
      if (!(scale > 0.0) || !(offset > 0.0) || !std::isfinite(power))
        throw ValidationError("lattice.weights",
                              "reciprocal generator needs scale > 0, offset > 0");
      for (std::size_t n = 1; n <= edges; ++n)
        w.push_back(scale / std::pow(offset + static_cast<double>(n), power));
      break;
    case Kind::random_uniform: {
      if (!(low >= 0.0) || !(high > low))
        throw ValidationError("lattice.weights",
                              "random generator needs 0 <= low < high");
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> dist(low, high);
      for (std::size_t n = 0; n < edges; ++n) {
        // uniform_real_distribution samples [low, high); reflect onto (low, high]
        w.push_back(high - (dist(rng) - low));
      }
      break;
    }
  }
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!(w[i] > 0.0) || !std::isfinite(w[i]))
      throw ValidationError("lattice.weights",
                            "weight " + std::to_string(i + 1) +
                                " is not strictly positive");
  }
  return w;
}

std::string to_string(WeightSpec::Kind kind) {
  switch (kind) {
    case WeightSpec::Kind::constant: return "constant";
    case WeightSpec::Kind::explicit_list: return "explicit";
    case WeightSpec::Kind::reciprocal: return "reciprocal";
    case WeightSpec::Kind::random_uniform: return "random";
  }
  return "unknown";
}

WeightSpec::Kind weight_kind_from_string(const std::string& name) {
  if (name == "constant") return WeightSpec::Kind::constant;
  if (name == "explicit") return WeightSpec::Kind::explicit_list;
  if (name == "reciprocal") return WeightSpec::Kind::reciprocal;
  if (name == "random") return WeightSpec::Kind::random_uniform;
  throw ValidationError("lattice.weights.kind", "unknown weight kind '" + name + "'");
}

DefectLattice DefectLattice::build(std::size_t count, const WeightSpec& spec,
                                   double delta) {
  if (count < 1) throw ValidationError("lattice.count", "need at least one defect");
  DefectLattice lattice;
  lattice.count = count;
  lattice.weights = spec.generate(count - 1);
  lattice.delta = delta;
  lattice.weight_spec = spec;
  return lattice;
}

void DefectLattice::validate() const {
  if (count < 1) throw ValidationError("lattice.count", "need at least one defect");
  if (weights.size() != count - 1)
    throw ValidationError("lattice.weights", "need exactly count - 1 weights");
  for (double w : weights)
    if (!(w > 0.0) || !std::isfinite(w))
      throw ValidationError("lattice.weights", "weights must be strictly positive");
  if (!(delta >= 0.0) || !std::isfinite(delta))
    throw ValidationError("lattice.delta", "delta must be finite and >= 0");
}

double SymmetricTridiagonal::trace() const noexcept {
  double t = 0.0;
  for (double d : diagonal) t += d;
  return t;
}

std::string SymmetricTridiagonal::fingerprint() const {
  return Fingerprint{}.add(diagonal).add(off_diagonal).hex();
}

SymmetricTridiagonal build_path_laplacian(const DefectLattice& lattice) {
  lattice.validate();
  const std::size_t n = lattice.count;
  SymmetricTridiagonal m;
  m.diagonal.assign(n, 0.0);
  m.off_diagonal.resize(n - 1);
  for (std::size_t e = 0; e + 1 < n; ++e) {
    const double w = lattice.weights[e];
    m.diagonal[e] += w;
    m.diagonal[e + 1] += w;
    m.off_diagonal[e] = -w;
  }
  return m;
}

double zero_mode_residual(const SymmetricTridiagonal& matrix) {
  const std::size_t n = matrix.size();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = matrix.diagonal[i];
    if (i > 0) row += matrix.off_diagonal[i - 1];
    if (i + 1 < n) row += matrix.off_diagonal[i];
    worst = std::max(worst, std::abs(row));
  }
  return worst;
}

std::vector<double> graph_spectrum(const DefectLattice& lattice) {
  return eigenvalues_tridiagonal(build_path_laplacian(lattice));
}

}  // namespace condensate
