#include "tucore/directions.hpp"

#include <cmath>

#include "tucore/errors.hpp"

namespace tucore {

std::string_view scheme_name(SchemeKind kind) {
  return kind == SchemeKind::kDeterministicSigns ? "det" : "rand";
}

SchemeKind parse_scheme(std::string_view text) {
  if (text == "det" || text == "D") return SchemeKind::kDeterministicSigns;
  if (text == "rand" || text == "R") return SchemeKind::kRandomSphere;
  throw DomainError("unknown direction scheme '" + std::string(text) + "' (expected det or rand)");
}

void DirectionScheme::validate() const {
  if (!(perturbation >= 0.0 && perturbation < 1e-3))
    throw DomainError("sign-vector perturbation must lie in [0, 1e-3)");
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

DirectionSampler::DirectionSampler(DirectionScheme scheme, int n)
    : scheme_(scheme), n_(n), engine_(derive_seed(scheme.seed, 0)) {
  scheme_.validate();
  if (n < 1) throw DomainError("direction dimension must be >= 1");
}

double DirectionSampler::uniform01() {
  // Top 53 bits, shifted off zero.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double DirectionSampler::normal() {
  // Marsaglia polar method; spelled out so streams match across standard libraries.
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform01() - 1.0;
    v = 2.0 * uniform01() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

Eigen::VectorXd DirectionSampler::unit_sphere() {
  Eigen::VectorXd g(n_);
  double norm = 0.0;
  do {
    for (int i = 0; i < n_; ++i) g[i] = normal();
    norm = g.norm();
  } while (norm < 1e-12);
  return g / norm;
}

Eigen::VectorXd DirectionSampler::next() {
  if (scheme_.kind == SchemeKind::kRandomSphere) return unit_sphere();

  last_signs_.resize(n_);
  for (int i = 0; i < n_; ++i) last_signs_[i] = (engine_() >> 63) ? 1.0 : -1.0;
  if (scheme_.perturbation == 0.0) return last_signs_;
  return last_signs_ + scheme_.perturbation * unit_sphere();
}

}  // namespace tucore
