#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace tucore {

enum class SchemeKind { kDeterministicSigns, kRandomSphere };

// "det" | "rand"
std::string_view scheme_name(SchemeKind kind);
SchemeKind parse_scheme(std::string_view text);

struct DirectionScheme {
  SchemeKind kind = SchemeKind::kRandomSphere;
  std::uint64_t seed = 0;
  double perturbation = 1e-6;  // sign scheme only; must stay below 1e-3

  void validate() const;
};

// Name of the generator and transforms, recorded in run metadata.
inline constexpr std::string_view kRngAlgorithm = "mt19937_64+splitmix64-seed+polar-normal";

// splitmix64 finalizer over (seed, index); used to derive per-run and
// per-worker stream seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Sequential stream of objective directions for one worker.
///
/// Sign scheme: uniform draw (with replacement) from {-1,+1}^n plus
/// perturbation * u with u uniform on the unit sphere. Sphere scheme: a
/// normalized standard-normal vector. Never returns the zero vector; the
/// stream is a pure function of (scheme, n).
class DirectionSampler {
 public:
  DirectionSampler(DirectionScheme scheme, int n);

  Eigen::VectorXd next();

  // Sign part of the last sign-scheme draw (for tests).
  const Eigen::VectorXd& last_signs() const { return last_signs_; }
  const DirectionScheme& scheme() const { return scheme_; }

 private:
  DirectionScheme scheme_;
  int n_;
  std::mt19937_64 engine_;
  Eigen::VectorXd last_signs_;
  bool has_spare_ = false;
  double spare_ = 0.0;

  double uniform01();  // (0, 1), 53-bit
  double normal();
  Eigen::VectorXd unit_sphere();
};

}  // namespace tucore
