#include <doctest.h>

#include <cmath>
#include <map>

#include "tucore/directions.hpp"
#include "tucore/errors.hpp"

using namespace tucore;

TEST_CASE("sphere draws have unit norm") {
  DirectionSampler s({SchemeKind::kRandomSphere, 42}, 7);
  for (int i = 0; i < 1000; ++i) CHECK(std::abs(s.next().norm() - 1.0) <= 1e-12);
}

TEST_CASE("unperturbed sign draws in n = 2") {
  DirectionSampler s({SchemeKind::kDeterministicSigns, 1, 0.0}, 2);
  for (int i = 0; i < 200; ++i) {
    const auto c = s.next();
    CHECK(std::abs(c[0]) == 1.0);
    CHECK(std::abs(c[1]) == 1.0);
  }
}

TEST_CASE("same seed, same stream") {
  for (auto kind : {SchemeKind::kDeterministicSigns, SchemeKind::kRandomSphere}) {
    DirectionSampler a({kind, 123}, 5), b({kind, 123}, 5);
    DirectionSampler other({kind, 124}, 5);
    bool differs = false;
    for (int i = 0; i < 1000; ++i) {
      const auto x = a.next();
      REQUIRE(x == b.next());
      differs = differs || x != other.next();
    }
    CHECK(differs);
  }
}

TEST_CASE("sphere draws look rotation invariant") {
  DirectionSampler s({SchemeKind::kRandomSphere, 2024}, 3);
  const int draws = 100000;
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  Eigen::Matrix3d second = Eigen::Matrix3d::Zero();
  for (int i = 0; i < draws; ++i) {
    const Eigen::Vector3d c = s.next();
    mean += c;
    second += c * c.transpose();
  }
  mean /= draws;
  second /= draws;
  const Eigen::Matrix3d cov = second - mean * mean.transpose();
  CHECK(mean.cwiseAbs().maxCoeff() <= 0.02);
  CHECK((cov - Eigen::Matrix3d::Identity() / 3.0).cwiseAbs().maxCoeff() <= 0.02);
}

TEST_CASE("sign vectors are uniform") {
  for (int n = 1; n <= 4; ++n) {
    DirectionSampler s({SchemeKind::kDeterministicSigns, 77, 0.0}, n);
    const int draws = 100000;
    std::map<int, int> count;
    for (int i = 0; i < draws; ++i) {
      const auto c = s.next();
      int code = 0;
      for (int j = 0; j < n; ++j) {
        REQUIRE(std::abs(c[j]) == 1.0);
        code = 2 * code + (c[j] > 0);
      }
      ++count[code];
    }
    const double p = 1.0 / (1 << n);
    const double sigma = std::sqrt(draws * p * (1 - p));
    CHECK(count.size() == static_cast<std::size_t>(1 << n));
    for (const auto& [code, k] : count) CHECK(std::abs(k - draws * p) <= 5 * sigma);
  }
}

TEST_CASE("perturbed sign vectors stay within epsilon") {
  const double eps = 1e-6;
  DirectionSampler s({SchemeKind::kDeterministicSigns, 5, eps}, 6);
  for (int i = 0; i < 1000; ++i) {
    const auto c = s.next();
    CHECK((c - s.last_signs()).norm() <= eps + 1e-15);
    CHECK(c != s.last_signs());
  }
}

TEST_CASE("scheme validation and names") {
  CHECK_THROWS_AS(DirectionSampler({SchemeKind::kDeterministicSigns, 0, 1e-3}, 3), DomainError);
  CHECK_THROWS_AS(DirectionSampler({SchemeKind::kDeterministicSigns, 0, -1.0}, 3), DomainError);
  CHECK_THROWS_AS(DirectionSampler({SchemeKind::kRandomSphere, 0}, 0), DomainError);
  CHECK(parse_scheme("det") == SchemeKind::kDeterministicSigns);
  CHECK(parse_scheme("R") == SchemeKind::kRandomSphere);
  CHECK(scheme_name(SchemeKind::kRandomSphere) == "rand");
  CHECK_THROWS_AS(parse_scheme("sobol"), DomainError);
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
}
