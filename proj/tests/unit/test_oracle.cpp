#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "tucore/errors.hpp"
#include "tucore/oracle.hpp"
#include "tucore/polytope.hpp"

using namespace tucore;

namespace {
bool same_set(const VertexSet& a, const VertexSet& b, double tol = 1e-7) {
  if (a.size() != b.size()) return false;
  for (const auto& p : a.points)
    if (!b.find(p, tol)) return false;
  return true;
}
}  // namespace

TEST_CASE("naive enumeration examples") {
  const auto g3 = enumerate_vertices_naive(fixtures::g3());
  REQUIRE(g3.size() == 3);
  CHECK(g3.source == VertexSource::kOracle);
  CHECK(g3.proven_complete);
  CHECK(g3.find(Eigen::Vector3d(1, 0, 0)));
  CHECK(g3.find(Eigen::Vector3d(0, 1, 0)));
  CHECK(g3.find(Eigen::Vector3d(0, 0, 1)));

  const auto add = enumerate_vertices_naive(fixtures::additive123());
  REQUIRE(add.size() == 1);
  CHECK((add.points[0] - Eigen::Vector3d(1, 2, 3)).cwiseAbs().maxCoeff() <= 1e-12);

  CHECK(enumerate_vertices_naive(make_nonconvex_game(3)).empty());
  CHECK(enumerate_vertices_naive(TUGame(1, {0.0, 2.5})).size() == 1);
  CHECK_THROWS_AS(enumerate_vertices_naive(make_reference_museum_game(7)), CapacityError);
}

TEST_CASE("naive enumeration is independent of the worker split") {
  const auto g = make_savings_game(SavingsParams::reference(5));
  const auto a = enumerate_vertices_naive(g, 1);
  const auto b = enumerate_vertices_naive(g, 3);
  CHECK(a.points == b.points);
}

TEST_CASE("exact_core_membership examples") {
  const auto g3 = fixtures::g3();
  CHECK(exact_core_membership(g3, Eigen::Vector3d(1.0 / 3, 1.0 / 3, 1.0 / 3)));
  CHECK(exact_core_membership(g3, Eigen::Vector3d(0.5, 0.5, 0.0)));
  CHECK_FALSE(exact_core_membership(fixtures::museum_micro(), Eigen::Vector2d(0.5, 1.5)));
  CHECK_THROWS_AS(exact_core_membership(g3, Eigen::Vector2d(1, 0)), DomainError);
}

TEST_CASE("saturation examples") {
  const auto g3 = saturation_reference(fixtures::g3(), {100, 0});
  CHECK(g3.size() == 3);
  CHECK(g3.source == VertexSource::kSaturation);
  CHECK_FALSE(g3.proven_complete);
  const auto micro = saturation_reference(fixtures::museum_micro(), {100, 0});
  REQUIRE(micro.size() == 2);
  CHECK(micro.find(Eigen::Vector2d(1, 1)));
  CHECK(micro.find(Eigen::Vector2d(2, 0)));
  CHECK(saturation_reference(make_nonconvex_game(4), {100, 0}).empty());
}

TEST_CASE("marginal vectors match naive enumeration on convex games") {
  for (int n = 2; n <= 6; ++n) {
    const auto s = make_savings_game(SavingsParams::reference(n));
    CHECK(same_set(enumerate_marginal_vectors(s), enumerate_vertices_naive(s)));
    const auto m = make_reference_museum_game(n);
    CHECK(same_set(enumerate_marginal_vectors(m), enumerate_vertices_naive(m)));
  }
  CHECK_THROWS_AS(enumerate_marginal_vectors(make_nonconvex_game(4)), DomainError);
}

TEST_CASE("vertex counts of the convex benchmark models") {
  CHECK(enumerate_vertices_naive(make_savings_game(SavingsParams::reference(6))).size() == 127);
  CHECK(enumerate_marginal_vectors(make_savings_game(SavingsParams::reference(8))).size() == 1405);
  CHECK(enumerate_marginal_vectors(make_reference_museum_game(8)).size() == 220);
  CHECK(enumerate_marginal_vectors(make_reference_museum_game(9)).size() == 341);
  CHECK(enumerate_marginal_vectors(make_reference_museum_game(10)).size() == 461);
}

TEST_CASE("saturation equals naive enumeration on small random games") {
  std::mt19937_64 rng(8);
  int tested = 0;
  for (int t = 0; t < 30; ++t) {
    const int n = 3 + t % 3;
    const auto g = fixtures::random_superadditive(n, rng, 0.3 * n);
    if (!check_nonempty(g)) continue;
    ++tested;
    const auto exact = enumerate_vertices_naive(g);
    const auto sat = saturation_reference(g, {2000, static_cast<std::uint64_t>(t)});
    CHECK(same_set(sat, exact));
    for (const auto& p : exact.points) {
      CHECK(verify_vertex(g, p));
      CHECK(exact_core_membership(g, p));
    }
  }
  CHECK(tested >= 15);
}

TEST_CASE("random convex combinations of oracle vertices are in the core") {
  const auto g = make_reference_museum_game(6);
  const auto e = enumerate_vertices_naive(g);
  std::mt19937_64 rng(2);
  std::exponential_distribution<double> ex(1.0);
  for (int t = 0; t < 200; ++t) {
    Allocation x = Allocation::Zero(6);
    double total = 0;
    for (const auto& p : e.points) {
      const double w = ex(rng);
      x += w * p;
      total += w;
    }
    CHECK(exact_core_membership(g, x / total));
  }
}
