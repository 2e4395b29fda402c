#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "tucore/approx.hpp"
#include "tucore/directions.hpp"
#include "tucore/errors.hpp"
#include "tucore/lp.hpp"
#include "tucore/oracle.hpp"

using namespace tucore;

TEST_CASE("build_core_lp shapes") {
  const CoreLp g3(fixtures::g3());
  CHECK(g3.inequality_count() == 6);
  CHECK(g3.efficiency_rhs() == 1.0);
  for (ConstraintId t = 1; t < 7; ++t) CHECK(g3.rhs(t) == 0.0);

  const CoreLp micro(fixtures::museum_micro());
  CHECK(micro.inequality_count() == 2);
  CHECK(micro.efficiency_rhs() == 2.0);
  CHECK(micro.rhs(1) == 1.0);
  CHECK(micro.rhs(2) == 0.0);

  CHECK(build_core_lp(make_savings_game(SavingsParams::reference(6))).inequality_count() == 62);
  CHECK(g3.row(5) == Eigen::RowVector3d(1, 0, 1));
}

TEST_CASE("solve_vertex examples") {
  const CoreLp g3(fixtures::g3());
  const auto sol = solve_vertex(g3, Eigen::Vector3d(1, 0, 0));
  REQUIRE(sol);
  CHECK((sol->x - Eigen::Vector3d(1, 0, 0)).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(sol->objective == doctest::Approx(1.0));
  CHECK(sol->basis.rows.size() == 3);

  const CoreLp add(fixtures::additive123());
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  for (int t = 0; t < 20; ++t) {
    const Eigen::Vector3d c(nd(rng), nd(rng), nd(rng));
    const auto s = solve_vertex(add, c);
    REQUIRE(s);
    CHECK((s->x - Eigen::Vector3d(1, 2, 3)).cwiseAbs().maxCoeff() <= 1e-9);
  }

  const CoreLp nc(make_nonconvex_game(3));
  CHECK_FALSE(solve_vertex(nc, Eigen::Vector3d(1, 2, 3)));
}

TEST_CASE("solve_vertex rejects bad directions") {
  const CoreLp g3(fixtures::g3());
  CHECK_THROWS_AS(solve_vertex(g3, Eigen::Vector3d(0, 0, 0)), DomainError);
  CHECK_THROWS_AS(solve_vertex(g3, Eigen::Vector3d(NAN, 0, 0)), DomainError);
  CHECK_THROWS_AS(solve_vertex(g3, Eigen::Vector2d(1, 0)), DomainError);
}

TEST_CASE("check_nonempty examples") {
  CHECK(check_nonempty(fixtures::g3()));
  CHECK(check_nonempty(fixtures::additive123()));
  CHECK_FALSE(check_nonempty(make_nonconvex_game(3)));
  CHECK(check_nonempty(TUGame(1, {0.0, 4.0})));
}

TEST_CASE("solutions are certified vertices and optimal against the oracle") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> nd;
  int games = 0;
  for (int trial = 0; trial < 40 && games < 20; ++trial) {
    const int n = 3 + trial % 3;
    const auto g = fixtures::random_superadditive(n, rng, 0.5 * n);
    if (!check_nonempty(g)) continue;
    ++games;
    const auto exact = enumerate_vertices_naive(g);
    const CoreLp lp(g);
    VertexSolver solver(lp);
    std::optional<Basis> warm;
    for (int t = 0; t < 25; ++t) {
      Eigen::VectorXd c(n);
      for (int i = 0; i < n; ++i) c[i] = nd(rng);
      const auto s = solver.solve(c, warm ? &*warm : nullptr);
      REQUIRE(s);
      CHECK(verify_vertex(g, s->x));
      CHECK(constraint_rank(n, s->tight_set) == n);
      double best = -1e300;
      for (const auto& v : exact.points) best = std::max(best, c.dot(v));
      CHECK(std::abs(s->objective - best) <= 1e-8 * std::max(1.0, std::abs(best)));
      // Same objective from a cold start.
      const auto cold = solve_vertex(lp, c);
      REQUIRE(cold);
      CHECK(std::abs(cold->objective - s->objective) <= 1e-9 * std::max(1.0, std::abs(best)));
      warm = s->basis;
    }
  }
  CHECK(games >= 10);
}

TEST_CASE("warm start falls back on an unusable basis") {
  const auto g = make_savings_game(SavingsParams::reference(6));
  const CoreLp lp(g);
  VertexSolver solver(lp);
  const Eigen::VectorXd c = Eigen::VectorXd::LinSpaced(6, 1, 6);
  Basis bad{{lp.efficiency_id(), 1, 1, 2, 3, 4}};
  const auto s = solver.solve(c, &bad);
  REQUIRE(s);
  const auto ref = solve_vertex(lp, c);
  CHECK(std::abs(s->objective - ref->objective) <= 1e-9 * lp.scale());
  Basis short_basis{{lp.efficiency_id()}};
  CHECK(solver.solve(c, &short_basis));
}

TEST_CASE("sign directions on a degenerate game stay certified") {
  // Pure sign vectors give tied optima; the solver must still return a vertex.
  const auto g = make_reference_museum_game(8);
  const CoreLp lp(g);
  VertexSolver solver(lp);
  DirectionSampler signs({SchemeKind::kDeterministicSigns, 3, 0.0}, 8);
  std::optional<Basis> warm;
  for (int t = 0; t < 300; ++t) {
    const auto s = solver.solve(signs.next(), warm ? &*warm : nullptr);
    REQUIRE(s);
    REQUIRE(verify_vertex(g, s->x));
    warm = s->basis;
  }
  CHECK(solver.stats().warm_starts > 0);
}

TEST_CASE("check_nonempty agrees with solve on random games") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-0.5, 1.5);
  for (int t = 0; t < 60; ++t) {
    const int n = 2 + t % 4;
    const auto base = fixtures::random_superadditive(n, rng, 0.0);
    std::vector<double> v = base.values();
    v.back() *= u(rng);  // sometimes too small for a core
    const TUGame g(n, v);
    const bool ne = check_nonempty(g);
    const auto s = solve_vertex(CoreLp(g), Eigen::VectorXd::Ones(n));
    CHECK(ne == s.has_value());
  }
}

TEST_CASE("core_violation and tight_constraints") {
  const auto g = fixtures::g3();
  CHECK(core_violation(g, Eigen::Vector3d(1, 0, 0)) == 0.0);
  CHECK(core_violation(g, Eigen::Vector3d(2, -1, 0)) == doctest::Approx(1.0));
  const auto tight = tight_constraints(g, Eigen::Vector3d(1, 0, 0), 1e-9);
  CHECK(tight.front() == 7u);
  CHECK(constraint_rank(3, tight) == 3);
}
