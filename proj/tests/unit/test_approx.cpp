#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "tucore/approx.hpp"
#include "tucore/errors.hpp"
#include "tucore/oracle.hpp"

using namespace tucore;

TEST_CASE("dedup_insert examples") {
  VertexSet s;
  CHECK(dedup_insert(s, Eigen::Vector3d(1, 0, 0)));
  CHECK_FALSE(dedup_insert(s, Eigen::Vector3d(1 + 1e-10, -1e-12, 1e-11)));
  CHECK(s.size() == 1);
  CHECK(dedup_insert(s, Eigen::Vector3d(0, 1, 0)));
  CHECK_FALSE(dedup_insert(s, Eigen::Vector3d(0, 1, 0)));
  CHECK(s.size() == 2);
  CHECK_THROWS_AS(dedup_insert(s, Eigen::Vector3d(NAN, 0, 0)), DomainError);
}

TEST_CASE("verify_vertex examples") {
  const auto g = fixtures::g3();
  CHECK(verify_vertex(g, Eigen::Vector3d(1, 0, 0)));
  CHECK_FALSE(verify_vertex(g, Eigen::Vector3d(1.0 / 3, 1.0 / 3, 1.0 / 3)));
  CHECK_FALSE(verify_vertex(g, Eigen::Vector3d(2, -1, 0)));
}

TEST_CASE("approximate_core on G3 finds the three vertices") {
  const auto r = approximate_core(fixtures::g3(), 50, {SchemeKind::kRandomSphere, 9});
  REQUIRE(r.vertices.size() == 3);
  CHECK(r.vertices.points[0] == Eigen::Vector3d(0, 0, 1));
  CHECK(r.vertices.points[1] == Eigen::Vector3d(0, 1, 0));
  CHECK(r.vertices.points[2] == Eigen::Vector3d(1, 0, 0));
  CHECK(r.lp_stats.draws == 50);
  CHECK_FALSE(r.core_empty);
}

TEST_CASE("approximate_core on an empty core") {
  const auto r = approximate_core(make_nonconvex_game(3), 100, {SchemeKind::kDeterministicSigns, 1});
  CHECK(r.core_empty);
  CHECK(r.vertices.empty());
  CHECK(r.lp_stats.draws == 1);
}

TEST_CASE("approximate_core on the museum micro game") {
  const auto r = approximate_core(fixtures::museum_micro(), 10, {SchemeKind::kRandomSphere, 4});
  REQUIRE(r.vertices.size() == 2);
  CHECK(r.vertices.points[0] == Eigen::Vector2d(1, 1));
  CHECK(r.vertices.points[1] == Eigen::Vector2d(2, 0));
}

TEST_CASE("every sampled point is a core vertex, and never more than the oracle count") {
  const auto g = make_savings_game(SavingsParams::reference(6));
  for (auto kind : {SchemeKind::kDeterministicSigns, SchemeKind::kRandomSphere}) {
    const auto r = approximate_core(g, 300, {kind, 5});
    CHECK(r.vertices.size() <= 127);
    for (const auto& p : r.vertices.points) {
      REQUIRE(exact_core_membership(g, p));
      REQUIRE(verify_vertex(g, p));
    }
    for (std::size_t i = 0; i < r.vertices.size(); ++i)
      for (std::size_t j = i + 1; j < r.vertices.size(); ++j)
        REQUIRE((r.vertices.points[i] - r.vertices.points[j]).cwiseAbs().maxCoeff() > kDedupTolerance);
  }
}

TEST_CASE("checkpoints are prefixes of one stream") {
  const auto g = make_reference_museum_game(7);
  const std::vector<int> ks{20, 60, 150};
  const DirectionScheme scheme{SchemeKind::kRandomSphere, 31};
  const auto snaps = approximate_core_checkpoints(g, ks, scheme);
  REQUIRE(snaps.size() == 3);
  for (std::size_t i = 1; i < snaps.size(); ++i)
    for (const auto& p : snaps[i - 1].vertices.points) CHECK(snaps[i].vertices.find(p));
  // The last checkpoint matches a direct run of the same length.
  const auto direct = approximate_core(g, 150, scheme);
  CHECK(direct.vertices.points == snaps.back().vertices.points);
  CHECK_THROWS_AS(approximate_core_checkpoints(g, std::vector<int>{5, 5}, scheme), DomainError);
}

TEST_CASE("parallel workers are deterministic") {
  const auto g = make_reference_museum_game(6);
  const DirectionScheme scheme{SchemeKind::kDeterministicSigns, 8};
  const auto a = approximate_core(g, 200, scheme, 3);
  const auto b = approximate_core(g, 200, scheme, 3);
  CHECK(a.vertices.points == b.vertices.points);
  CHECK(a.lp_stats.draws == 200);
  CHECK(result_to_json(a, false) == result_to_json(b, false));
}

TEST_CASE("saturation on G3 and the micro game matches the oracle") {
  for (const auto& g : {fixtures::g3(), fixtures::museum_micro()}) {
    const auto exact = enumerate_vertices_naive(g);
    const int budget = 10 * (1 << g.players());
    VertexSet sat = saturation_reference(g, {budget, 2});
    CHECK(sat.points == exact.points);
    CHECK_FALSE(sat.proven_complete);
  }
}

TEST_CASE("result JSON round trip") {
  const auto r = approximate_core(make_savings_game(SavingsParams::reference(5)), 80, {SchemeKind::kRandomSphere, 3});
  const auto text = result_to_json(r);
  CHECK(text.find("\"solve_time_s\"") != std::string::npos);
  CHECK(result_to_json(r, false).find("time") == std::string::npos);
  const auto back = vertex_set_from_json(text);
  REQUIRE(back.size() == r.vertices.size());
  for (std::size_t i = 0; i < back.size(); ++i) CHECK(back.points[i] == r.vertices.points[i]);
  CHECK(back.source == VertexSource::kApprox);
  CHECK_THROWS_AS(vertex_set_from_json(R"({"vertex_count": 2, "vertices": [[1, 2]]})"), SchemaError);
  CHECK_THROWS_AS(vertex_set_from_json(R"({"vertices": [[1, 2], [1]]})"), SchemaError);
}
