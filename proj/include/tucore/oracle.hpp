#pragma once

#include <cstdint>

#include "tucore/approx.hpp"
#include "tucore/game.hpp"

namespace tucore {

// Largest n for which the naive enumeration is attempted.
inline constexpr int kNaiveOracleMaxPlayers = 6;

/// x satisfies efficiency and every coalition constraint within
/// 1e-8 max(1, |v(N)|). Direct O(2^n) scan.
bool exact_core_membership(const TUGame& game, const Allocation& x);

/// All core vertices: every (n-1)-subset of inequality rows is made tight
/// together with efficiency, and feasible verified solutions are kept.
/// Throws CapacityError for n > 6. Source ORACLE, proven complete.
VertexSet enumerate_vertices_naive(const TUGame& game, int workers = 1);

/// Distinct marginal vectors over all n! player orders. For a supermodular
/// game these are exactly the core vertices. Throws DomainError when the game
/// is not supermodular and CapacityError for n > 12.
VertexSet enumerate_marginal_vectors(const TUGame& game);

struct SaturationOptions {
  int stall_budget = 5000;
  std::uint64_t seed = 0;
  long long max_draws = 50'000'000;  // hard stop; never reached in practice
};

/// Step 1 with alternating sign and sphere directions until stall_budget
/// consecutive draws add nothing. Source SATURATION, not proven complete.
/// An empty core gives an empty set.
VertexSet saturation_reference(const TUGame& game, const SaturationOptions& options = {});

}  // namespace tucore
