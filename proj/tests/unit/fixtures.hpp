#pragma once

#include <random>
#include <vector>

#include "tucore/game.hpp"

namespace fixtures {

// v = 0 except v(N) = 1.
inline tucore::TUGame g3() { return tucore::make_unanimity_game(3); }

// Visitors {1} and {1,2}: v({1}) = 1, v({2}) = 0, v(N) = 2.
inline tucore::MuseumMatrix museum_micro_matrix() { return {{{1, 0}, {1, 1}}}; }
inline tucore::TUGame museum_micro() { return tucore::make_museum_game(museum_micro_matrix()); }

inline tucore::TUGame savings_micro() {
  return tucore::make_savings_game({{3, 4}, {1, 2}, {1, 2}});
}

inline tucore::TUGame additive123() {
  const std::vector<double> w{1, 2, 3};
  return tucore::make_additive_game(w);
}

// Uniform values in [0, 1] made superadditive by taking, in order of
// increasing mask, the max over two-block splits. Grand value is raised until
// the core is nonempty (checked by the caller).
inline tucore::TUGame random_superadditive(int n, std::mt19937_64& rng, double grand_boost = 1.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const tucore::Coalition full = (tucore::Coalition{1} << n) - 1;
  std::vector<double> v(full + 1, 0.0);
  for (tucore::Coalition t = 1; t <= full; ++t) {
    v[t] = u(rng);
    for (tucore::Coalition s = (t - 1) & t; s > 0; s = (s - 1) & t) v[t] = std::max(v[t], v[s] + v[t & ~s]);
  }
  v[full] += grand_boost;
  return tucore::TUGame(n, v, "random(n=" + std::to_string(n) + ")");
}

}  // namespace fixtures
