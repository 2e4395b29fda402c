#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace tucore {

// Bit i-1 set <=> player i belongs to the coalition.
using Coalition = std::uint32_t;

// Payoff vector, one entry per player.
using Allocation = Eigen::VectorXd;

inline constexpr int kMaxDensePlayers = 24;

/// A transferable-utility game stored densely: values()[mask] = v(T).
///
/// Immutable after construction. The constructor enforces v(empty) = 0,
/// length 2^n and finiteness of every entry.
class TUGame {
 public:
  TUGame(int n, std::vector<double> values, std::string label = {});

  int players() const { return n_; }
  Coalition grand_coalition() const { return (Coalition{1} << n_) - 1; }
  std::size_t coalition_count() const { return values_.size(); }

  const std::vector<double>& values() const { return values_; }
  const std::string& label() const { return label_; }

  /// v(T); throws DomainError for masks outside [0, 2^n).
  double value(Coalition mask) const;
  double grand_value() const { return values_.back(); }

  bool operator==(const TUGame& other) const = default;

 private:
  int n_;
  std::vector<double> values_;
  std::string label_;
};

inline double coalition_value(const TUGame& game, Coalition mask) {
  return game.value(mask);
}

inline int coalition_size(Coalition mask) { return __builtin_popcount(mask); }

// Savings game parameters. sigma0 is a 1-based permutation: sigma0[pos] is the
// player standing at position pos of the initial ordering.
struct SavingsParams {
  std::vector<double> p;
  std::vector<double> alpha;
  std::vector<int> sigma0;

  int players() const { return static_cast<int>(p.size()); }
  void validate() const;

  // p=(3,4,6,1,3,4,5,4), alpha=(1,2,4,2,5,2,1,4), identity ordering,
  // restricted to the first n components.
  static SavingsParams reference(int n = 8);
};

// Museum-pass visitor matrix: rows are visitors, columns museums (players).
struct MuseumMatrix {
  std::vector<std::vector<int>> rows;

  int visitors() const { return static_cast<int>(rows.size()); }
  int museums() const { return rows.empty() ? 0 : static_cast<int>(rows.front().size()); }
  void validate() const;

  // The 5x11 reference matrix.
  static MuseumMatrix reference();

  // Keeps every visitor row and the first n columns. Visitors left with no
  // museum are dropped; their count is reported through `dropped`.
  MuseumMatrix truncated(int n, int* dropped = nullptr) const;
};

/// Savings game. A coalition whose members are consecutive under sigma0 earns
/// sum over ordered pairs (i, j) in T with alpha_j p_i - alpha_i p_j > 0 of that
/// difference; any other coalition earns the sum over its maximal consecutive
/// blocks.
TUGame make_savings_game(const SavingsParams& params);

/// Non-convex game: 0 for singletons, beta |T|/n when player n is in T, |T|/n otherwise.
/// beta = 3/4 is the literal formula (whose core is empty for every n >= 3).
TUGame make_nonconvex_game(int n, double beta = 0.75);

/// Museum-pass game: v(T) = number of visitors whose museum set lies inside T.
TUGame make_museum_game(const MuseumMatrix& mat);

// Reference museum game on the first n museums (n <= 11).
TUGame make_reference_museum_game(int n);

// v(N) = 1, every other coalition 0.
TUGame make_unanimity_game(int n);

// v(T) = sum of weights in T.
TUGame make_additive_game(std::span<const double> weights);

// Adds a null player as player n+1: v'(T) = v(T without n+1).
TUGame with_dummy_player(const TUGame& game);

/// Exact Shapley value by the subset formula, O(n 2^n). Refuses n > 20.
Allocation shapley_value(const TUGame& game);

// v(S u T) + v(S n T) >= v(S) + v(T) for all pairs, within `tol`.
bool is_supermodular(const TUGame& game, double tol = 1e-9);

// JSON game file: {"n": int, "label": string, "values": [2^n numbers]}.
void save_game(const TUGame& game, const std::filesystem::path& path);
TUGame load_game(const std::filesystem::path& path);
std::string game_to_json(const TUGame& game);
TUGame game_from_json(const std::string& text);

}  // namespace tucore
