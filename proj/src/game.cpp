#include "tucore/game.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include "json_util.hpp"
#include "tucore/errors.hpp"

namespace tucore {

TUGame::TUGame(int n, std::vector<double> values, std::string label)
    : n_(n), values_(std::move(values)), label_(std::move(label)) {
  if (n < 1 || n > kMaxDensePlayers)
    throw CapacityError("player count " + std::to_string(n) + " outside [1, " +
                        std::to_string(kMaxDensePlayers) + "]");
  const std::size_t expected = std::size_t{1} << n;
  if (values_.size() != expected)
    throw SchemaError("values has " + std::to_string(values_.size()) + " entries, expected 2^" +
                      std::to_string(n) + " = " + std::to_string(expected));
  if (values_[0] != 0.0) throw SchemaError("values[0] must be 0 (v(empty) = 0)");
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (!std::isfinite(values_[i]))
      throw SchemaError("values[" + std::to_string(i) + "] is not finite");
}

double TUGame::value(Coalition mask) const {
  if (mask >= values_.size())
    throw DomainError("coalition mask " + std::to_string(mask) + " out of range for n = " +
                      std::to_string(n_));
  return values_[mask];
}

// ---------------------------------------------------------------------------
// Savings game

void SavingsParams::validate() const {
  const auto n = p.size();
  if (n < 1) throw DomainError("savings game needs at least one player");
  if (alpha.size() != n || sigma0.size() != n)
    throw DomainError("savings parameters p, alpha, sigma0 must all have length n");
  std::vector<bool> seen(n, false);
  for (int s : sigma0) {
    if (s < 1 || static_cast<std::size_t>(s) > n || seen[s - 1])
      throw DomainError("sigma0 must be a permutation of 1..n");
    seen[s - 1] = true;
  }
}

SavingsParams SavingsParams::reference(int n) {
  static const double p[] = {3, 4, 6, 1, 3, 4, 5, 4};
  static const double alpha[] = {1, 2, 4, 2, 5, 2, 1, 4};
  if (n < 1 || n > 8) throw DomainError("reference savings game is defined for 1 <= n <= 8");
  SavingsParams out;
  out.p.assign(p, p + n);
  out.alpha.assign(alpha, alpha + n);
  out.sigma0.resize(n);
  std::iota(out.sigma0.begin(), out.sigma0.end(), 1);
  return out;
}

TUGame make_savings_game(const SavingsParams& params) {
  params.validate();
  const int n = params.players();
  if (n > kMaxDensePlayers) throw CapacityError("savings game too large for dense storage");

  // gain[i][j] = alpha_j p_i - alpha_i p_j when positive (the MP pairs), else 0.
  std::vector<std::vector<double>> gain(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double g = params.alpha[j] * params.p[i] - params.alpha[i] * params.p[j];
      if (g > 0) gain[i][j] = g;
    }

  auto block_value = [&](const std::vector<int>& members) {
    double total = 0.0;
    for (int i : members)
      for (int j : members) total += gain[i][j];
    return total;
  };

  const std::size_t count = std::size_t{1} << n;
  std::vector<double> values(count, 0.0);
  std::vector<int> block;
  for (std::size_t mask = 1; mask < count; ++mask) {
    double total = 0.0;
    block.clear();
    for (int pos = 0; pos < n; ++pos) {
      const int player = params.sigma0[pos] - 1;
      if (mask >> player & 1U) {
        block.push_back(player);
      } else if (!block.empty()) {
        total += block_value(block);
        block.clear();
      }
    }
    if (!block.empty()) total += block_value(block);
    values[mask] = total;
  }

  std::ostringstream label;
  label << "savings(n=" << n << ")";
  return TUGame(n, std::move(values), label.str());
}

// ---------------------------------------------------------------------------
// Non-convex game

TUGame make_nonconvex_game(int n, double beta) {
  if (n < 2) throw DomainError("non-convex game needs n >= 2");
  if (!(beta > 0.0 && beta <= 1.0)) throw DomainError("beta must lie in (0, 1]");
  if (n > kMaxDensePlayers) throw CapacityError("non-convex game too large for dense storage");
  const std::size_t count = std::size_t{1} << n;
  const Coalition last = Coalition{1} << (n - 1);
  std::vector<double> values(count, 0.0);
  for (std::size_t mask = 1; mask < count; ++mask) {
    const int size = coalition_size(static_cast<Coalition>(mask));
    if (size == 1) continue;
    const double share = static_cast<double>(size) / n;
    values[mask] = (mask & last) ? beta * share : share;
  }
  std::ostringstream label;
  label << "nonconvex(n=" << n << ",beta=" << detail::fmt17(beta) << ")";
  return TUGame(n, std::move(values), label.str());
}

// ---------------------------------------------------------------------------
// Museum-pass game

void MuseumMatrix::validate() const {
  if (rows.empty()) throw DomainError("museum matrix has no visitors");
  const std::size_t cols = rows.front().size();
  if (cols < 1) throw DomainError("museum matrix has no museums");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw DomainError("museum matrix rows differ in length");
    bool any = false;
    for (int a : rows[i]) {
      if (a != 0 && a != 1) throw DomainError("museum matrix entries must be 0 or 1");
      any = any || a == 1;
    }
    if (!any) throw DomainError("visitor " + std::to_string(i + 1) + " visits no museum");
  }
}

MuseumMatrix MuseumMatrix::reference() {
  return MuseumMatrix{{
      {1, 0, 0, 1, 0, 1, 0, 1, 0, 1, 0},
      {0, 1, 0, 0, 1, 1, 0, 0, 1, 0, 0},
      {1, 1, 1, 0, 0, 0, 0, 1, 1, 1, 0},
      {0, 0, 1, 1, 0, 0, 1, 0, 0, 0, 1},
      {1, 0, 0, 0, 1, 0, 1, 0, 1, 0, 0},
  }};
}

MuseumMatrix MuseumMatrix::truncated(int n, int* dropped) const {
  if (n < 1 || n > museums()) throw DomainError("cannot truncate museum matrix to n = " + std::to_string(n));
  MuseumMatrix out;
  int lost = 0;
  for (const auto& row : rows) {
    std::vector<int> kept(row.begin(), row.begin() + n);
    if (std::find(kept.begin(), kept.end(), 1) == kept.end()) {
      ++lost;
      continue;
    }
    out.rows.push_back(std::move(kept));
  }
  if (dropped) *dropped = lost;
  return out;
}

TUGame make_museum_game(const MuseumMatrix& mat) {
  mat.validate();
  const int n = mat.museums();
  if (n > kMaxDensePlayers) throw CapacityError("museum game too large for dense storage");
  std::vector<Coalition> visits;
  for (const auto& row : mat.rows) {
    Coalition m = 0;
    for (int j = 0; j < n; ++j)
      if (row[j]) m |= Coalition{1} << j;
    visits.push_back(m);
  }
  const std::size_t count = std::size_t{1} << n;
  std::vector<double> values(count, 0.0);
  for (std::size_t mask = 0; mask < count; ++mask) {
    int c = 0;
    for (Coalition need : visits)
      if ((need & mask) == need) ++c;
    values[mask] = c;
  }
  std::ostringstream label;
  label << "museum(n=" << n << ",m=" << mat.visitors() << ")";
  return TUGame(n, std::move(values), label.str());
}

TUGame make_reference_museum_game(int n) {
  int dropped = 0;
  auto mat = MuseumMatrix::reference().truncated(n, &dropped);
  if (dropped > 0)
    std::cerr << "warning: dropped " << dropped << " visitor(s) with no museum after truncation to n = "
              << n << "\n";
  return make_museum_game(mat);
}

// ---------------------------------------------------------------------------
// Elementary games

TUGame make_unanimity_game(int n) {
  if (n < 1 || n > kMaxDensePlayers) throw CapacityError("unanimity game size out of range");
  std::vector<double> values(std::size_t{1} << n, 0.0);
  values.back() = 1.0;
  return TUGame(n, std::move(values), "unanimity(n=" + std::to_string(n) + ")");
}

TUGame make_additive_game(std::span<const double> weights) {
  const int n = static_cast<int>(weights.size());
  if (n < 1 || n > kMaxDensePlayers) throw CapacityError("additive game size out of range");
  std::vector<double> values(std::size_t{1} << n, 0.0);
  for (std::size_t mask = 1; mask < values.size(); ++mask) {
    const int low = __builtin_ctzll(mask);
    values[mask] = values[mask & (mask - 1)] + weights[low];
  }
  return TUGame(n, std::move(values), "additive(n=" + std::to_string(n) + ")");
}

TUGame with_dummy_player(const TUGame& game) {
  const int n = game.players() + 1;
  if (n > kMaxDensePlayers) throw CapacityError("cannot add a player beyond dense capacity");
  const std::size_t half = game.coalition_count();
  std::vector<double> values(half * 2);
  for (std::size_t mask = 0; mask < half; ++mask) {
    values[mask] = game.values()[mask];
    values[mask | half] = game.values()[mask];
  }
  return TUGame(n, std::move(values), game.label() + "+dummy");
}

// ---------------------------------------------------------------------------

Allocation shapley_value(const TUGame& game) {
  const int n = game.players();
  if (n > 20)
    throw CapacityError("exact Shapley value limited to n <= 20 (got " + std::to_string(n) + ")");
  // weight[s] = s! (n-s-1)! / n!, built multiplicatively to stay in range.
  std::vector<double> weight(n, 0.0);
  weight[0] = 1.0 / n;
  for (int s = 1; s < n; ++s) weight[s] = weight[s - 1] * s / (n - s);

  Allocation phi = Allocation::Zero(n);
  const auto& v = game.values();
  for (std::size_t mask = 0; mask < v.size(); ++mask) {
    const int s = coalition_size(static_cast<Coalition>(mask));
    for (int i = 0; i < n; ++i) {
      const std::size_t bit = std::size_t{1} << i;
      if (mask & bit) continue;
      phi[i] += weight[s] * (v[mask | bit] - v[mask]);
    }
  }
  return phi;
}

bool is_supermodular(const TUGame& game, double tol) {
  // Equivalent local test: v(S+i+j) - v(S+i) >= v(S+j) - v(S) for i, j not in S.
  const int n = game.players();
  const auto& v = game.values();
  for (std::size_t s = 0; s < v.size(); ++s)
    for (int i = 0; i < n; ++i) {
      const std::size_t bi = std::size_t{1} << i;
      if (s & bi) continue;
      for (int j = i + 1; j < n; ++j) {
        const std::size_t bj = std::size_t{1} << j;
        if (s & bj) continue;
        if (v[s | bi | bj] - v[s | bi] < v[s | bj] - v[s] - tol) return false;
      }
    }
  return true;
}

// ---------------------------------------------------------------------------
// JSON

std::string game_to_json(const TUGame& game) {
  std::string out = "{\"n\": " + std::to_string(game.players()) +
                    ", \"label\": " + detail::json_string(game.label()) + ", \"values\": [";
  const auto& v = game.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += detail::fmt17(v[i]);
  }
  out += "]}\n";
  return out;
}

TUGame game_from_json(const std::string& text) {
  const auto j = detail::parse_json(text);
  const int n = detail::require<int>(j, "n");
  const auto label = j.contains("label") ? detail::require<std::string>(j, "label") : std::string{};
  auto values = detail::require<std::vector<double>>(j, "values");
  if (n < 1 || n > kMaxDensePlayers) throw SchemaError("key 'n' out of range: " + std::to_string(n));
  return TUGame(n, std::move(values), label);
}

void save_game(const TUGame& game, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << game_to_json(game);
  if (!out) throw Error("write failed for " + path.string());
}

TUGame load_game(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return game_from_json(buf.str());
}

}  // namespace tucore
