#include "tucore/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <thread>

#include "tucore/errors.hpp"
#include "tucore/lp.hpp"

namespace tucore {

bool exact_core_membership(const TUGame& game, const Allocation& x) {
  if (x.size() != game.players()) throw DomainError("allocation length differs from player count");
  if (!x.allFinite()) return false;
  return core_violation(game, x) <= 1e-8 * std::max(1.0, std::abs(game.grand_value()));
}

namespace {

// Depth-first search over row subsets in increasing mask order. Rows that are
// linearly dependent on the rows already chosen are pruned early, so only
// nonsingular square systems reach the leaves.
class SubsetSearch {
 public:
  SubsetSearch(const TUGame& game, VertexSet& out) : game_(game), n_(game.players()), out_(out) {
    scale_ = std::max(1.0, std::abs(game.grand_value()));
    A_ = Eigen::MatrixXd::Zero(n_, n_);
    b_ = Eigen::VectorXd::Zero(n_);
    A_.row(0).setOnes();
    b_[0] = game.grand_value();
    basis_.push_back(Eigen::VectorXd::Ones(n_) / std::sqrt(static_cast<double>(n_)));
  }

  // Subsets whose first row r satisfies r % stride == offset.
  void run(int stride, int offset) {
    const Coalition last = game_.grand_coalition();
    if (n_ == 1) {
      leaf();
      return;
    }
    for (Coalition r = 1; r < last; ++r)
      if (static_cast<int>((r - 1) % stride) == offset) descend(r, 1);
  }

 private:
  const TUGame& game_;
  int n_;
  VertexSet& out_;
  double scale_;
  Eigen::MatrixXd A_;
  Eigen::VectorXd b_;
  std::vector<Eigen::VectorXd> basis_;

  void descend(Coalition r, int depth) {
    Eigen::VectorXd row(n_);
    for (int i = 0; i < n_; ++i) row[i] = (r >> i) & 1u ? 1.0 : 0.0;
    Eigen::VectorXd res = row;
    for (const auto& u : basis_) res -= u.dot(res) * u;
    const double norm = res.norm();
    if (norm <= 1e-9) return;
    A_.row(depth) = row.transpose();
    b_[depth] = game_.value(r);
    basis_.push_back(res / norm);
    if (depth == n_ - 1) {
      leaf();
    } else {
      const Coalition last = game_.grand_coalition();
      // Leave room for the remaining rows.
      for (Coalition s = r + 1; s + static_cast<Coalition>(n_ - 2 - depth) < last; ++s) descend(s, depth + 1);
    }
    basis_.pop_back();
  }

  void leaf() {
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A_);
    if (lu.rcond() < 1e-12) return;
    Allocation x = lu.solve(b_);
    if (!x.allFinite() || core_violation(game_, x) > 1e-8 * scale_) return;
    if (out_.find(x)) return;
    if (!verify_vertex(game_, x)) return;
    out_.points.push_back(std::move(x));
  }
};

}  // namespace

VertexSet enumerate_vertices_naive(const TUGame& game, int workers) {
  const int n = game.players();
  if (n > kNaiveOracleMaxPlayers)
    throw CapacityError("naive vertex enumeration is limited to n <= 6 (n = 7 needs about 5e9 square solves); "
                        "use saturation_reference or, for supermodular games, enumerate_marginal_vectors");
  if (workers < 1) throw DomainError("worker count must be >= 1");

  VertexSet out;
  out.source = VertexSource::kOracle;
  out.game_label = game.label();
  out.proven_complete = true;
  if (n == 1) workers = 1;

  std::vector<VertexSet> parts(workers);
  if (workers == 1) {
    SubsetSearch(game, parts[0]).run(1, 0);
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w)
      threads.emplace_back([&, w] { SubsetSearch(game, parts[w]).run(workers, w); });
    for (auto& t : threads) t.join();
  }
  for (auto& part : parts)
    for (auto& p : part.points) dedup_insert(out, p);
  out.canonicalize();
  return out;
}

VertexSet enumerate_marginal_vectors(const TUGame& game) {
  const int n = game.players();
  if (n > 12) throw CapacityError("marginal-vector enumeration is limited to n <= 12");
  if (!is_supermodular(game)) throw DomainError("marginal vectors are the core vertices only for supermodular games");

  // Marginal vectors of the same vertex are bit-identical (same differences
  // of the same stored values), so an exact set removes nearly all repeats.
  std::set<std::vector<double>> seen;
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> x(n);
  do {
    Coalition s = 0;
    double prev = 0.0;
    for (int i : order) {
      s |= Coalition{1} << i;
      const double v = game.value(s);
      x[i] = v - prev;
      prev = v;
    }
    seen.insert(x);
  } while (std::next_permutation(order.begin(), order.end()));

  VertexSet out;
  out.source = VertexSource::kOracle;
  out.game_label = game.label();
  out.proven_complete = true;
  for (const auto& p : seen) {
    Allocation a = Eigen::Map<const Eigen::VectorXd>(p.data(), n);
    if (!verify_vertex(game, a)) throw SolverFailure("marginal vector failed vertex verification");
    dedup_insert(out, a);
  }
  out.canonicalize();
  return out;
}

VertexSet saturation_reference(const TUGame& game, const SaturationOptions& options) {
  if (options.stall_budget < 1) throw DomainError("stall budget must be >= 1");
  VertexSet out;
  out.source = VertexSource::kSaturation;
  out.game_label = game.label();
  out.proven_complete = false;

  VertexCollector collector(game, out);
  DirectionSampler signs({SchemeKind::kDeterministicSigns, derive_seed(options.seed, 1)}, game.players());
  DirectionSampler sphere({SchemeKind::kRandomSphere, derive_seed(options.seed, 2)}, game.players());
  int stall = 0;
  for (long long draw = 0; draw < options.max_draws && stall < options.stall_budget; ++draw) {
    auto& sampler = (draw % 2 == 0) ? signs : sphere;
    if (collector.add_direction(sampler.next())) {
      stall = 0;
    } else {
      if (collector.core_empty()) break;
      ++stall;
    }
  }
  out.source = VertexSource::kSaturation;
  out.proven_complete = false;
  if (collector.core_empty()) out.points.clear();
  out.canonicalize();
  return out;
}

}  // namespace tucore
