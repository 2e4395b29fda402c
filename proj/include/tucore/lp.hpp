#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "tucore/game.hpp"

namespace tucore {

// Constraint identifiers are coalition masks. The grand-coalition mask names
// the efficiency equality; every proper nonempty mask names its >= row.
using ConstraintId = Coalition;

struct Tolerances {
  double feasibility = 1e-8;  // scaled by max(1, |v(N)|)
  double dual = 1e-8;
  double rank = 1e-10;
  double tight = 1e-7;        // scaled like feasibility
  double phase1 = 1e-7;       // emptiness threshold, scaled like feasibility
};

/// The core-defining LP: sum_i x_i = v(N) and sum_{i in T} x_i >= v(T) for
/// every proper nonempty T. Rows are implicit (indicator vectors); only the
/// right-hand sides are stored.
class CoreLp {
 public:
  explicit CoreLp(const TUGame& game);

  int variables() const { return n_; }
  std::size_t inequality_count() const { return rhs_.size() - 2; }
  ConstraintId efficiency_id() const { return static_cast<ConstraintId>(rhs_.size() - 1); }
  double rhs(ConstraintId id) const { return rhs_.at(id); }
  double efficiency_rhs() const { return rhs_.back(); }
  // max(1, |v(N)|), the scale applied to feasibility tolerances.
  double scale() const { return scale_; }

  // Dense row vector of constraint `id` (0/1 entries).
  Eigen::RowVectorXd row(ConstraintId id) const;

 private:
  int n_;
  std::vector<double> rhs_;
  double scale_;
};

CoreLp build_core_lp(const TUGame& game);

/// n constraint ids (efficiency always among them) whose rows are linearly
/// independent; their intersection is the current vertex.
struct Basis {
  std::vector<ConstraintId> rows;
  bool operator==(const Basis&) const = default;
};

struct VertexSolution {
  Allocation x;
  double objective = 0.0;
  Basis basis;
  std::vector<ConstraintId> tight_set;
};

struct SolverStats {
  std::int64_t solves = 0;
  std::int64_t warm_starts = 0;
  std::int64_t cold_starts = 0;
  std::int64_t pivots = 0;
  std::int64_t degenerate_pivots = 0;
  std::int64_t bland_pivots = 0;
  std::int64_t phase1_runs = 0;
};

/// Maximizes c.x over the core, returning a vertex.
///
/// One solver per worker: the solver keeps a private basis and the phase-1
/// result between calls. The LP it was built from must outlive it.
class VertexSolver {
 public:
  explicit VertexSolver(const CoreLp& lp, Tolerances tol = {});
  ~VertexSolver();
  VertexSolver(VertexSolver&&) noexcept;
  VertexSolver& operator=(VertexSolver&&) = delete;

  /// Returns std::nullopt iff the core is empty. `warm`, when given and still
  /// a nonsingular feasible basis, is the starting vertex; otherwise the solve
  /// starts cold from the phase-1 vertex. Throws SolverFailure when the
  /// optimum cannot be certified.
  std::optional<VertexSolution> solve(const Eigen::VectorXd& c, const Basis* warm = nullptr);

  /// Phase 1 only: true iff the least total infeasibility is zero.
  bool feasible();

  // Optimal value of the phase-1 problem (min s with all rows relaxed by s).
  double phase1_value();

  const SolverStats& stats() const { return stats_; }
  const CoreLp& lp() const { return lp_; }

 private:
  struct Impl;
  const CoreLp& lp_;
  Tolerances tol_;
  SolverStats stats_;
  std::unique_ptr<Impl> impl_;

  void run_phase1();
};

// Convenience one-shot solve.
std::optional<VertexSolution> solve_vertex(const CoreLp& lp, const Eigen::VectorXd& c,
                                           const Basis* warm = nullptr);

/// Core nonemptiness via phase 1 (Bondareva-Shapley balancedness).
bool check_nonempty(const TUGame& game);

// Largest violation max(0, v(T) - x(T)) over all coalitions, plus |x(N) - v(N)|.
double core_violation(const TUGame& game, const Allocation& x);

// Constraint ids tight at x within `tol` (efficiency included first).
std::vector<ConstraintId> tight_constraints(const TUGame& game, const Allocation& x, double tol);

// Rank of the indicator rows of `ids` over n players (column-pivoted QR).
int constraint_rank(int n, std::span<const ConstraintId> ids, double threshold = 1e-10);

}  // namespace tucore
