#include "tucore/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "tucore/errors.hpp"

namespace tucore {

namespace {

// Explicit row system {x : A_eq x = b_eq, A_in x >= b_in}. Rows [0, eq_count)
// are equalities.
struct RowSystem {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  int eq_count = 1;

  int rows() const { return static_cast<int>(A.rows()); }
  int dim() const { return static_cast<int>(A.cols()); }
};

enum class EngineStatus { kOptimal, kUnbounded, kIterationLimit };

// Active-set primal simplex: the iterate is always the vertex cut out by `dim`
// basic rows. Leaving a basic row moves along an edge; the ratio test picks
// the first row the edge hits. Dantzig pricing, switching to Bland's rule
// (smallest row index for both choices) after a run of degenerate pivots.
class Engine {
 public:
  Engine(const RowSystem& sys, double feas_tol, double rank_tol, SolverStats& stats)
      : sys_(sys), feas_tol_(feas_tol), rank_tol_(rank_tol), stats_(stats) {}

  bool vertex(const std::vector<int>& basis, Eigen::VectorXd& x) const {
    const int d = sys_.dim();
    if (static_cast<int>(basis.size()) != d) return false;
    Eigen::MatrixXd B(d, d);
    Eigen::VectorXd rhs(d);
    for (int p = 0; p < d; ++p) {
      B.row(p) = sys_.A.row(basis[p]);
      rhs[p] = sys_.b[basis[p]];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(B);
    qr.setThreshold(rank_tol_);
    if (qr.rank() < d) return false;
    x = qr.solve(rhs);
    return x.allFinite();
  }

  double max_violation(const Eigen::VectorXd& x) const {
    const Eigen::VectorXd slack = sys_.A * x - sys_.b;
    double worst = 0.0;
    for (int j = 0; j < sys_.rows(); ++j) {
      const double v = j < sys_.eq_count ? std::abs(slack[j]) : -slack[j];
      worst = std::max(worst, v);
    }
    return worst;
  }

  EngineStatus maximize(const Eigen::VectorXd& c, std::vector<int>& basis, Eigen::VectorXd& x,
                        Eigen::VectorXd& lambda) const {
    const int d = sys_.dim();
    const int m = sys_.rows();
    const double cscale = std::max(1.0, c.cwiseAbs().maxCoeff());
    const double dual_pick = 1e-11 * cscale;
    const long max_iter = 20000 + 20L * m;
    const int bland_after = 5 * d;

    std::vector<char> in_basis(m, 0);
    for (int r : basis) in_basis[r] = 1;

    int degenerate_run = 0;
    Eigen::MatrixXd B(d, d);
    Eigen::VectorXd rhs(d);
    for (long iter = 0; iter < max_iter; ++iter) {
      for (int p = 0; p < d; ++p) {
        B.row(p) = sys_.A.row(basis[p]);
        rhs[p] = sys_.b[basis[p]];
      }
      Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
      x = lu.solve(rhs);
      lambda = B.transpose().partialPivLu().solve(c);

      const bool bland = degenerate_run >= bland_after;
      int leave = -1;
      for (int p = 0; p < d; ++p) {
        if (basis[p] < sys_.eq_count || lambda[p] <= dual_pick) continue;
        if (leave < 0) {
          leave = p;
        } else if (bland ? basis[p] < basis[leave] : lambda[p] > lambda[leave]) {
          leave = p;
        }
      }
      if (leave < 0) return EngineStatus::kOptimal;

      const Eigen::VectorXd dir = lu.solve(Eigen::VectorXd::Unit(d, leave));
      const Eigen::VectorXd ad = sys_.A * dir;
      const Eigen::VectorXd slack = sys_.A * x - sys_.b;
      const double piv_tol = 1e-9 * std::max(1.0, dir.cwiseAbs().maxCoeff());

      int enter = -1;
      double best_t = std::numeric_limits<double>::infinity();
      for (int j = sys_.eq_count; j < m; ++j) {
        if (in_basis[j] || ad[j] >= -piv_tol) continue;
        const double t = std::max(slack[j], 0.0) / -ad[j];
        const double tie = 1e-12 * (1.0 + std::abs(best_t));
        if (enter < 0 || t < best_t - tie) {
          enter = j;
          best_t = t;
        } else if (t <= best_t + tie) {
          // Bland keeps the smallest index (scan order); Dantzig prefers the
          // larger pivot element.
          if (!bland && -ad[j] > -ad[enter]) {
            enter = j;
            best_t = std::min(best_t, t);
          }
        }
      }
      if (enter < 0) return EngineStatus::kUnbounded;

      ++stats_.pivots;
      if (bland) ++stats_.bland_pivots;
      if (best_t <= 1e-13 * std::max(1.0, x.cwiseAbs().maxCoeff())) {
        ++stats_.degenerate_pivots;
        ++degenerate_run;
      } else {
        degenerate_run = 0;
      }
      in_basis[basis[leave]] = 0;
      in_basis[enter] = 1;
      basis[leave] = enter;
    }
    return EngineStatus::kIterationLimit;
  }

  // Walks from a feasible point to a vertex without decreasing c.x: add tight
  // independent rows, otherwise move along the projection of c onto the null
  // space of the active rows until a new row blocks.
  std::vector<int> crash(const Eigen::VectorXd& c, Eigen::VectorXd p) const {
    const int d = sys_.dim();
    const int m = sys_.rows();
    std::vector<int> active;
    std::vector<char> used(m, 0);
    for (int j = 0; j < sys_.eq_count; ++j) {
      active.push_back(j);
      used[j] = 1;
    }

    auto null_space = [&]() -> Eigen::MatrixXd {
      if (active.empty()) return Eigen::MatrixXd::Identity(d, d);
      Eigen::MatrixXd K(active.size(), d);
      for (std::size_t i = 0; i < active.size(); ++i) K.row(i) = sys_.A.row(active[i]);
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(K, Eigen::ComputeFullV);
      const auto& sv = svd.singularValues();
      int rank = 0;
      for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv[i] > rank_tol_ * std::max(1.0, sv[0])) ++rank;
      return svd.matrixV().rightCols(d - rank);
    };

    for (int guard = 0; guard < 4 * d + 4; ++guard) {
      const Eigen::MatrixXd N = null_space();
      if (N.cols() == 0) break;
      const Eigen::VectorXd slack = sys_.A * p - sys_.b;

      bool added = false;
      for (int j = sys_.eq_count; j < m && !added; ++j) {
        if (used[j] || std::abs(slack[j]) > feas_tol_) continue;
        if ((N.transpose() * sys_.A.row(j).transpose()).norm() > 1e-9 * sys_.A.row(j).norm()) {
          active.push_back(j);
          used[j] = 1;
          added = true;
        }
      }
      if (added) continue;

      Eigen::VectorXd dir = N * (N.transpose() * c);
      if (dir.norm() <= 1e-12) dir = N.col(0);
      int block = -1;
      double best_t = 0.0;
      for (int attempt = 0; attempt < 2 && block < 0; ++attempt) {
        if (attempt == 1) {
          if (c.dot(dir) > 1e-12) throw SolverFailure("crash: objective unbounded along an edge");
          dir = -dir;
        }
        const Eigen::VectorXd ad = sys_.A * dir;
        const double piv_tol = 1e-9 * std::max(1.0, dir.cwiseAbs().maxCoeff());
        for (int j = sys_.eq_count; j < m; ++j) {
          if (used[j] || ad[j] >= -piv_tol) continue;
          const double t = std::max(slack[j], 0.0) / -ad[j];
          if (block < 0 || t < best_t) {
            block = j;
            best_t = t;
          }
        }
      }
      if (block < 0) throw SolverFailure("crash: feasible region contains a line");
      p += best_t * dir;
      active.push_back(block);
      used[block] = 1;
    }
    if (static_cast<int>(active.size()) != d)
      throw SolverFailure("crash: could not assemble a vertex basis");
    return active;
  }

 private:
  const RowSystem& sys_;
  double feas_tol_;
  double rank_tol_;
  SolverStats& stats_;
};

// Core rows: index 0 is efficiency, index T (1 <= T <= 2^n - 2) is coalition T.
RowSystem core_rows(const CoreLp& lp, bool lifted) {
  const int n = lp.variables();
  const int m = static_cast<int>(lp.inequality_count()) + 1 + (lifted ? 1 : 0);
  const int d = n + (lifted ? 1 : 0);
  RowSystem sys;
  sys.A = Eigen::MatrixXd::Zero(m, d);
  sys.b = Eigen::VectorXd::Zero(m);
  sys.A.row(0).head(n).setOnes();
  sys.b[0] = lp.efficiency_rhs();
  const int ineq = static_cast<int>(lp.inequality_count());
  for (int mask = 1; mask <= ineq; ++mask) {
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1) sys.A(mask, i) = 1.0;
    if (lifted) sys.A(mask, n) = 1.0;
    sys.b[mask] = lp.rhs(static_cast<ConstraintId>(mask));
  }
  if (lifted) sys.A(m - 1, n) = 1.0;  // s >= 0
  return sys;
}

}  // namespace

// ---------------------------------------------------------------------------

CoreLp::CoreLp(const TUGame& game)
    : n_(game.players()), rhs_(game.values()), scale_(std::max(1.0, std::abs(game.grand_value()))) {}

Eigen::RowVectorXd CoreLp::row(ConstraintId id) const {
  if (id == 0 || id > efficiency_id()) throw DomainError("no constraint with id " + std::to_string(id));
  Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(n_);
  for (int i = 0; i < n_; ++i)
    if (id >> i & 1U) r[i] = 1.0;
  return r;
}

CoreLp build_core_lp(const TUGame& game) { return CoreLp(game); }

struct VertexSolver::Impl {
  RowSystem sys;
  bool phase1_done = false;
  bool nonempty = false;
  double phase1_value = 0.0;
  std::vector<int> phase1_basis;

  int row_of(ConstraintId id, ConstraintId full) const {
    return id == full ? 0 : static_cast<int>(id);
  }
};

VertexSolver::VertexSolver(const CoreLp& lp, Tolerances tol)
    : lp_(lp), tol_(tol), impl_(std::make_unique<Impl>()) {
  impl_->sys = core_rows(lp, false);
}

VertexSolver::~VertexSolver() = default;
VertexSolver::VertexSolver(VertexSolver&&) noexcept = default;

void VertexSolver::run_phase1() {
  auto& im = *impl_;
  im.phase1_done = true;
  ++stats_.phase1_runs;
  const int n = lp_.variables();
  const double feas = tol_.feasibility * lp_.scale();

  if (n == 1) {
    im.nonempty = true;
    im.phase1_value = 0.0;
    im.phase1_basis = {0};
    return;
  }

  // min s  s.t.  x(N) = v(N), x(T) + s >= v(T), s >= 0.
  const RowSystem lifted = core_rows(lp_, true);
  Engine engine(lifted, feas, tol_.rank, stats_);
  Eigen::VectorXd start(n + 1);
  start.head(n).setConstant(lp_.efficiency_rhs() / n);
  start[n] = 0.0;
  const Eigen::VectorXd slack0 = lifted.A * start - lifted.b;
  double s0 = 0.0;
  for (int j = 1; j < lifted.rows() - 1; ++j) s0 = std::max(s0, -slack0[j]);
  start[n] = s0;

  Eigen::VectorXd c = Eigen::VectorXd::Zero(n + 1);
  c[n] = -1.0;
  std::vector<int> basis = engine.crash(c, start);
  Eigen::VectorXd x, lambda;
  const auto status = engine.maximize(c, basis, x, lambda);
  if (status != EngineStatus::kOptimal)
    throw SolverFailure("phase 1 did not converge (status " + std::to_string(static_cast<int>(status)) + ")");

  im.phase1_value = std::max(0.0, x[n]);
  im.nonempty = im.phase1_value <= tol_.phase1 * lp_.scale();
  if (!im.nonempty) return;

  // Map the lifted basis back to n original rows: drop the s >= 0 row, or,
  // when it is nonbasic, the inequality row that best spans it.
  const int s_row = lifted.rows() - 1;
  auto it = std::find(basis.begin(), basis.end(), s_row);
  if (it != basis.end()) {
    basis.erase(it);
  } else {
    Eigen::MatrixXd B(n + 1, n + 1);
    for (int p = 0; p <= n; ++p) B.row(p) = lifted.A.row(basis[p]);
    const Eigen::VectorXd w = B.transpose().colPivHouseholderQr().solve(Eigen::VectorXd::Unit(n + 1, n));
    int drop = -1;
    for (int p = 0; p <= n; ++p) {
      if (basis[p] == 0) continue;
      if (drop < 0 || std::abs(w[p]) > std::abs(w[drop])) drop = p;
    }
    basis.erase(basis.begin() + drop);
  }
  Engine orig(im.sys, feas, tol_.rank, stats_);
  Eigen::VectorXd xv;
  if (!orig.vertex(basis, xv))
    throw SolverFailure("phase 1 produced a singular basis for the original problem");
  im.phase1_basis = basis;
}

bool VertexSolver::feasible() {
  if (!impl_->phase1_done) run_phase1();
  return impl_->nonempty;
}

double VertexSolver::phase1_value() {
  if (!impl_->phase1_done) run_phase1();
  return impl_->phase1_value;
}

std::optional<VertexSolution> VertexSolver::solve(const Eigen::VectorXd& c, const Basis* warm) {
  const int n = lp_.variables();
  if (c.size() != n) throw DomainError("direction has wrong length");
  if (!c.allFinite() || c.cwiseAbs().maxCoeff() == 0.0)
    throw DomainError("direction must be finite and nonzero");
  if (!feasible()) return std::nullopt;

  auto& im = *impl_;
  const ConstraintId full = lp_.efficiency_id();
  const double feas = tol_.feasibility * lp_.scale();
  Engine engine(im.sys, feas, tol_.rank, stats_);
  ++stats_.solves;

  std::vector<int> basis;
  Eigen::VectorXd x;
  if (warm && static_cast<int>(warm->rows.size()) == n) {
    std::vector<int> rows;
    bool ok = std::find(warm->rows.begin(), warm->rows.end(), full) != warm->rows.end();
    for (ConstraintId id : warm->rows) {
      if (id == 0 || id > full) ok = false;
      rows.push_back(im.row_of(id, full));
    }
    std::vector<int> sorted = rows;
    std::sort(sorted.begin(), sorted.end());
    ok = ok && std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
    if (ok && engine.vertex(rows, x) && engine.max_violation(x) <= feas) basis = std::move(rows);
  }
  if (basis.empty()) {
    basis = im.phase1_basis;
    ++stats_.cold_starts;
  } else {
    ++stats_.warm_starts;
  }

  Eigen::VectorXd lambda;
  const auto status = engine.maximize(c, basis, x, lambda);
  if (status == EngineStatus::kUnbounded)
    throw SolverFailure("internal error: core LP reported unbounded (feasible set is compact)");
  if (status == EngineStatus::kIterationLimit) {
    std::ostringstream msg;
    msg << "simplex stalled after " << stats_.pivots << " total pivots ("
        << stats_.bland_pivots << " under Bland's rule) on " << lp_.inequality_count() << " rows";
    throw SolverFailure(msg.str());
  }

  // Certificate: primal feasibility, dual sign, vertex rank.
  const double viol = engine.max_violation(x);
  double dual_worst = 0.0;
  for (int p = 0; p < n; ++p)
    if (basis[p] != 0) dual_worst = std::max(dual_worst, lambda[p]);
  const double cscale = std::max(1.0, c.cwiseAbs().maxCoeff());
  if (viol > feas || dual_worst > tol_.dual * cscale) {
    std::ostringstream msg;
    msg << "uncertified optimum: primal violation " << viol << ", dual violation " << dual_worst;
    throw SolverFailure(msg.str());
  }

  VertexSolution sol;
  sol.x = x;
  sol.objective = c.dot(x);
  for (int r : basis) sol.basis.rows.push_back(r == 0 ? full : static_cast<ConstraintId>(r));
  const Eigen::VectorXd slack = im.sys.A * x - im.sys.b;
  const double tight = tol_.tight * lp_.scale();
  sol.tight_set.push_back(full);
  for (int j = 1; j < im.sys.rows(); ++j)
    if (std::abs(slack[j]) <= tight) sol.tight_set.push_back(static_cast<ConstraintId>(j));
  if (constraint_rank(n, sol.tight_set, tol_.rank) != n)
    throw SolverFailure("returned point is not a vertex (tight rows rank-deficient)");
  return sol;
}

std::optional<VertexSolution> solve_vertex(const CoreLp& lp, const Eigen::VectorXd& c,
                                           const Basis* warm) {
  VertexSolver solver(lp);
  return solver.solve(c, warm);
}

bool check_nonempty(const TUGame& game) {
  const CoreLp lp(game);
  VertexSolver solver(lp);
  return solver.feasible();
}

// ---------------------------------------------------------------------------

namespace {

std::vector<double> subset_sums(const Allocation& x) {
  const std::size_t count = std::size_t{1} << x.size();
  std::vector<double> sums(count, 0.0);
  for (std::size_t mask = 1; mask < count; ++mask)
    sums[mask] = sums[mask & (mask - 1)] + x[__builtin_ctzll(mask)];
  return sums;
}

}  // namespace

double core_violation(const TUGame& game, const Allocation& x) {
  if (x.size() != game.players()) throw DomainError("allocation length differs from player count");
  const auto sums = subset_sums(x);
  const auto& v = game.values();
  double worst = std::abs(sums.back() - v.back());
  for (std::size_t mask = 1; mask + 1 < v.size(); ++mask) worst = std::max(worst, v[mask] - sums[mask]);
  return worst;
}

std::vector<ConstraintId> tight_constraints(const TUGame& game, const Allocation& x, double tol) {
  if (x.size() != game.players()) throw DomainError("allocation length differs from player count");
  const auto sums = subset_sums(x);
  const auto& v = game.values();
  std::vector<ConstraintId> out{game.grand_coalition()};
  for (std::size_t mask = 1; mask + 1 < v.size(); ++mask)
    if (std::abs(sums[mask] - v[mask]) <= tol) out.push_back(static_cast<ConstraintId>(mask));
  return out;
}

int constraint_rank(int n, std::span<const ConstraintId> ids, double threshold) {
  if (ids.empty()) return 0;
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(ids.size()), n);
  for (std::size_t r = 0; r < ids.size(); ++r)
    for (int i = 0; i < n; ++i)
      if (ids[r] >> i & 1U) M(static_cast<Eigen::Index>(r), i) = 1.0;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(M);
  qr.setThreshold(threshold);
  return static_cast<int>(qr.rank());
}

}  // namespace tucore
