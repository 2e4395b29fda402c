#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tucore/directions.hpp"
#include "tucore/game.hpp"
#include "tucore/lp.hpp"

namespace tucore {

inline constexpr double kDedupTolerance = 1e-7;  // L-infinity

enum class VertexSource { kApprox, kOracle, kSaturation };

std::string_view source_name(VertexSource source);
VertexSource parse_source(std::string_view text);

/// Distinct verified core vertices. Two points closer than kDedupTolerance in
/// L-infinity are the same vertex.
struct VertexSet {
  std::vector<Allocation> points;
  VertexSource source = VertexSource::kApprox;
  std::string game_label;
  // False for saturation references, which carry no completeness proof.
  bool proven_complete = false;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  int dimension() const { return points.empty() ? 0 : static_cast<int>(points.front().size()); }

  // Index of a stored point within `tol` of x, if any.
  std::optional<std::size_t> find(const Allocation& x, double tol = kDedupTolerance) const;

  // Lexicographic order of points; makes serialized output independent of
  // insertion order.
  void canonicalize();
};

/// Appends x unless a stored point lies within kDedupTolerance. Returns true
/// when x was appended.
bool dedup_insert(VertexSet& set, const Allocation& x);

/// x is a core vertex: all constraints hold within 1e-8 max(1,|v(N)|) and the
/// rows tight within 1e-7 (efficiency included) have rank n.
bool verify_vertex(const TUGame& game, const Allocation& x);

struct ApproxStats {
  long long draws = 0;
  long long warm_starts = 0;
  long long cold_starts = 0;
  long long pivots = 0;
  long long degenerate_pivots = 0;
  long long bland_pivots = 0;
  double verify_time_s = 0.0;  // included in solve_time_s
};

struct ApproxResult {
  VertexSet vertices;
  int k = 0;
  DirectionScheme scheme;
  double solve_time_s = 0.0;  // Step 1 only: solves plus vertex verification
  ApproxStats lp_stats;
  bool core_empty = false;
};

/// One worker's Step-1 loop: draw a direction, solve warm-started from the
/// previous basis, verify and dedup-insert the vertex.
class VertexCollector {
 public:
  VertexCollector(const TUGame& game, VertexSet& out);
  VertexCollector(const VertexCollector&) = delete;
  VertexCollector& operator=(const VertexCollector&) = delete;

  // Solves for `c`; returns true if a new vertex was added. Returns false and
  // sets core_empty() when the LP is infeasible.
  bool add_direction(const Eigen::VectorXd& c);

  bool core_empty() const { return empty_; }
  ApproxStats stats() const;

 private:
  const TUGame& game_;
  CoreLp lp_;
  VertexSolver solver_;
  VertexSet& out_;
  std::optional<Basis> warm_;
  bool empty_ = false;
  long long draws_ = 0;
  double verify_time_s_ = 0.0;
};

/// Runs k iterations of Step 1. Returns an empty set with core_empty = true
/// when the first LP is infeasible. With workers > 1 the draws are split
/// into contiguous blocks, worker w sampling from derive_seed(seed, w + 1);
/// workers == 1 uses the seed's own stream. Points are canonicalized.
ApproxResult approximate_core(const TUGame& game, int k, const DirectionScheme& scheme,
                              int workers = 1);

/// Same stream as approximate_core(game, max(ks), scheme, 1), snapshotting
/// the vertex set after each k in `ks` (strictly increasing). Snapshots are
/// prefixes of one another by construction.
std::vector<ApproxResult> approximate_core_checkpoints(const TUGame& game, std::span<const int> ks,
                                                       const DirectionScheme& scheme);

// Result / vertex-set JSON. Timing is left out when include_timing is false so
// repeated runs are byte-identical.
std::string result_to_json(const ApproxResult& result, bool include_timing = true);
std::string vertex_set_to_json(const VertexSet& set);
// Accepts both result files and bare vertex-set files.
VertexSet vertex_set_from_json(const std::string& text);
VertexSet load_vertex_set(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace tucore
