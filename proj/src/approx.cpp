#include "tucore/approx.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>
#include <thread>

#include "json_util.hpp"
#include "tucore/errors.hpp"

namespace tucore {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double linf(const Allocation& a, const Allocation& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

std::string_view source_name(VertexSource source) {
  switch (source) {
    case VertexSource::kApprox: return "APPROX";
    case VertexSource::kOracle: return "ORACLE";
    case VertexSource::kSaturation: return "SATURATION";
  }
  return "APPROX";
}

VertexSource parse_source(std::string_view text) {
  if (text == "APPROX") return VertexSource::kApprox;
  if (text == "ORACLE") return VertexSource::kOracle;
  if (text == "SATURATION") return VertexSource::kSaturation;
  throw ParseError("bad value for key 'source': " + std::string(text));
}

std::optional<std::size_t> VertexSet::find(const Allocation& x, double tol) const {
  for (std::size_t i = 0; i < points.size(); ++i)
    if (points[i].size() == x.size() && linf(points[i], x) <= tol) return i;
  return std::nullopt;
}

void VertexSet::canonicalize() {
  std::sort(points.begin(), points.end(), [](const Allocation& a, const Allocation& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  });
}

bool dedup_insert(VertexSet& set, const Allocation& x) {
  if (!x.allFinite()) throw DomainError("cannot insert a non-finite point");
  if (!set.empty() && x.size() != set.dimension()) throw DomainError("point dimension mismatch");
  if (set.find(x)) return false;
  set.points.push_back(x);
  return true;
}

bool verify_vertex(const TUGame& game, const Allocation& x) {
  const int n = game.players();
  if (x.size() != n) throw DomainError("allocation length differs from player count");
  const double scale = std::max(1.0, std::abs(game.grand_value()));
  if (core_violation(game, x) > 1e-8 * scale) return false;
  const auto tight = tight_constraints(game, x, 1e-7 * scale);
  return constraint_rank(n, tight) == n;
}

// ---------------------------------------------------------------------------

VertexCollector::VertexCollector(const TUGame& game, VertexSet& out)
    : game_(game), lp_(game), solver_(lp_), out_(out) {
  if (out_.game_label.empty()) out_.game_label = game.label();
}

bool VertexCollector::add_direction(const Eigen::VectorXd& c) {
  if (empty_) return false;
  ++draws_;
  auto sol = solver_.solve(c, warm_ ? &*warm_ : nullptr);
  if (!sol) {
    empty_ = true;
    return false;
  }
  warm_ = sol->basis;
  if (out_.find(sol->x)) return false;
  const auto t0 = Clock::now();
  const bool ok = verify_vertex(game_, sol->x);
  verify_time_s_ += seconds_since(t0);
  if (!ok) throw SolverFailure("solver returned a point that fails vertex verification");
  out_.points.push_back(std::move(sol->x));
  return true;
}

ApproxStats VertexCollector::stats() const {
  const auto& s = solver_.stats();
  ApproxStats out;
  out.draws = draws_;
  out.warm_starts = s.warm_starts;
  out.cold_starts = s.cold_starts;
  out.pivots = s.pivots;
  out.degenerate_pivots = s.degenerate_pivots;
  out.bland_pivots = s.bland_pivots;
  out.verify_time_s = verify_time_s_;
  return out;
}

namespace {

void accumulate(ApproxStats& into, const ApproxStats& s) {
  into.draws += s.draws;
  into.warm_starts += s.warm_starts;
  into.cold_starts += s.cold_starts;
  into.pivots += s.pivots;
  into.degenerate_pivots += s.degenerate_pivots;
  into.bland_pivots += s.bland_pivots;
  into.verify_time_s += s.verify_time_s;
}

struct WorkerOutput {
  VertexSet set;
  ApproxStats stats;
  bool empty = false;
  std::exception_ptr error;
};

void run_worker(const TUGame& game, int draws, DirectionScheme scheme, WorkerOutput& out) {
  try {
    out.set.source = VertexSource::kApprox;
    VertexCollector collector(game, out.set);
    DirectionSampler sampler(scheme, game.players());
    for (int i = 0; i < draws && !collector.core_empty(); ++i) collector.add_direction(sampler.next());
    out.empty = collector.core_empty();
    out.stats = collector.stats();
  } catch (...) {
    out.error = std::current_exception();
  }
}

}  // namespace

ApproxResult approximate_core(const TUGame& game, int k, const DirectionScheme& scheme, int workers) {
  if (k < 1) throw DomainError("sampling size k must be >= 1");
  if (workers < 1) throw DomainError("worker count must be >= 1");
  scheme.validate();
  workers = std::min(workers, k);

  ApproxResult result;
  result.k = k;
  result.scheme = scheme;
  result.vertices.source = VertexSource::kApprox;
  result.vertices.game_label = game.label();

  std::vector<WorkerOutput> outs(workers);
  const auto t0 = Clock::now();
  if (workers == 1) {
    run_worker(game, k, scheme, outs[0]);
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) {
      const int draws = k / workers + (w < k % workers ? 1 : 0);
      DirectionScheme sub = scheme;
      sub.seed = derive_seed(scheme.seed, static_cast<std::uint64_t>(w) + 1);
      threads.emplace_back(run_worker, std::cref(game), draws, sub, std::ref(outs[w]));
    }
    for (auto& t : threads) t.join();
  }
  result.solve_time_s = seconds_since(t0);

  for (auto& o : outs) {
    if (o.error) std::rethrow_exception(o.error);
    result.core_empty = result.core_empty || o.empty;
    accumulate(result.lp_stats, o.stats);
    for (auto& p : o.set.points) dedup_insert(result.vertices, p);
  }
  if (result.core_empty) result.vertices.points.clear();
  result.vertices.canonicalize();
  return result;
}

std::vector<ApproxResult> approximate_core_checkpoints(const TUGame& game, std::span<const int> ks,
                                                       const DirectionScheme& scheme) {
  if (ks.empty()) return {};
  for (std::size_t i = 0; i < ks.size(); ++i)
    if (ks[i] < 1 || (i > 0 && ks[i] <= ks[i - 1]))
      throw DomainError("checkpoint k values must be positive and strictly increasing");
  scheme.validate();

  VertexSet running;
  running.source = VertexSource::kApprox;
  VertexCollector collector(game, running);
  DirectionSampler sampler(scheme, game.players());

  std::vector<ApproxResult> out;
  int drawn = 0;
  double elapsed = 0.0;
  for (int k : ks) {
    const auto t0 = Clock::now();
    for (; drawn < k && !collector.core_empty(); ++drawn) collector.add_direction(sampler.next());
    elapsed += seconds_since(t0);
    drawn = k;
    ApproxResult r;
    r.k = k;
    r.scheme = scheme;
    r.solve_time_s = elapsed;
    r.lp_stats = collector.stats();
    r.core_empty = collector.core_empty();
    r.vertices = running;
    r.vertices.game_label = game.label();
    if (r.core_empty) r.vertices.points.clear();
    r.vertices.canonicalize();
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

std::string points_json(const VertexSet& set) {
  std::string out = "[";
  for (std::size_t i = 0; i < set.points.size(); ++i) {
    out += i ? ",\n    " : "\n    ";
    out += detail::json_array(set.points[i]);
  }
  out += set.points.empty() ? "]" : "\n  ]";
  return out;
}

}  // namespace

std::string vertex_set_to_json(const VertexSet& set) {
  std::ostringstream os;
  os << "{\n  \"game\": " << detail::json_string(set.game_label) << ",\n"
     << "  \"source\": \"" << source_name(set.source) << "\",\n"
     << "  \"proven_complete\": " << (set.proven_complete ? "true" : "false") << ",\n"
     << "  \"vertex_count\": " << set.size() << ",\n"
     << "  \"vertices\": " << points_json(set) << "\n}\n";
  return os.str();
}

std::string result_to_json(const ApproxResult& r, bool include_timing) {
  std::ostringstream os;
  os << "{\n  \"game\": " << detail::json_string(r.vertices.game_label) << ",\n"
     << "  \"source\": \"" << source_name(r.vertices.source) << "\",\n"
     << "  \"k\": " << r.k << ",\n"
     << "  \"scheme\": \"" << scheme_name(r.scheme.kind) << "\",\n"
     << "  \"seed\": " << r.scheme.seed << ",\n"
     << "  \"perturbation\": " << detail::fmt17(r.scheme.perturbation) << ",\n"
     << "  \"rng\": \"" << kRngAlgorithm << "\",\n"
     << "  \"core_empty\": " << (r.core_empty ? "true" : "false") << ",\n";
  if (include_timing) {
    os << "  \"solve_time_s\": " << detail::fmt17(r.solve_time_s) << ",\n"
       << "  \"verify_time_s\": " << detail::fmt17(r.lp_stats.verify_time_s) << ",\n";
  }
  os << "  \"lp_stats\": {\"draws\": " << r.lp_stats.draws << ", \"warm_starts\": " << r.lp_stats.warm_starts
     << ", \"cold_starts\": " << r.lp_stats.cold_starts << ", \"pivots\": " << r.lp_stats.pivots
     << ", \"degenerate_pivots\": " << r.lp_stats.degenerate_pivots
     << ", \"bland_pivots\": " << r.lp_stats.bland_pivots << "},\n"
     << "  \"vertex_count\": " << r.vertices.size() << ",\n"
     << "  \"vertices\": " << points_json(r.vertices) << "\n}\n";
  return os.str();
}

VertexSet vertex_set_from_json(const std::string& text) {
  const auto j = detail::parse_json(text);
  VertexSet set;
  set.game_label = j.contains("game") ? detail::require<std::string>(j, "game") : std::string{};
  set.source = j.contains("source") ? parse_source(detail::require<std::string>(j, "source"))
                                    : VertexSource::kApprox;
  if (j.contains("proven_complete")) set.proven_complete = detail::require<bool>(j, "proven_complete");
  const auto rows = detail::require<std::vector<std::vector<double>>>(j, "vertices");
  for (const auto& row : rows) {
    if (!set.points.empty() && static_cast<Eigen::Index>(row.size()) != set.points.front().size())
      throw SchemaError("vertices have inconsistent lengths");
    set.points.emplace_back(Eigen::Map<const Eigen::VectorXd>(row.data(), static_cast<Eigen::Index>(row.size())));
  }
  if (j.contains("vertex_count") && detail::require<std::size_t>(j, "vertex_count") != set.size())
    throw SchemaError("vertex_count does not match the vertices array");
  return set;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error("write failed for " + path.string());
}

VertexSet load_vertex_set(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return vertex_set_from_json(buf.str());
}

}  // namespace tucore
