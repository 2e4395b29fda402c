#include "tucore/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <tuple>

#include "json_util.hpp"
#include "tucore/errors.hpp"
#include "tucore/metrics.hpp"
#include "tucore/oracle.hpp"
#include "tucore/polytope.hpp"

namespace tucore {

void ExperimentConfig::validate() const {
  if (model != "savings" && model != "nonconvex" && model != "museum" && !model.starts_with("file:"))
    throw SchemaError("field 'model': expected savings, nonconvex, museum or file:<path>");
  if (n_list.empty()) throw SchemaError("field 'n': at least one value required");
  for (int n : n_list)
    if (n < 1 || n > kMaxDensePlayers) throw SchemaError("field 'n': values must lie in [1, 24]");
  if (k_list.empty()) throw SchemaError("field 'k_list': at least one value required");
  for (std::size_t i = 0; i < k_list.size(); ++i)
    if (k_list[i] < 1 || (i > 0 && k_list[i] <= k_list[i - 1]))
      throw SchemaError("field 'k_list': values must be positive and strictly increasing");
  if (schemes.empty()) throw SchemaError("field 'scheme': at least one value required");
  if (runs < 1) throw SchemaError("field 'runs': must be >= 1");
  if (stall_budget < 1) throw SchemaError("field 'stall_budget': must be >= 1");
}

namespace {

template <class T>
std::vector<T> one_or_many(const nlohmann::json& j, const char* key) {
  const auto& v = j.at(key);
  try {
    if (v.is_array()) return v.get<std::vector<T>>();
    return {v.get<T>()};
  } catch (const nlohmann::json::exception&) {
    throw SchemaError(std::string("field '") + key + "': wrong type");
  }
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = detail::parse_json(json_text);
  } catch (const ParseError& e) {
    throw SchemaError(e.what());
  }
  if (!j.is_object()) throw SchemaError("config must be a JSON object");
  static const char* known[] = {"model", "n", "k_list", "scheme", "seed", "runs", "compute_exact", "out_path",
                                "stall_budget"};
  for (const auto& [key, _] : j.items())
    if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return key == k; }) == std::end(known))
      throw SchemaError("unknown field '" + key + "'");
  for (const char* key : {"model", "n", "k_list", "scheme"})
    if (!j.contains(key)) throw SchemaError(std::string("missing field '") + key + "'");

  ExperimentConfig c;
  auto get = [&](const char* key, auto& into) {
    if (!j.contains(key)) return;
    try {
      into = j.at(key).get<std::decay_t<decltype(into)>>();
    } catch (const nlohmann::json::exception&) {
      throw SchemaError(std::string("field '") + key + "': wrong type");
    }
  };
  get("model", c.model);
  c.n_list = one_or_many<int>(j, "n");
  get("k_list", c.k_list);
  c.schemes.clear();
  for (const auto& s : one_or_many<std::string>(j, "scheme")) {
    try {
      c.schemes.push_back(parse_scheme(s));
    } catch (const DomainError& e) {
      throw SchemaError(std::string("field 'scheme': ") + e.what());
    }
  }
  get("seed", c.seed);
  get("runs", c.runs);
  get("compute_exact", c.compute_exact);
  get("out_path", c.out_path);
  get("stall_budget", c.stall_budget);
  std::sort(c.n_list.begin(), c.n_list.end());
  c.n_list.erase(std::unique(c.n_list.begin(), c.n_list.end()), c.n_list.end());
  std::sort(c.schemes.begin(), c.schemes.end());
  c.schemes.erase(std::unique(c.schemes.begin(), c.schemes.end()), c.schemes.end());
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

TUGame build_model_game(const std::string& model, int n) {
  if (model == "savings") return make_savings_game(SavingsParams::reference(n));
  if (model == "nonconvex") return make_nonconvex_game(n);
  if (model == "museum") return make_reference_museum_game(n);
  if (model.starts_with("file:")) return load_game(model.substr(5));
  throw DomainError("unknown model '" + model + "'");
}

std::string_view reference_name(ReferenceKind kind) {
  switch (kind) {
    case ReferenceKind::kNone: return "none";
    case ReferenceKind::kNaive: return "naive";
    case ReferenceKind::kMarginalVectors: return "marginal-vectors";
    case ReferenceKind::kSaturation: return "saturation";
  }
  return "none";
}

VertexSet reference_vertices(const TUGame& game, int stall_budget, std::uint64_t seed, ReferenceKind* used) {
  ReferenceKind kind;
  VertexSet ref;
  if (game.players() <= kNaiveOracleMaxPlayers) {
    kind = ReferenceKind::kNaive;
    ref = enumerate_vertices_naive(game);
  } else if (game.players() <= 12 && is_supermodular(game)) {
    kind = ReferenceKind::kMarginalVectors;
    ref = enumerate_marginal_vectors(game);
  } else {
    kind = ReferenceKind::kSaturation;
    ref = saturation_reference(game, {stall_budget, seed});
  }
  if (used) *used = kind;
  return ref;
}

namespace {

struct Accum {
  std::vector<double> epr_num, vr, rdc, step1, hull;
  bool vr_undefined = false, rdc_undefined = false, rdc_above_one = false;
};

double mean(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

// Sample standard deviation; 0 for a single run.
double stddev(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

std::optional<double> opt_mean(const std::vector<double>& xs) {
  return xs.empty() ? std::nullopt : std::optional<double>(mean(xs));
}
std::optional<double> opt_std(const std::vector<double>& xs) {
  return xs.empty() ? std::nullopt : std::optional<double>(stddev(xs));
}

}  // namespace

BenchReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  BenchReport report;

  for (int n : config.n_list) {
    const TUGame game = build_model_game(config.model, n);
    const int players = game.players();
    const bool nonempty = check_nonempty(game);

    std::optional<VertexSet> ref;
    std::optional<Polytope> ref_poly;
    ReferenceKind kind = ReferenceKind::kNone;
    if (nonempty && config.compute_exact) {
      ref = reference_vertices(game, config.stall_budget, config.seed, &kind);
      ref_poly = convex_hull(project(*ref, game.grand_value()));
    }

    for (SchemeKind scheme : config.schemes) {
      std::vector<Accum> acc(config.k_list.size());
      if (nonempty) {
        for (int r = 0; r < config.runs; ++r) {
          const DirectionScheme ds{scheme, derive_seed(config.seed, static_cast<std::uint64_t>(r))};
          const auto snaps = approximate_core_checkpoints(game, config.k_list, ds);
          for (std::size_t i = 0; i < snaps.size(); ++i) {
            const auto& snap = snaps[i];
            auto& a = acc[i];
            a.step1.push_back(snap.solve_time_s);
            for (const auto& p : snap.vertices.points) {
              ++report.points_checked;
              if (!exact_core_membership(game, p)) ++report.points_outside;
            }
            if (!ref) continue;
            const auto m = compute_metrics(snap.vertices, *ref, *ref_poly, game.grand_value());
            a.hull.push_back(m.hull_time_s);
            a.epr_num.push_back(m.epr_num);
            if (m.vr) a.vr.push_back(*m.vr);
            else a.vr_undefined = true;
            if (m.rdc) {
              a.rdc.push_back(*m.rdc);
              if (*m.rdc > 1.0 + 1e-9) a.rdc_above_one = true;
            } else {
              a.rdc_undefined = true;
            }
          }
        }
      }
      for (std::size_t i = 0; i < config.k_list.size(); ++i) {
        const auto& a = acc[i];
        BenchRow row;
        row.model = config.model;
        row.n = players;
        row.scheme = scheme;
        row.k = config.k_list[i];
        row.runs = config.runs;
        if (!nonempty) {
          row.flags.push_back("EMPTY-CORE");
        } else {
          row.step1_time_mean_s = mean(a.step1);
          if (!ref) {
            row.flags.push_back("NO-REFERENCE");
          } else {
            row.epr_num_mean = mean(a.epr_num);
            row.epr_den = static_cast<int>(ref->size());
            row.epr_std = stddev(a.epr_num);
            row.vr_mean = opt_mean(a.vr);
            row.vr_std = opt_std(a.vr);
            row.rdc_mean = opt_mean(a.rdc);
            row.rdc_std = opt_std(a.rdc);
            row.hull_time_mean_s = mean(a.hull);
            if (kind == ReferenceKind::kSaturation) row.flags.push_back("SATURATION");
            if (a.vr_undefined) row.flags.push_back("VR-UNDEFINED");
            if (a.rdc_undefined) row.flags.push_back("RDC-UNDEFINED");
            if (a.rdc_above_one) row.flags.push_back("RDC>1");
          }
        }
        report.rows.push_back(std::move(row));
      }
    }
  }
  if (report.points_outside > 0)
    throw ContractViolation(std::to_string(report.points_outside) + " approximated points lie outside the core");

  std::stable_sort(report.rows.begin(), report.rows.end(), [](const BenchRow& a, const BenchRow& b) {
    return std::tie(a.n, a.scheme, a.k) < std::tie(b.n, b.scheme, b.k);
  });
  return report;
}

// ---------------------------------------------------------------------------

namespace {

std::string fixed(const std::optional<double>& x, int digits) {
  if (!x) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, *x);
  return buf;
}

std::string join_flags(const std::vector<std::string>& flags) {
  std::string out;
  for (const auto& f : flags) out += (out.empty() ? "" : ";") + f;
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

}  // namespace

void emit_table(const std::vector<BenchRow>& rows, TableStyle style, std::ostream& out, bool include_timing) {
  auto time_col = [&](double t) { return include_timing ? fixed(t, 3) : std::string(); };
  if (style == TableStyle::kCsv) {
    out << kCsvHeader << '\n';
    for (const auto& r : rows) {
      out << csv_field(r.model) << ',' << r.n << ',' << scheme_name(r.scheme) << ',' << r.k << ',' << r.runs << ','
          << fixed(r.epr_num_mean, 4) << ',' << (r.epr_den ? std::to_string(*r.epr_den) : "") << ','
          << fixed(r.epr_std, 4) << ',' << fixed(r.vr_mean, 6) << ',' << fixed(r.vr_std, 6) << ','
          << fixed(r.rdc_mean, 6) << ',' << fixed(r.rdc_std, 6) << ',' << time_col(r.step1_time_mean_s) << ','
          << time_col(r.hull_time_mean_s) << ',' << join_flags(r.flags) << '\n';
    }
    return;
  }

  std::vector<std::vector<std::string>> cells{{"|N|", "G", "k", "EPR", "VR", "RDC", "Time", "Flags"}};
  for (const auto& r : rows) {
    std::string e;
    if (r.epr_num_mean) e = fixed(r.epr_num_mean, 2) + "/" + std::to_string(*r.epr_den);
    cells.push_back({std::to_string(r.n), r.scheme == SchemeKind::kDeterministicSigns ? "D" : "R",
                     std::to_string(r.k), e, fixed(r.vr_mean, 4), fixed(r.rdc_mean, 4),
                     time_col(r.step1_time_mean_s), join_flags(r.flags)});
  }
  std::vector<std::size_t> width(cells.front().size(), 0);
  for (const auto& line : cells)
    for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());
  for (const auto& line : cells) {
    std::string text;
    for (std::size_t c = 0; c < line.size(); ++c) {
      if (c) text += "  ";
      text += line[c] + std::string(width[c] - line[c].size(), ' ');
    }
    while (!text.empty() && text.back() == ' ') text.pop_back();
    out << text << '\n';
  }
}

AllocationVerdict check_allocation(const TUGame& game, const Allocation& x, const VertexSet* approx) {
  if (x.size() != game.players())
    throw DomainError("allocation has " + std::to_string(x.size()) + " entries, game has " +
                      std::to_string(game.players()) + " players");
  AllocationVerdict v;
  v.max_violation = core_violation(game, x);
  v.exact_in = exact_core_membership(game, x);
  if (approx) {
    if (!approx->empty() && approx->dimension() != game.players())
      throw DomainError("approximated vertex set dimension differs from player count");
    v.approx_in = !approx->empty() && contains(*approx, x);
    if (*v.approx_in && !v.exact_in)
      throw ContractViolation("allocation is inside the approximated core but outside the exact core");
  }
  return v;
}

}  // namespace tucore
