#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "tucore/approx.hpp"
#include "tucore/game.hpp"

namespace tucore {

/// Experiment description, read from JSON:
///   {"model": "savings"|"nonconvex"|"museum"|"file:<path>", "n": 6 or [6, 7],
///    "k_list": [100, 250, 500], "scheme": "rand" or ["det", "rand"], "seed": 7,
///    "runs": 100, "compute_exact": true, "out_path": "table.csv"}
/// Optional: "stall_budget" (saturation reference, default 5000).
struct ExperimentConfig {
  std::string model = "savings";
  std::vector<int> n_list{6};
  std::vector<int> k_list{100, 250, 500};
  std::vector<SchemeKind> schemes{SchemeKind::kRandomSphere};
  std::uint64_t seed = 0;
  int runs = 100;
  bool compute_exact = true;
  std::string out_path;
  int stall_budget = 5000;

  // Throws SchemaError naming the offending field.
  void validate() const;
};

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Game for a model name; "file:<path>" loads a game file and ignores n.
TUGame build_model_game(const std::string& model, int n);

enum class ReferenceKind { kNone, kNaive, kMarginalVectors, kSaturation };
std::string_view reference_name(ReferenceKind kind);

/// Exact vertex set for scoring: naive enumeration for n <= 6, marginal
/// vectors for supermodular games, saturation otherwise.
VertexSet reference_vertices(const TUGame& game, int stall_budget, std::uint64_t seed, ReferenceKind* used = nullptr);

struct BenchRow {
  std::string model;
  int n = 0;
  SchemeKind scheme = SchemeKind::kRandomSphere;
  int k = 0;
  int runs = 0;
  std::optional<double> epr_num_mean;
  std::optional<int> epr_den;
  std::optional<double> epr_std;  // of the numerator
  std::optional<double> vr_mean, vr_std;
  std::optional<double> rdc_mean, rdc_std;
  double step1_time_mean_s = 0.0;
  double hull_time_mean_s = 0.0;
  std::vector<std::string> flags;  // EMPTY-CORE, SATURATION, NO-REFERENCE, VR-UNDEFINED, RDC-UNDEFINED, RDC>1
};

struct BenchReport {
  std::vector<BenchRow> rows;  // sorted by (n, scheme, k)
  // Per run and k, every approximated point passed exact_core_membership.
  long long points_checked = 0;
  long long points_outside = 0;
};

/// Runs every (n, scheme, run) stream once, scoring it at each k. Run r uses
/// seed derive_seed(config.seed, r). Throws ContractViolation if an
/// approximated point lies outside the exact core.
BenchReport run_experiment(const ExperimentConfig& config);

enum class TableStyle { kCsv, kText };

inline constexpr std::string_view kCsvHeader =
    "model,n,scheme,k,runs,epr_num_mean,epr_den,epr_std,vr_mean,vr_std,rdc_mean,rdc_std,"
    "step1_time_mean_s,hull_time_mean_s,flags";

/// CSV or an aligned table in the column order |N|, G, k, EPR, VR, RDC, Time.
/// With include_timing false the time columns are left blank.
void emit_table(const std::vector<BenchRow>& rows, TableStyle style, std::ostream& out, bool include_timing = true);

struct AllocationVerdict {
  bool exact_in = false;
  std::optional<bool> approx_in;
  double max_violation = 0.0;
};

/// Exact membership and, when `approx` is given, membership in its hull.
/// Approximated-IN with exact-OUT throws ContractViolation.
AllocationVerdict check_allocation(const TUGame& game, const Allocation& x, const VertexSet* approx = nullptr);

}  // namespace tucore
