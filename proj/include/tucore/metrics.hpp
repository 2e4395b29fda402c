#pragma once

#include <optional>
#include <string>

#include "tucore/approx.hpp"
#include "tucore/polytope.hpp"

namespace tucore {

inline constexpr double kEprMatchTolerance = 1e-6;  // L-infinity

struct EprResult {
  int num = 0;
  int den = 0;
  double ratio = 0.0;
};

/// Share of `exact` vertices matched by some approximated vertex. Throws
/// ContractViolation when an approximated point matches no exact vertex and
/// DomainError when `exact` is empty.
EprResult epr(const VertexSet& approx, const VertexSet& exact);

struct VrResult {
  std::optional<double> value;  // empty when undefined
  std::string note;             // EXACT-EMPTY, EXACT-DEGENERATE, APPROX-EMPTY, APPROX-DEGENERATE
};

/// Chart-volume ratio clamped to [0, 1]; a ratio above 1 + 1e-9 throws
/// ContractViolation. Undefined for an empty or degenerate exact polytope.
VrResult vr(const Polytope& approx_poly, const Polytope& exact_poly);

struct RdcResult {
  double adc = 0.0;
  double wdc = 0.0;
  std::optional<double> rdc;  // empty when wdc <= 1e-12
};

// Sum of Euclidean distances from y to every vertex.
double total_distance(const VertexSet& set, const Allocation& y);

/// adc = (D(approx) - D(cc)) / D(cc), wdc = (max_e D(e) - D(cc)) / D(cc),
/// rdc = adc / wdc, with D the total distance to the exact vertices and cc
/// their centroid. adc keeps its sign.
RdcResult rdc(const VertexSet& exact, const Allocation& approx_centroid);

struct MetricsReport {
  int epr_num = 0;
  int epr_den = 0;
  double epr = 0.0;
  std::optional<double> vr;
  std::string vr_note;
  std::optional<double> adc;
  std::optional<double> wdc;
  std::optional<double> rdc;
  double solve_time_s = 0.0;
  double hull_time_s = 0.0;  // approximated hull only
};

/// All three measures. `exact_poly` is the hull of `exact` in the same chart;
/// pass it in when scoring many approximations against one reference.
MetricsReport compute_metrics(const VertexSet& approx, const VertexSet& exact, const Polytope& exact_poly,
                              double grand_value);
MetricsReport compute_metrics(const VertexSet& approx, const VertexSet& exact, double grand_value);

std::string metrics_to_json(const MetricsReport& report, bool include_timing = true);

}  // namespace tucore
