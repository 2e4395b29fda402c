#include "tucore/metrics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "json_util.hpp"
#include "tucore/errors.hpp"

namespace tucore {

EprResult epr(const VertexSet& approx, const VertexSet& exact) {
  if (exact.empty()) throw DomainError("EPR needs a nonempty exact vertex set");
  std::vector<char> hit(exact.size(), 0);
  for (const auto& p : approx.points) {
    const auto j = exact.find(p, kEprMatchTolerance);
    if (!j) throw ContractViolation("approximated point matches no exact vertex");
    hit[*j] = 1;
  }
  EprResult r;
  r.num = static_cast<int>(std::count(hit.begin(), hit.end(), 1));
  r.den = static_cast<int>(exact.size());
  r.ratio = static_cast<double>(r.num) / r.den;
  return r;
}

VrResult vr(const Polytope& approx_poly, const Polytope& exact_poly) {
  if (exact_poly.empty()) return {std::nullopt, "EXACT-EMPTY"};
  const auto den = volume(exact_poly);
  if (den.degenerate || den.value <= 0.0) return {std::nullopt, "EXACT-DEGENERATE"};
  if (approx_poly.empty()) return {0.0, "APPROX-EMPTY"};
  const auto num = volume(approx_poly);
  if (num.degenerate) return {0.0, "APPROX-DEGENERATE"};
  const double ratio = num.value / den.value;
  if (ratio > 1.0 + 1e-9) throw ContractViolation("approximated volume exceeds the exact volume");
  return {std::clamp(ratio, 0.0, 1.0), ""};
}

double total_distance(const VertexSet& set, const Allocation& y) {
  double d = 0.0;
  for (const auto& e : set.points) d += (e - y).norm();
  return d;
}

RdcResult rdc(const VertexSet& exact, const Allocation& approx_centroid) {
  if (exact.empty()) throw DomainError("RDC needs a nonempty exact vertex set");
  if (approx_centroid.size() != exact.dimension()) throw DomainError("centroid dimension mismatch");
  const Allocation cc = centroid(exact);
  const double base = total_distance(exact, cc);
  RdcResult r;
  if (base <= 1e-12) return r;  // single-point core
  double worst = base;
  for (const auto& e : exact.points) worst = std::max(worst, total_distance(exact, e));
  r.adc = (total_distance(exact, approx_centroid) - base) / base;
  r.wdc = (worst - base) / base;
  if (r.wdc > 1e-12) r.rdc = r.adc / r.wdc;
  return r;
}

MetricsReport compute_metrics(const VertexSet& approx, const VertexSet& exact, const Polytope& exact_poly,
                              double grand_value) {
  MetricsReport m;
  const auto e = epr(approx, exact);
  m.epr_num = e.num;
  m.epr_den = e.den;
  m.epr = e.ratio;

  const auto t0 = std::chrono::steady_clock::now();
  const Polytope approx_poly = convex_hull(project(approx, grand_value));
  m.hull_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto v = vr(approx_poly, exact_poly);
  m.vr = v.value;
  m.vr_note = v.note;

  if (!approx.empty()) {
    const auto r = rdc(exact, centroid(approx));
    if (r.rdc) {
      m.adc = r.adc;
      m.wdc = r.wdc;
      m.rdc = r.rdc;
    }
  }
  return m;
}

MetricsReport compute_metrics(const VertexSet& approx, const VertexSet& exact, double grand_value) {
  return compute_metrics(approx, exact, convex_hull(project(exact, grand_value)), grand_value);
}

namespace {

std::string opt(const std::optional<double>& x) { return x ? detail::fmt17(*x) : std::string("null"); }

}  // namespace

std::string metrics_to_json(const MetricsReport& m, bool include_timing) {
  std::ostringstream os;
  os << "{\n  \"epr_num\": " << m.epr_num << ",\n  \"epr_den\": " << m.epr_den << ",\n  \"epr\": "
     << detail::fmt17(m.epr) << ",\n  \"vr\": " << opt(m.vr) << ",\n  \"vr_note\": " << detail::json_string(m.vr_note)
     << ",\n  \"adc\": " << opt(m.adc) << ",\n  \"wdc\": " << opt(m.wdc) << ",\n  \"rdc\": " << opt(m.rdc);
  if (include_timing)
    os << ",\n  \"solve_time_s\": " << detail::fmt17(m.solve_time_s) << ",\n  \"hull_time_s\": "
       << detail::fmt17(m.hull_time_s);
  os << "\n}\n";
  return os.str();
}

}  // namespace tucore
