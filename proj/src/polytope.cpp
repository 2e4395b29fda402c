#include "tucore/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "json_util.hpp"
#include "tucore/errors.hpp"

namespace tucore {

std::vector<Point> project(std::span<const Allocation> points, double grand_value) {
  std::vector<Point> out;
  out.reserve(points.size());
  for (const auto& x : points) {
    if (x.size() < 1) throw DomainError("cannot project an empty vector");
    if (std::abs(x.sum() - grand_value) > 1e-6 * std::max(1.0, std::abs(grand_value)))
      throw ContractViolation("point violates efficiency by more than 1e-6");
    out.push_back(x.head(x.size() - 1));
  }
  return out;
}

std::vector<Point> project(const VertexSet& set, double grand_value) {
  return project(std::span<const Allocation>(set.points), grand_value);
}

Allocation unproject(const Point& y, double grand_value) {
  Allocation x(y.size() + 1);
  x.head(y.size()) = y;
  x[y.size()] = grand_value - y.sum();
  return x;
}

// ---------------------------------------------------------------------------
// Hull

namespace {

struct HullFacet {
  std::vector<int> v;    // d point indices
  std::vector<int> nbr;  // nbr[i] shares every vertex but v[i]
  Eigen::VectorXd normal;
  double offset = 0.0;
  bool alive = true;
  int mark = -1;
};

struct RidgeKeyLess {
  bool operator()(const std::vector<int>& a, const std::vector<int>& b) const { return a < b; }
};

double coordinate_scale(std::span<const Point> pts) {
  double s = 1.0;
  for (const auto& p : pts)
    if (p.size() > 0) s = std::max(s, p.cwiseAbs().maxCoeff());
  return s;
}

// Full-dimensional hull in R^d, d >= 2. `order` lists the insertion order and
// starts with d + 1 affinely independent points.
class HullBuilder {
 public:
  HullBuilder(std::span<const Point> pts, int d, double eps) : pts_(pts), d_(d), eps_(eps) {}

  void build(const std::vector<int>& simplex, const std::vector<int>& order) {
    inner_ = Eigen::VectorXd::Zero(d_);
    for (int i : simplex) inner_ += pts_[i];
    inner_ /= static_cast<double>(simplex.size());

    // Facet f omits simplex[f]; its neighbour opposite vertex simplex[g] is facet g.
    for (int f = 0; f <= d_; ++f) {
      HullFacet hf;
      for (int g = 0; g <= d_; ++g)
        if (g != f) {
          hf.v.push_back(simplex[g]);
          hf.nbr.push_back(g);
        }
      set_plane(hf);
      facets_.push_back(std::move(hf));
    }

    live_.resize(d_ + 1);
    std::iota(live_.begin(), live_.end(), 0);
    std::vector<char> in_simplex(pts_.size(), 0);
    for (int i : simplex) in_simplex[i] = 1;
    for (int idx : order)
      if (!in_simplex[idx]) insert(idx);
  }

  const std::vector<HullFacet>& facets() const { return facets_; }

 private:
  std::span<const Point> pts_;
  int d_;
  double eps_;
  Eigen::VectorXd inner_;
  std::vector<HullFacet> facets_;
  std::vector<int> live_;  // indices of alive facets
  int stamp_ = 0;

  double dist(const HullFacet& f, const Point& p) const { return f.normal.dot(p) - f.offset; }

  void set_plane(HullFacet& f) const {
    const Point& q0 = pts_[f.v[0]];
    Eigen::MatrixXd M(d_, d_ - 1);
    for (int i = 1; i < d_; ++i) M.col(i - 1) = pts_[f.v[i]] - q0;
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(M);
    Eigen::VectorXd nrm = qr.householderQ() * Eigen::VectorXd::Unit(d_, d_ - 1);
    double off = nrm.dot(q0);
    if (nrm.dot(inner_) > off) {
      nrm = -nrm;
      off = -off;
    }
    f.normal = std::move(nrm);
    f.offset = off;
  }

  void insert(int idx) {
    const Point& p = pts_[idx];
    int seed = -1;
    for (int f : live_)
      if (dist(facets_[f], p) > eps_) {
        seed = f;
        break;
      }
    if (seed < 0) return;  // inside or on the boundary

    // Visible region: strictly visible facets only. A neighbour whose
    // hyperplane contains p stays; the new simplex on that ridge lies flush
    // with it, on the far side of the ridge.
    ++stamp_;
    std::vector<int> region{seed};
    std::vector<std::pair<int, int>> horizon;
    facets_[seed].mark = stamp_;
    for (std::size_t k = 0; k < region.size(); ++k) {
      const int f = region[k];
      for (int i = 0; i < d_; ++i) {
        const int g = facets_[f].nbr[i];
        if (facets_[g].mark == stamp_) continue;
        if (dist(facets_[g], p) > eps_) {
          facets_[g].mark = stamp_;
          region.push_back(g);
        } else {
          horizon.emplace_back(f, i);
        }
      }
    }

    const int first_new = static_cast<int>(facets_.size());
    std::map<std::vector<int>, std::pair<int, int>, RidgeKeyLess> open_ridges;
    for (const auto& [f, i] : horizon) {
      HullFacet h;
      for (int j = 0; j < d_; ++j)
        if (j != i) h.v.push_back(facets_[f].v[j]);
      h.v.push_back(idx);
      h.nbr.assign(d_, -1);
      const int g = facets_[f].nbr[i];
      h.nbr[d_ - 1] = g;
      set_plane(h);
      const int hid = static_cast<int>(facets_.size());
      auto& gn = facets_[g].nbr;
      *std::find(gn.begin(), gn.end(), f) = hid;

      for (int j = 0; j + 1 < d_; ++j) {
        std::vector<int> key;
        for (int t = 0; t + 1 < d_; ++t)
          if (t != j) key.push_back(h.v[t]);
        std::sort(key.begin(), key.end());
        auto it = open_ridges.find(key);
        if (it == open_ridges.end()) {
          open_ridges.emplace(std::move(key), std::make_pair(hid, j));
        } else {
          const auto [other, slot] = it->second;
          h.nbr[j] = other;
          facets_[other].nbr[slot] = hid;
          open_ridges.erase(it);
        }
      }
      facets_.push_back(std::move(h));
    }
    if (!open_ridges.empty()) throw Error("convex hull: horizon is not a closed ridge cycle");
    for (int f : region) facets_[f].alive = false;
    std::erase_if(live_, [&](int f) { return !facets_[f].alive; });
    for (int f = first_new; f < static_cast<int>(facets_.size()); ++f) live_.push_back(f);
  }
};

// Merge adjacent coplanar boundary simplices into geometric facets.
std::vector<Facet> merge_facets(const std::vector<HullFacet>& all, double scale) {
  std::vector<int> parent(all.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (std::size_t f = 0; f < all.size(); ++f) {
    if (!all[f].alive) continue;
    for (int g : all[f].nbr) {
      if ((all[f].normal - all[g].normal).cwiseAbs().maxCoeff() <= 1e-9 &&
          std::abs(all[f].offset - all[g].offset) <= 1e-9 * scale)
        parent[root(static_cast<int>(f))] = root(g);
    }
  }
  std::vector<Facet> out;
  std::vector<int> slot(all.size(), -1);
  for (std::size_t f = 0; f < all.size(); ++f) {
    if (!all[f].alive) continue;
    const int r = root(static_cast<int>(f));
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(out.size());
      out.push_back({all[r].normal, all[r].offset});
    }
  }
  return out;
}

// Full-dimensional hull of `pts` in R^d given a starting simplex.
Polytope full_hull(std::span<const Point> pts, int d, const std::vector<int>& simplex,
                   const std::vector<int>& order, double eps, double scale) {
  Polytope poly;
  poly.dim = d;
  poly.affine_dim = d;

  std::vector<int> hull_ids;
  std::vector<std::vector<int>> pieces;
  std::vector<Facet> facets;
  if (d == 1) {
    int lo = order.front(), hi = order.front();
    for (int i : order) {
      if (pts[i][0] < pts[lo][0]) lo = i;
      if (pts[i][0] > pts[hi][0]) hi = i;
    }
    hull_ids = {std::min(lo, hi), std::max(lo, hi)};
    pieces = {{lo}, {hi}};
    facets = {{Eigen::VectorXd::Constant(1, 1.0), pts[hi][0]}, {Eigen::VectorXd::Constant(1, -1.0), -pts[lo][0]}};
  } else {
    HullBuilder builder(pts, d, eps);
    builder.build(simplex, order);
    const auto& all = builder.facets();
    for (const auto& f : all)
      if (f.alive) {
        pieces.push_back(f.v);
        hull_ids.insert(hull_ids.end(), f.v.begin(), f.v.end());
      }
    std::sort(hull_ids.begin(), hull_ids.end());
    hull_ids.erase(std::unique(hull_ids.begin(), hull_ids.end()), hull_ids.end());
    facets = merge_facets(all, scale);
  }

  std::vector<int> remap(pts.size(), -1);
  for (std::size_t k = 0; k < hull_ids.size(); ++k) {
    remap[hull_ids[k]] = static_cast<int>(k);
    poly.vertices.push_back(pts[hull_ids[k]]);
  }
  for (auto& piece : pieces)
    for (int& i : piece) i = remap[i];
  poly.boundary = std::move(pieces);
  poly.facets = std::move(facets);
  poly.apex = Eigen::VectorXd::Zero(d);
  for (const auto& v : poly.vertices) poly.apex += v;
  poly.apex /= static_cast<double>(poly.vertices.size());
  return poly;
}

}  // namespace

Polytope convex_hull(std::span<const Point> points) {
  Polytope poly;
  if (points.empty()) return poly;  // H(empty) = empty
  const int d = static_cast<int>(points.front().size());
  for (const auto& p : points) {
    if (p.size() != d) throw DomainError("convex_hull: points differ in dimension");
    if (!p.allFinite()) throw DomainError("convex_hull: non-finite coordinate");
  }
  poly.dim = d;
  const double scale = coordinate_scale(points);
  const double eps = 1e-10 * scale;

  Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
  for (const auto& p : points) mean += p;
  mean /= static_cast<double>(points.size());
  std::vector<int> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> dist(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) dist[i] = (points[i] - mean).norm();
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return dist[a] > dist[b]; });

  // Greedy affinely independent subset; its size fixes the affine dimension.
  std::vector<int> simplex{order.front()};
  std::vector<Eigen::VectorXd> basis;
  const Point& p0 = points[order.front()];
  while (static_cast<int>(basis.size()) < d) {
    int best = -1;
    double best_norm = 0.0;
    Eigen::VectorXd best_r;
    for (int idx : order) {
      Eigen::VectorXd r = points[idx] - p0;
      for (const auto& u : basis) r -= u.dot(r) * u;
      const double nr = r.norm();
      if (nr > best_norm) {
        best_norm = nr;
        best = idx;
        best_r = std::move(r);
      }
    }
    if (best < 0 || best_norm <= eps) break;
    simplex.push_back(best);
    basis.push_back(best_r / best_norm);
  }
  const int affine_dim = static_cast<int>(basis.size());

  if (affine_dim == d) {
    if (d == 0) {
      poly.vertices = {p0};
      poly.affine_dim = 0;
      poly.apex = p0;
      return poly;
    }
    return full_hull(points, d, simplex, order, eps, scale);
  }

  // Lower-dimensional: hull inside the affine span to find the true vertices.
  poly.degenerate = true;
  poly.affine_dim = affine_dim;
  if (affine_dim == 0) {
    poly.vertices = {p0};
    poly.apex = p0;
    return poly;
  }
  std::vector<Point> local;
  local.reserve(points.size());
  for (const auto& p : points) {
    Eigen::VectorXd c(affine_dim);
    for (int k = 0; k < affine_dim; ++k) c[k] = basis[k].dot(p - p0);
    local.push_back(std::move(c));
  }
  const Polytope sub = convex_hull(local);
  for (const auto& lv : sub.vertices) {
    Point back = p0;
    for (int k = 0; k < affine_dim; ++k) back += lv[k] * basis[k];
    // Snap to the matching input point so coordinates stay exact.
    int match = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points.size(); ++i) {
      const double e = (points[i] - back).cwiseAbs().maxCoeff();
      if (e < best) {
        best = e;
        match = static_cast<int>(i);
      }
    }
    poly.vertices.push_back(points[match]);
  }
  poly.apex = Eigen::VectorXd::Zero(d);
  for (const auto& v : poly.vertices) poly.apex += v;
  poly.apex /= static_cast<double>(poly.vertices.size());
  return poly;
}

std::vector<double> simplex_volumes(const Polytope& poly) {
  std::vector<double> out;
  if (poly.degenerate || poly.empty() || poly.dim == 0) return out;
  const int d = poly.dim;
  double fact = 1.0;
  for (int i = 2; i <= d; ++i) fact *= i;
  Eigen::MatrixXd M(d, d);
  out.reserve(poly.boundary.size());
  for (const auto& piece : poly.boundary) {
    for (int i = 0; i < d; ++i) M.col(i) = poly.vertices[piece[i]] - poly.apex;
    out.push_back(std::abs(M.determinant()) / fact);
  }
  return out;
}

VolumeResult volume(const Polytope& poly) {
  if (poly.empty() || poly.degenerate) return {0.0, true};
  if (poly.dim == 0) return {1.0, false};
  const auto parts = simplex_volumes(poly);
  return {std::accumulate(parts.begin(), parts.end(), 0.0), false};
}

Allocation centroid(std::span<const Allocation> points) {
  if (points.empty()) throw DomainError("centroid of an empty set is undefined");
  Allocation c = Allocation::Zero(points.front().size());
  for (const auto& p : points) c += p;
  return c / static_cast<double>(points.size());
}

Allocation centroid(const VertexSet& set) { return centroid(std::span<const Allocation>(set.points)); }

// ---------------------------------------------------------------------------
// Membership: phase-1 simplex on {lambda >= 0, sum lambda = 1, P lambda = x}.

bool contains(std::span<const Point> points, const Eigen::VectorXd& x) {
  if (points.empty()) return false;
  const int dim = static_cast<int>(x.size());
  const int m = static_cast<int>(points.size());
  const int rows = dim + 1;
  const int cols = m + rows;  // lambdas then artificials
  for (const auto& p : points)
    if (p.size() != dim) throw DomainError("contains: dimension mismatch");

  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(rows + 1, cols + 1);
  for (int j = 0; j < m; ++j) {
    T.block(0, j, dim, 1) = points[j];
    T(dim, j) = 1.0;
  }
  T.block(0, cols, dim, 1) = x;
  T(dim, cols) = 1.0;
  for (int i = 0; i < rows; ++i) {
    if (T(i, cols) < 0) T.row(i) *= -1.0;
    T(i, m + i) = 1.0;
  }
  // Reduced costs of min sum(artificials).
  for (int i = 0; i < rows; ++i) T.row(rows) -= T.row(i);
  for (int i = 0; i < rows; ++i) T(rows, m + i) = 0.0;

  std::vector<int> basis(rows);
  std::iota(basis.begin(), basis.end(), m);
  const long max_iter = 50L * (cols + rows) + 1000;
  for (long iter = 0; iter < max_iter; ++iter) {
    int enter = -1;  // Bland: lowest index with negative reduced cost
    for (int j = 0; j < cols; ++j)
      if (T(rows, j) < -1e-12) {
        enter = j;
        break;
      }
    if (enter < 0) break;
    int leave = -1;
    double best = 0.0;
    for (int i = 0; i < rows; ++i) {
      if (T(i, enter) <= 1e-12) continue;
      const double r = T(i, cols) / T(i, enter);
      if (leave < 0 || r < best - 1e-15 || (r <= best + 1e-15 && basis[i] < basis[leave])) {
        leave = i;
        best = r;
      }
    }
    if (leave < 0) break;  // cannot happen: phase 1 is bounded
    T.row(leave) /= T(leave, enter);
    for (int i = 0; i <= rows; ++i)
      if (i != leave && T(i, enter) != 0.0) T.row(i) -= T(i, enter) * T.row(leave);
    basis[leave] = enter;
  }

  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(m);
  for (int i = 0; i < rows; ++i)
    if (basis[i] < m) lambda[basis[i]] = std::max(0.0, T(i, cols));
  Eigen::VectorXd combo = Eigen::VectorXd::Zero(dim);
  for (int j = 0; j < m; ++j) combo += lambda[j] * points[j];
  const double err = std::max((combo - x).cwiseAbs().maxCoeff(), std::abs(lambda.sum() - 1.0));
  return err <= 1e-8 * std::max(1.0, x.cwiseAbs().maxCoeff());
}

bool contains(const VertexSet& set, const Allocation& x) {
  return contains(std::span<const Point>(set.points), x);
}

std::string polytope_to_json(const Polytope& poly) {
  const auto vol = volume(poly);
  std::ostringstream os;
  os << "{\n  \"chart\": " << detail::json_string(poly.chart) << ",\n"
     << "  \"dim\": " << poly.dim << ",\n"
     << "  \"affine_dim\": " << poly.affine_dim << ",\n"
     << "  \"degenerate\": " << (poly.degenerate ? "true" : "false") << ",\n"
     << "  \"volume\": " << (vol.degenerate ? std::string("null") : detail::fmt17(vol.value)) << ",\n"
     << "  \"vertices\": [";
  for (std::size_t i = 0; i < poly.vertices.size(); ++i)
    os << (i ? ", " : "") << detail::json_array(poly.vertices[i]);
  os << "],\n  \"facets\": [";
  for (std::size_t i = 0; i < poly.facets.size(); ++i)
    os << (i ? ", " : "") << "{\"normal\": " << detail::json_array(poly.facets[i].normal)
       << ", \"offset\": " << detail::fmt17(poly.facets[i].offset) << "}";
  os << "]\n}\n";
  return os.str();
}

}  // namespace tucore
