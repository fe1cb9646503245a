#include "elicit/polytope.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "elicit/errors.hpp"

namespace elicit {

namespace {

double max_norm_distance(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) d = std::max(d, std::abs(a[j] - b[j]));
  return d;
}

void link(AdjacencyLists& adjacency, std::size_t a, std::size_t b) {
  adjacency[a].push_back(b);
  adjacency[b].push_back(a);
}

void normalize_lists(AdjacencyLists& adjacency) {
  for (auto& list : adjacency) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
}

}  // namespace

std::size_t normal_rank(std::span<const Halfspace> halfspaces, const TightSet& subset,
                        std::size_t dim) {
  const auto rows = subset.indices();
  if (rows.empty()) return 0;
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(dim));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& normal = halfspaces[rows[r]].normal;
    double norm = 0.0;
    for (double a : normal) norm += a * a;
    norm = std::sqrt(norm);
    for (std::size_t j = 0; j < dim; ++j) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = norm > 0.0 ? normal[j] / norm : 0.0;
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  lu.setThreshold(kEpsilon);
  return static_cast<std::size_t>(lu.rank());
}

bool tight_sets_adjacent(std::span<const Halfspace> halfspaces, const TightSet& a,
                         const TightSet& b, std::size_t dim) {
  if (dim == 0) return false;
  if (a.intersection_count(b) + 1 < dim) return false;
  return normal_rank(halfspaces, a & b, dim) + 1 >= dim;
}

UncertaintyPolytope UncertaintyPolytope::initial_simplex(std::size_t p) {
  if (p < 2) throw InputError("simplex needs p >= 2");
  UncertaintyPolytope poly;
  const std::size_t dim = p - 1;
  poly.dim_ = dim;
  for (std::size_t j = 0; j < dim; ++j) {
    Halfspace h;
    h.normal.assign(dim, 0.0);
    h.normal[j] = 1.0;
    poly.halfspaces_.push_back(std::move(h));
  }
  poly.halfspaces_.push_back(Halfspace{std::vector<double>(dim, -1.0), 1.0});

  // Origin is tight on every sigma_j >= 0; e^j on all facets but its own.
  Vertex origin{SigmaPoint{std::vector<double>(dim, 0.0)}, TightSet(p)};
  for (std::size_t j = 0; j < dim; ++j) origin.tight.set(j);
  poly.vertices_.push_back(std::move(origin));
  for (std::size_t j = 0; j < dim; ++j) {
    Vertex unit{SigmaPoint{std::vector<double>(dim, 0.0)}, TightSet(p)};
    unit.point.coords[j] = 1.0;
    for (std::size_t i = 0; i < dim; ++i) {
      if (i != j) unit.tight.set(i);
    }
    unit.tight.set(dim);
    poly.vertices_.push_back(std::move(unit));
  }
  poly.adjacency_.assign(p, {});
  for (std::size_t a = 0; a < p; ++a) {
    for (std::size_t b = 0; b < p; ++b) {
      if (a != b) poly.adjacency_[a].push_back(b);
    }
  }
  return poly;
}

bool UncertaintyPolytope::adjacent(std::size_t a, std::size_t b) const {
  const auto& list = adjacency_.at(a);
  return std::binary_search(list.begin(), list.end(), b);
}

std::size_t UncertaintyPolytope::edge_count() const {
  std::size_t twice = 0;
  for (const auto& list : adjacency_) twice += list.size();
  return twice / 2;
}

bool UncertaintyPolytope::contains(std::span<const double> point, double eps) const {
  if (point.size() != dim_) throw InputError("point dimension mismatch");
  return std::all_of(halfspaces_.begin(), halfspaces_.end(),
                     [&](const Halfspace& h) { return h.evaluate(point) >= -eps; });
}

std::string UncertaintyPolytope::dump() const {
  std::ostringstream out;
  out << std::setprecision(10);
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    out << "v " << i << " :";
    for (double x : vertices_[i].point.coords) out << ' ' << x;
    out << " |";
    for (auto t : vertices_[i].tight.indices()) out << ' ' << t;
    out << '\n';
  }
  for (std::size_t a = 0; a < adjacency_.size(); ++a) {
    for (auto b : adjacency_[a]) {
      if (a < b) out << "e " << a << ' ' << b << '\n';
    }
  }
  return out.str();
}

VertexClassification classify_vertices(const UncertaintyPolytope& polytope, const Halfspace& h,
                                       double eps) {
  if (h.normal.size() != polytope.dimension()) throw InputError("halfspace dimension mismatch");
  VertexClassification c;
  const auto& vertices = polytope.vertices();
  c.values.reserve(vertices.size());
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const double g = h.evaluate(vertices[i].point.coords);
    c.values.push_back(g);
    if (g > eps) {
      c.feasible.push_back(i);
    } else if (g < -eps) {
      c.infeasible.push_back(i);
    } else {
      c.on_boundary.push_back(i);
    }
  }
  return c;
}

SigmaPoint edge_intersection(const SigmaPoint& u, const SigmaPoint& v, const Halfspace& h,
                             double eps) {
  const double gu = h.evaluate(u.coords);
  const double gv = h.evaluate(v.coords);
  if (!(gu > eps) || !(gv < -eps)) {
    throw PreconditionError("edge_intersection needs h(u) > eps and h(v) < -eps");
  }
  const double theta = gv / (gv - gu);
  SigmaPoint out;
  out.coords.resize(u.coords.size());
  for (std::size_t j = 0; j < u.coords.size(); ++j) {
    out.coords[j] = theta * u.coords[j] + (1.0 - theta) * v.coords[j];
  }
  return out;
}

CutResult cut(const UncertaintyPolytope& polytope, const Halfspace& h) {
  const auto sides = classify_vertices(polytope, h);
  const std::size_t h_index = polytope.halfspaces_.size();

  if (sides.infeasible.empty()) {
    CutResult same{polytope, CutOutcome::Uninformative};
    auto& poly = same.polytope;
    poly.halfspaces_.push_back(h);
    for (auto& v : poly.vertices_) v.tight.resize(h_index + 1);
    for (auto i : sides.on_boundary) poly.vertices_[i].tight.set(h_index);
    return same;
  }
  if (sides.feasible.empty()) {
    if (sides.on_boundary.empty()) {
      throw ContradictionError("preference cut removes every vertex of the region");
    }
    throw PreconditionError("preference cut would flatten the region onto its hyperplane");
  }

  const auto& old_vertices = polytope.vertices_;
  const auto& old_adjacency = polytope.adjacency_;
  constexpr std::size_t kDropped = static_cast<std::size_t>(-1);

  CutResult result;
  auto& poly = result.polytope;
  poly.dim_ = polytope.dim_;
  poly.halfspaces_ = polytope.halfspaces_;
  poly.halfspaces_.push_back(h);

  // Survivors keep their relative order, then new vertices follow.
  std::vector<std::size_t> remap(old_vertices.size(), kDropped);
  std::vector<bool> strictly_feasible(old_vertices.size(), false);
  for (auto i : sides.feasible) strictly_feasible[i] = true;
  for (std::size_t i = 0; i < old_vertices.size(); ++i) {
    if (sides.values[i] >= -kEpsilon) {
      remap[i] = poly.vertices_.size();
      Vertex v = old_vertices[i];
      v.tight.resize(h_index + 1);
      poly.vertices_.push_back(std::move(v));
    }
  }
  poly.adjacency_.assign(poly.vertices_.size(), {});

  std::vector<std::size_t> on_facet;
  for (auto i : sides.on_boundary) {
    poly.vertices_[remap[i]].tight.set(h_index);
    on_facet.push_back(remap[i]);
  }

  // Edges between survivors remain edges.
  for (std::size_t a = 0; a < old_vertices.size(); ++a) {
    if (remap[a] == kDropped) continue;
    for (auto b : old_adjacency[a]) {
      if (b > a && remap[b] != kDropped) link(poly.adjacency_, remap[a], remap[b]);
    }
  }

  // Each edge from a strictly feasible vertex to an infeasible one is cut
  // at a new vertex adjacent to the feasible end.
  const std::size_t first_new = poly.vertices_.size();
  for (auto u : sides.feasible) {
    for (auto v : old_adjacency[u]) {
      if (remap[v] != kDropped) continue;
      Vertex fresh{edge_intersection(old_vertices[u].point, old_vertices[v].point, h),
                   old_vertices[u].tight & old_vertices[v].tight};
      fresh.tight.resize(h_index + 1);
      fresh.tight.set(h_index);

      std::size_t target = kDropped;
      for (auto f : on_facet) {
        if (max_norm_distance(poly.vertices_[f].point.coords, fresh.point.coords) <= kMergeRadius) {
          target = f;
          break;
        }
      }
      if (target == kDropped) {
        target = poly.vertices_.size();
        poly.vertices_.push_back(std::move(fresh));
        poly.adjacency_.emplace_back();
        on_facet.push_back(target);
      } else {
        poly.vertices_[target].tight |= fresh.tight;
      }
      link(poly.adjacency_, remap[u], target);
    }
  }
  normalize_lists(poly.adjacency_);

  // Vertices on the new facet: decide adjacency from their tight sets.
  for (std::size_t x = 0; x < on_facet.size(); ++x) {
    for (std::size_t y = x + 1; y < on_facet.size(); ++y) {
      const auto a = on_facet[x];
      const auto b = on_facet[y];
      if (a < first_new && b < first_new && poly.adjacent(a, b)) continue;
      if (tight_sets_adjacent(poly.halfspaces_, poly.vertices_[a].tight, poly.vertices_[b].tight,
                              poly.dim_)) {
        link(poly.adjacency_, a, b);
      }
    }
  }
  normalize_lists(poly.adjacency_);
  return result;
}

VertexEnumeration brute_force_vertex_enum(std::span<const Halfspace> halfspaces, std::size_t dim,
                                          bool reverse) {
  if (dim == 0 || dim > kBruteForceMaxDim) throw SizeError("brute-force enumeration needs 1 <= dim <= 6");
  if (halfspaces.size() > kBruteForceMaxHalfspaces) {
    throw SizeError("brute-force enumeration limited to 30 halfspaces");
  }
  for (const auto& h : halfspaces) {
    if (h.normal.size() != dim) throw InputError("halfspace dimension mismatch");
  }
  const std::size_t m = halfspaces.size();
  auto at = [&](std::size_t i) -> const Halfspace& {
    return halfspaces[reverse ? m - 1 - i : i];
  };

  VertexEnumeration out;
  if (m < dim) return out;

  std::vector<std::size_t> pick(dim);
  for (std::size_t i = 0; i < dim; ++i) pick[i] = i;
  const auto d = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXd a(d, d);
  Eigen::VectorXd rhs(d);
  while (true) {
    for (std::size_t r = 0; r < dim; ++r) {
      const auto& h = at(pick[r]);
      for (std::size_t j = 0; j < dim; ++j) a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = h.normal[j];
      rhs(static_cast<Eigen::Index>(r)) = -h.offset;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    lu.setThreshold(kEpsilon);
    if (lu.rank() == d) {
      const Eigen::VectorXd x = lu.solve(rhs);
      std::vector<double> point(x.data(), x.data() + dim);
      const bool feasible = std::all_of(halfspaces.begin(), halfspaces.end(), [&](const Halfspace& h) {
        return h.evaluate(point) >= -kEpsilon;
      });
      const bool duplicate = std::any_of(out.vertices.begin(), out.vertices.end(), [&](const Vertex& v) {
        return max_norm_distance(v.point.coords, point) <= kMergeRadius;
      });
      if (feasible && !duplicate) {
        Vertex v{SigmaPoint{std::move(point)}, TightSet(m)};
        for (std::size_t i = 0; i < m; ++i) {
          if (std::abs(halfspaces[i].evaluate(v.point.coords)) <= kEpsilon) v.tight.set(i);
        }
        out.vertices.push_back(std::move(v));
      }
    }
    // Next dim-combination of 0..m-1 in lexicographic order.
    std::size_t i = dim;
    while (i > 0 && pick[i - 1] == m - dim + (i - 1)) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < dim; ++j) pick[j] = pick[j - 1] + 1;
  }

  out.adjacency.assign(out.vertices.size(), {});
  for (std::size_t x = 0; x < out.vertices.size(); ++x) {
    for (std::size_t y = x + 1; y < out.vertices.size(); ++y) {
      if (tight_sets_adjacent(halfspaces, out.vertices[x].tight, out.vertices[y].tight, dim)) {
        link(out.adjacency, x, y);
      }
    }
  }
  normalize_lists(out.adjacency);
  return out;
}

}  // namespace elicit

namespace elicit {

bool same_geometry(const UncertaintyPolytope& polytope, const VertexEnumeration& reference,
                   double tolerance, std::string* difference) {
  auto fail = [&](const std::string& why) {
    if (difference) *difference = why;
    return false;
  };
  const auto& ours = polytope.vertices();
  if (ours.size() != reference.vertices.size()) {
    return fail("vertex count " + std::to_string(ours.size()) + " vs reference " +
                std::to_string(reference.vertices.size()));
  }
  constexpr std::size_t kUnmatched = static_cast<std::size_t>(-1);
  std::vector<std::size_t> match(ours.size(), kUnmatched);
  std::vector<bool> used(ours.size(), false);
  for (std::size_t i = 0; i < ours.size(); ++i) {
    for (std::size_t j = 0; j < reference.vertices.size(); ++j) {
      if (!used[j] && max_norm_distance(ours[i].point.coords, reference.vertices[j].point.coords) <= tolerance) {
        match[i] = j;
        used[j] = true;
        break;
      }
    }
    if (match[i] == kUnmatched) return fail("vertex " + std::to_string(i) + " has no reference match");
  }
  for (std::size_t a = 0; a < ours.size(); ++a) {
    for (std::size_t b = a + 1; b < ours.size(); ++b) {
      const auto& ref_list = reference.adjacency[match[a]];
      const bool ref_adjacent = std::binary_search(ref_list.begin(), ref_list.end(), match[b]);
      if (polytope.adjacent(a, b) != ref_adjacent) {
        return fail("adjacency of vertices " + std::to_string(a) + " and " + std::to_string(b) +
                    (ref_adjacent ? " missing" : " spurious"));
      }
    }
  }
  return true;
}

}  // namespace elicit
