#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "elicit/tight_set.hpp"
#include "elicit/uncertainty.hpp"

namespace elicit {

/// Vertices closer than this (max-norm) are the same point.
inline constexpr double kMergeRadius = 1e-7;

struct Vertex {
  SigmaPoint point;
  TightSet tight;  // halfspaces with |a.x + c| <= eps at this vertex
};

using AdjacencyLists = std::vector<std::vector<std::size_t>>;

struct CutResult;

/// Rank of the (row-normalised) normals of the halfspaces selected by `subset`.
std::size_t normal_rank(std::span<const Halfspace> halfspaces, const TightSet& subset,
                        std::size_t dim);

/// True when two vertices span an edge: their common tight normals have
/// rank dim - 1.
bool tight_sets_adjacent(std::span<const Halfspace> halfspaces, const TightSet& a,
                         const TightSet& b, std::size_t dim);

/// The sigma-space region as a vertex list with adjacency, plus the
/// halfspaces that cut it out of the simplex. Values are immutable; `cut`
/// yields a new polytope.
class UncertaintyPolytope {
 public:
  /// Standard simplex for p attribute columns (dimension p - 1).
  static UncertaintyPolytope initial_simplex(std::size_t p);

  std::size_t dimension() const { return dim_; }
  const std::vector<Halfspace>& halfspaces() const { return halfspaces_; }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  const AdjacencyLists& adjacency() const { return adjacency_; }

  bool adjacent(std::size_t a, std::size_t b) const;
  std::size_t edge_count() const;
  bool contains(std::span<const double> point, double eps = kEpsilon) const;

  /// Text dump: `v <index> : <coords> | <tight indices>` per vertex, then
  /// `e <a> <b>` per adjacent pair with a < b.
  std::string dump() const;

 private:
  std::size_t dim_ = 0;
  std::vector<Halfspace> halfspaces_;
  std::vector<Vertex> vertices_;
  AdjacencyLists adjacency_;

  friend CutResult cut(const UncertaintyPolytope& polytope, const Halfspace& h);
};

struct VertexClassification {
  std::vector<std::size_t> feasible;     // a.x + c > eps
  std::vector<std::size_t> infeasible;   // a.x + c < -eps
  std::vector<std::size_t> on_boundary;  // otherwise
  std::vector<double> values;            // a.x + c per vertex
};

VertexClassification classify_vertices(const UncertaintyPolytope& polytope, const Halfspace& h,
                                       double eps = kEpsilon);

/// Point where segment [u, v] crosses the hyperplane of h. Requires
/// h(u) > eps and h(v) < -eps.
SigmaPoint edge_intersection(const SigmaPoint& u, const SigmaPoint& v, const Halfspace& h,
                             double eps = kEpsilon);

enum class CutOutcome {
  Refined,       // at least one vertex was removed
  Uninformative  // every vertex already satisfied h; only the halfspace list grew
};

struct CutResult {
  UncertaintyPolytope polytope;
  CutOutcome outcome = CutOutcome::Refined;
};

/// Intersects the polytope with h, updating vertices and adjacency
/// incrementally. Throws ContradictionError when every vertex is strictly
/// infeasible, PreconditionError when h would flatten the region onto its
/// boundary hyperplane.
CutResult cut(const UncertaintyPolytope& polytope, const Halfspace& h);

struct VertexEnumeration {
  std::vector<Vertex> vertices;
  AdjacencyLists adjacency;
};

inline constexpr std::size_t kBruteForceMaxDim = 6;
inline constexpr std::size_t kBruteForceMaxHalfspaces = 30;

/// Reference vertex enumeration: solve every dim-subset of halfspaces,
/// keep feasible points, then test every pair for adjacency. `reverse`
/// walks the subsets with the halfspace order reversed.
VertexEnumeration brute_force_vertex_enum(std::span<const Halfspace> halfspaces, std::size_t dim,
                                          bool reverse = false);

/// Compares vertex sets (matched within `tolerance`, any order) and the
/// adjacency relation under that matching. On mismatch returns false and
/// describes the first difference in `difference`.
bool same_geometry(const UncertaintyPolytope& polytope, const VertexEnumeration& reference,
                   double tolerance, std::string* difference = nullptr);

}  // namespace elicit
