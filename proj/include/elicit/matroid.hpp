#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace elicit {

/// Ground-set elements are indexed 0..n-1 internally. Files, the CLI and the
/// HTTP interface present them 1-based.
using Element = std::size_t;

/// Maximal independent set, stored as sorted element indices.
using Base = std::vector<Element>;

/// Nonnegative additive element weights.
using WeightVector = std::vector<double>;

enum class MatroidKind { Uniform, Graphic, Scheduling, Partition };
enum class Sense { Min, Max };

std::string_view to_string(MatroidKind kind);
std::string_view to_string(Sense sense);
MatroidKind parse_matroid_kind(std::string_view text);
Sense parse_sense(std::string_view text);

struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;
};

/// Immutable matroid description. Construction validates the kind-specific
/// structure and caches the rank.
class MatroidInstance {
 public:
  static MatroidInstance uniform(std::size_t n, std::size_t k);
  /// Element i is edges[i]. Parallel edges are allowed; self-loops and
  /// disconnected graphs are rejected.
  static MatroidInstance graphic(std::size_t vertex_count, std::vector<Edge> edges);
  /// Unit-time jobs released at time 0; deadlines must be >= 1.
  static MatroidInstance scheduling(std::vector<int> deadlines);
  /// Disjoint blocks covering 0..n-1, capacity one per block.
  static MatroidInstance partition(std::size_t n, std::vector<std::vector<Element>> blocks);

  MatroidKind kind() const { return kind_; }
  std::size_t size() const { return n_; }
  std::size_t rank() const { return rank_; }

  std::size_t uniform_k() const { return uniform_k_; }
  std::size_t vertex_count() const { return vertex_count_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& deadlines() const { return deadlines_; }
  const std::vector<std::vector<Element>>& blocks() const { return blocks_; }
  /// Block index of each element (Partition only).
  const std::vector<std::size_t>& block_of() const { return block_of_; }

  /// Throws InputError on out-of-range or repeated indices.
  bool is_independent(std::span<const Element> subset) const;
  bool is_base(std::span<const Element> subset) const;

 private:
  MatroidInstance() = default;
  void compute_rank();

  MatroidKind kind_ = MatroidKind::Uniform;
  std::size_t n_ = 0;
  std::size_t rank_ = 0;
  std::size_t uniform_k_ = 0;
  std::size_t vertex_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<int> deadlines_;
  std::vector<std::vector<Element>> blocks_;
  std::vector<std::size_t> block_of_;

  friend class IndependenceTracker;
};

/// Incremental independence test for a growing set. Used by the greedy
/// algorithm and base enumeration; one tracker per candidate set.
class IndependenceTracker {
 public:
  explicit IndependenceTracker(const MatroidInstance& matroid);

  bool can_add(Element e) const;
  void add(Element e);
  std::size_t size() const { return size_; }

 private:
  std::size_t find(std::size_t x) const;

  const MatroidInstance* matroid_;
  std::size_t size_ = 0;
  mutable std::vector<std::size_t> parent_;   // Graphic: union-find over vertices
  std::vector<std::size_t> deadline_count_;   // Scheduling: jobs per (clamped) deadline
  std::vector<bool> block_used_;              // Partition
};

struct GreedyResult {
  Base base;
  double value = 0.0;
};

/// Matroid greedy: sort by weight (descending for Max, ascending for Min,
/// ties by ascending index) and keep every element that preserves
/// independence.
GreedyResult greedy_opt_base(const MatroidInstance& matroid, std::span<const double> weights,
                             Sense sense);

double base_weight(std::span<const double> weights, std::span<const Element> base);

inline constexpr std::size_t kDefaultEnumerationCap = 20;

/// All bases in lexicographic order. Refuses (SizeError) when n > cap.
std::vector<Base> enumerate_bases(const MatroidInstance& matroid,
                                  std::size_t cap = kDefaultEnumerationCap);

}  // namespace elicit
