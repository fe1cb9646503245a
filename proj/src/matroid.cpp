#include "elicit/matroid.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "elicit/errors.hpp"

namespace elicit {

std::string_view to_string(MatroidKind kind) {
  switch (kind) {
    case MatroidKind::Uniform: return "uniform";
    case MatroidKind::Graphic: return "graphic";
    case MatroidKind::Scheduling: return "scheduling";
    case MatroidKind::Partition: return "partition";
  }
  return "unknown";
}

std::string_view to_string(Sense sense) { return sense == Sense::Min ? "min" : "max"; }

MatroidKind parse_matroid_kind(std::string_view text) {
  if (text == "uniform") return MatroidKind::Uniform;
  if (text == "graphic") return MatroidKind::Graphic;
  if (text == "scheduling") return MatroidKind::Scheduling;
  if (text == "partition") return MatroidKind::Partition;
  throw InputError("unknown matroid kind '" + std::string(text) + "'");
}

Sense parse_sense(std::string_view text) {
  if (text == "min") return Sense::Min;
  if (text == "max") return Sense::Max;
  throw InputError("unknown objective sense '" + std::string(text) + "'");
}

MatroidInstance MatroidInstance::uniform(std::size_t n, std::size_t k) {
  if (n == 0) throw InconsistentInstance("uniform matroid needs n >= 1");
  if (k < 1 || k > n) throw InconsistentInstance("uniform matroid needs 1 <= k <= n");
  MatroidInstance m;
  m.kind_ = MatroidKind::Uniform;
  m.n_ = n;
  m.uniform_k_ = k;
  m.compute_rank();
  return m;
}

MatroidInstance MatroidInstance::graphic(std::size_t vertex_count, std::vector<Edge> edges) {
  if (edges.empty()) throw InconsistentInstance("graphic matroid needs at least one edge");
  if (vertex_count < 2) throw InconsistentInstance("graphic matroid needs at least two vertices");
  std::vector<std::size_t> parent(vertex_count);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t components = vertex_count;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto [u, v] = edges[i];
    if (u >= vertex_count || v >= vertex_count) {
      throw InconsistentInstance("edge " + std::to_string(i + 1) + " references a missing vertex");
    }
    if (u == v) throw InconsistentInstance("edge " + std::to_string(i + 1) + " is a self-loop");
    const auto ru = find(u);
    const auto rv = find(v);
    if (ru != rv) {
      parent[ru] = rv;
      --components;
    }
  }
  if (components != 1) throw InconsistentInstance("graph is not connected");

  MatroidInstance m;
  m.kind_ = MatroidKind::Graphic;
  m.n_ = edges.size();
  m.vertex_count_ = vertex_count;
  m.edges_ = std::move(edges);
  m.compute_rank();
  return m;
}

MatroidInstance MatroidInstance::scheduling(std::vector<int> deadlines) {
  if (deadlines.empty()) throw InconsistentInstance("scheduling matroid needs at least one job");
  for (std::size_t i = 0; i < deadlines.size(); ++i) {
    if (deadlines[i] < 1) {
      throw InconsistentInstance("job " + std::to_string(i + 1) + " has deadline < 1");
    }
  }
  MatroidInstance m;
  m.kind_ = MatroidKind::Scheduling;
  m.n_ = deadlines.size();
  m.deadlines_ = std::move(deadlines);
  m.compute_rank();
  return m;
}

MatroidInstance MatroidInstance::partition(std::size_t n,
                                           std::vector<std::vector<Element>> blocks) {
  if (n == 0) throw InconsistentInstance("partition matroid needs n >= 1");
  std::vector<std::size_t> block_of(n, n);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b].empty()) {
      throw InconsistentInstance("partition block " + std::to_string(b + 1) + " is empty");
    }
    for (Element e : blocks[b]) {
      if (e >= n) throw InconsistentInstance("partition element out of range");
      if (block_of[e] != n) {
        throw InconsistentInstance("element " + std::to_string(e + 1) + " appears in two blocks");
      }
      block_of[e] = b;
    }
    std::sort(blocks[b].begin(), blocks[b].end());
  }
  if (std::find(block_of.begin(), block_of.end(), n) != block_of.end()) {
    throw InconsistentInstance("partition blocks do not cover every element");
  }
  MatroidInstance m;
  m.kind_ = MatroidKind::Partition;
  m.n_ = n;
  m.blocks_ = std::move(blocks);
  m.block_of_ = std::move(block_of);
  m.compute_rank();
  return m;
}

void MatroidInstance::compute_rank() {
  const WeightVector unit(n_, 1.0);
  rank_ = greedy_opt_base(*this, unit, Sense::Max).base.size();
}

bool MatroidInstance::is_independent(std::span<const Element> subset) const {
  std::vector<bool> seen(n_, false);
  for (Element e : subset) {
    if (e >= n_) throw InputError("element index " + std::to_string(e + 1) + " out of range");
    if (seen[e]) throw InputError("element " + std::to_string(e + 1) + " repeated in subset");
    seen[e] = true;
  }
  IndependenceTracker tracker(*this);
  for (Element e : subset) {
    if (!tracker.can_add(e)) return false;
    tracker.add(e);
  }
  return true;
}

bool MatroidInstance::is_base(std::span<const Element> subset) const {
  return subset.size() == rank_ && is_independent(subset);
}

IndependenceTracker::IndependenceTracker(const MatroidInstance& matroid) : matroid_(&matroid) {
  switch (matroid.kind_) {
    case MatroidKind::Graphic:
      parent_.resize(matroid.vertex_count_);
      std::iota(parent_.begin(), parent_.end(), 0);
      break;
    case MatroidKind::Scheduling:
      deadline_count_.assign(matroid.n_ + 1, 0);
      break;
    case MatroidKind::Partition:
      block_used_.assign(matroid.blocks_.size(), false);
      break;
    case MatroidKind::Uniform:
      break;
  }
}

std::size_t IndependenceTracker::find(std::size_t x) const {
  while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
  return x;
}

bool IndependenceTracker::can_add(Element e) const {
  const auto& m = *matroid_;
  switch (m.kind_) {
    case MatroidKind::Uniform:
      return size_ < m.uniform_k_;
    case MatroidKind::Graphic:
      return find(m.edges_[e].u) != find(m.edges_[e].v);
    case MatroidKind::Scheduling: {
      // Feasible iff, for every horizon t >= d, the jobs due by t fit in t slots.
      const std::size_t horizon = m.n_;
      const std::size_t d = std::min<std::size_t>(static_cast<std::size_t>(m.deadlines_[e]), horizon);
      std::size_t due = 0;
      for (std::size_t t = 1; t < d; ++t) due += deadline_count_[t];
      for (std::size_t t = d; t <= horizon; ++t) {
        due += deadline_count_[t];
        if (due + 1 > t) return false;
      }
      return true;
    }
    case MatroidKind::Partition:
      return !block_used_[m.block_of_[e]];
  }
  return false;
}

void IndependenceTracker::add(Element e) {
  const auto& m = *matroid_;
  switch (m.kind_) {
    case MatroidKind::Uniform:
      break;
    case MatroidKind::Graphic:
      parent_[find(m.edges_[e].u)] = find(m.edges_[e].v);
      break;
    case MatroidKind::Scheduling:
      ++deadline_count_[std::min<std::size_t>(static_cast<std::size_t>(m.deadlines_[e]), m.n_)];
      break;
    case MatroidKind::Partition:
      block_used_[m.block_of_[e]] = true;
      break;
  }
  ++size_;
}

GreedyResult greedy_opt_base(const MatroidInstance& matroid, std::span<const double> weights,
                             Sense sense) {
  if (weights.size() != matroid.size()) throw InputError("weight vector length mismatch");
  std::vector<Element> order(matroid.size());
  std::iota(order.begin(), order.end(), 0);
  if (sense == Sense::Max) {
    std::stable_sort(order.begin(), order.end(),
                     [&](Element a, Element b) { return weights[a] > weights[b]; });
  } else {
    std::stable_sort(order.begin(), order.end(),
                     [&](Element a, Element b) { return weights[a] < weights[b]; });
  }
  IndependenceTracker tracker(matroid);
  GreedyResult result;
  for (Element e : order) {
    if (tracker.can_add(e)) {
      tracker.add(e);
      result.base.push_back(e);
      result.value += weights[e];
    }
  }
  std::sort(result.base.begin(), result.base.end());
  return result;
}

double base_weight(std::span<const double> weights, std::span<const Element> base) {
  double total = 0.0;
  for (Element e : base) total += weights[e];
  return total;
}

namespace {

void extend_bases(const MatroidInstance& matroid, Element next, std::vector<Element>& current,
                  const IndependenceTracker& tracker, std::vector<Base>& out) {
  if (current.size() == matroid.rank()) {
    out.push_back(current);
    return;
  }
  for (Element e = next; e < matroid.size(); ++e) {
    // Not enough elements left to reach a base.
    if (current.size() + (matroid.size() - e) < matroid.rank()) return;
    if (!tracker.can_add(e)) continue;
    IndependenceTracker child = tracker;
    child.add(e);
    current.push_back(e);
    extend_bases(matroid, e + 1, current, child, out);
    current.pop_back();
  }
}

}  // namespace

std::vector<Base> enumerate_bases(const MatroidInstance& matroid, std::size_t cap) {
  if (matroid.size() > cap) {
    throw SizeError("base enumeration refused: n = " + std::to_string(matroid.size()) +
                    " exceeds cap " + std::to_string(cap));
  }
  std::vector<Base> out;
  std::vector<Element> current;
  extend_bases(matroid, 0, current, IndependenceTracker(matroid), out);
  return out;
}

}  // namespace elicit
