#include "elicit/generator.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "elicit/errors.hpp"

namespace elicit {

InstanceDocument generate_instance(const GeneratorSpec& spec) {
  if (spec.n < 2) throw InputError("generator needs n >= 2");
  if (spec.p < 2) throw InputError("generator needs p >= 2");
  if (spec.y_min < 0 || spec.y_max < spec.y_min) throw InputError("invalid attribute range");

  std::seed_seq seq{static_cast<std::uint32_t>(spec.seed), static_cast<std::uint32_t>(spec.seed >> 32),
                    static_cast<std::uint32_t>(spec.kind), static_cast<std::uint32_t>(spec.n),
                    static_cast<std::uint32_t>(spec.p)};
  std::mt19937_64 rng(seq);
  const std::size_t n = spec.n;

  auto pick = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };

  InstanceDocument doc{MatroidInstance::uniform(1, 1), AttributeMatrix{}, std::nullopt, ""};
  switch (spec.kind) {
    case MatroidKind::Uniform:
      doc.matroid = MatroidInstance::uniform(n, (n + 1) / 2);
      break;
    case MatroidKind::Graphic: {
      const std::size_t vertices = n / 2 + 1;
      std::vector<std::size_t> order(vertices);
      std::iota(order.begin(), order.end(), 0);
      std::shuffle(order.begin(), order.end(), rng);
      std::vector<Edge> edges;
      // Random spanning tree, then extra edges (parallel edges allowed).
      for (std::size_t i = 1; i < vertices; ++i) edges.push_back({order[pick(0, i - 1)], order[i]});
      while (edges.size() < n) {
        const auto u = pick(0, vertices - 1);
        auto v = pick(0, vertices - 2);
        if (v >= u) ++v;
        edges.push_back({u, v});
      }
      std::shuffle(edges.begin(), edges.end(), rng);
      doc.matroid = MatroidInstance::graphic(vertices, std::move(edges));
      break;
    }
    case MatroidKind::Scheduling: {
      std::vector<int> deadlines(n);
      for (auto& d : deadlines) d = static_cast<int>(pick(1, n / 2 + 1));
      doc.matroid = MatroidInstance::scheduling(std::move(deadlines));
      break;
    }
    case MatroidKind::Partition: {
      const std::size_t blocks = (n + 2) / 3;
      std::vector<Element> elements(n);
      std::iota(elements.begin(), elements.end(), 0);
      std::shuffle(elements.begin(), elements.end(), rng);
      std::vector<std::vector<Element>> parts(blocks);
      for (std::size_t i = 0; i < n; ++i) parts[i < blocks ? i : pick(0, blocks - 1)].push_back(elements[i]);
      doc.matroid = MatroidInstance::partition(n, std::move(parts));
      break;
    }
  }

  std::vector<double> values(n * spec.p);
  std::uniform_int_distribution<int> entry(spec.y_min, spec.y_max);
  for (auto& v : values) v = entry(rng);
  doc.attributes = AttributeMatrix(n, spec.p, std::move(values));
  doc.name = std::string(to_string(spec.kind)) + "-n" + std::to_string(n) + "-p" +
             std::to_string(spec.p) + "-s" + std::to_string(spec.seed);
  return doc;
}

}  // namespace elicit
