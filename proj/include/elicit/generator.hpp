#pragma once

#include <cstddef>
#include <cstdint>

#include "elicit/instance_io.hpp"

namespace elicit {

struct GeneratorSpec {
  MatroidKind kind = MatroidKind::Scheduling;
  std::size_t n = 10;
  std::size_t p = 4;
  std::uint64_t seed = 1;
  int y_min = 1;
  int y_max = 9;
};

/// Seeded random instance:
///  - Y entries uniform integers in [y_min, y_max];
///  - Graphic: connected multigraph on n/2 + 1 vertices with n edges;
///  - Scheduling: deadlines uniform in [1, n/2 + 1];
///  - Uniform: k = ceil(n/2);
///  - Partition: ceil(n/3) nonempty blocks.
InstanceDocument generate_instance(const GeneratorSpec& spec);

}  // namespace elicit
