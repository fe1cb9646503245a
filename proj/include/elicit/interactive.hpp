#pragma once

#include <iosfwd>

#include "elicit/elicitation.hpp"

namespace elicit {

/// Terminal elicitation. Each query is printed as
/// "Do you prefer element <l> or element <k>? [l/k]" and answered with
/// 'l', 'k' or one of the two element numbers. Malformed lines are
/// re-prompted; EOF aborts with a partial report.
ElicitationReport interactive_session(const Problem& problem, const ElicitationConfig& config,
                                      std::istream& in, std::ostream& out);

}  // namespace elicit
