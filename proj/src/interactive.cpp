#include "elicit/interactive.hpp"

#include <istream>
#include <ostream>
#include <string>

namespace elicit {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

void print_base(std::ostream& out, const Base& base) {
  out << '{';
  for (std::size_t i = 0; i < base.size(); ++i) out << (i ? ", " : "") << base[i] + 1;
  out << '}';
}

}  // namespace

ElicitationReport interactive_session(const Problem& problem, const ElicitationConfig& config,
                                      std::istream& in, std::ostream& out) {
  return run(
      problem,
      [&](const ElicitationState& state, Query q) -> std::optional<Answer> {
        out << "[iteration " << state.iteration() << "] region: " << state.polytope().vertices().size()
            << " vertices, regret bound " << state.mmr_bound() << '\n';
        const auto l = std::to_string(q.l + 1);
        const auto k = std::to_string(q.k + 1);
        while (true) {
          out << "Do you prefer element " << l << " or element " << k << "? [l/k] " << std::flush;
          std::string line;
          if (!std::getline(in, line)) {
            out << "\ninput closed; stopping after " << state.history().size() << " answers\n";
            out << "region: " << state.polytope().vertices().size() << " vertices, regret bound "
                << state.mmr_bound() << ", best base so far ";
            print_base(out, state.recommended_base());
            out << '\n';
            return std::nullopt;
          }
          const auto answer = trim(line);
          if (answer == "l" || answer == l) return Answer::PrefersL;
          if (answer == "k" || answer == k) return Answer::PrefersK;
          out << "please answer 'l' (element " << l << ") or 'k' (element " << k << ")\n";
        }
      },
      config);
}

}  // namespace elicit
