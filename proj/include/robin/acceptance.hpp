#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace robin {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

// Runs the ten acceptance criteria, printing one PASS/FAIL line per criterion
// (plus indented detail lines) to `os` as each finishes. `seed` drives the
// randomised property samples.
std::vector<CriterionResult> run_acceptance(unsigned seed, std::ostream& os);

}  // namespace robin
