#ifndef KOTHE_VERIFY_HPP
#define KOTHE_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace kothe {

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct CriterionResult {
  std::string id;
  std::string title;
  std::vector<Check> checks;
  /// Informational lines that do not affect the verdict.
  std::vector<std::string> info;
  double seconds = 0.0;
  double time_limit = 0.0;
  bool pass() const;
  /// One line: id, PASS/FAIL, title, failing checks and the time taken.
  std::string summary() const;
};

CriterionResult verify_holder_closed_form(std::uint64_t seed);
CriterionResult verify_self_essential_norm(std::uint64_t seed);
CriterionResult verify_pitt(std::uint64_t seed);
CriterionResult verify_appendix_conjugate(std::uint64_t seed);
CriterionResult verify_appendix_factorization(std::uint64_t seed);
CriterionResult verify_nakano(std::uint64_t seed);
CriterionResult verify_cesaro(std::uint64_t seed);
CriterionResult verify_rademacher(std::uint64_t seed);
CriterionResult verify_marcinkiewicz_bracket(std::uint64_t seed);
CriterionResult verify_properties(std::uint64_t seed);

/// AC-1 through AC-10 in order.
std::vector<CriterionResult> verify_all(std::uint64_t seed = 0);

}  // namespace kothe

#endif
