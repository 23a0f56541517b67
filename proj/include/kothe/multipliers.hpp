#ifndef KOTHE_MULTIPLIERS_HPP
#define KOTHE_MULTIPLIERS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kothe/spaces.hpp"

namespace kothe {

struct MultiplierResult {
  SpaceDescriptor descriptor;
  std::string rule;
  /// Set when the rule is an equivalence: c‖λ‖_D <= ‖λ‖_{M(X,Y)} <= C‖λ‖_D.
  bool equivalence = false;
  std::optional<std::pair<double, double>> constants;
  std::string warning;
  bool known() const { return descriptor.kind() != SpaceDescriptor::Kind::Unknown; }
};

/// Rule table for M(X,Y); the first matching rule wins.
MultiplierResult multiplier_space(const SpaceDescriptor& X, const SpaceDescriptor& Y);

/// X ↪ Y from the embedding table (Unknown when no rule applies).
Tri embeds(const SpaceDescriptor& X, const SpaceDescriptor& Y);

struct OracleOptions {
  int restarts = 32;
  std::uint64_t seed = 0;
  int max_sweeps = 200;
  /// Size of the random-search support, taken from the start of supp λ ∩ [1, N].
  int max_support = 64;
  /// Upper bound lower·(1 + slack) when no closed form exists.
  double slack = 0.01;
  /// Run the search also when a closed form is available.
  bool force_search = false;
};

struct OracleResult {
  Bracket value;
  /// x >= 0 on 1..witness.size() attaining value.lower.
  std::vector<double> witness;
  /// Best ratio from the random search alone (0 when it was skipped).
  double search_lower = 0.0;
  bool closed_form = false;
};

/// Bracket on sup_{‖x‖_X <= 1} ‖λx‖_Y.
OracleResult multiplier_norm_oracle(const SpaceDescriptor& X, const SpaceDescriptor& Y, const SequenceSpec& lambda,
                                    const Truncation& N, const OracleOptions& opt = {});

/// Closed-form E ⊙ F when a rule applies.
std::optional<SpaceDescriptor> product_space(const SpaceDescriptor& E, const SpaceDescriptor& F);

struct ProductResult {
  Bracket value;
  /// g of the best factorization f = g h found.
  std::vector<double> g;
  double search_upper = kInf;
  bool closed_form = false;
};

/// Bracket on inf{‖g‖_E ‖h‖_F : |f| = gh} for finitely supported f.
ProductResult product_space_norm_oracle(const SpaceDescriptor& E, const SpaceDescriptor& F, const SequenceSpec& f,
                                        const Truncation& N, const OracleOptions& opt = {});

enum class Factorization { Holds, Fails, Inconclusive };
const char* to_string(Factorization f);

struct FactorizationOptions {
  /// Holds needs max/min of the ratio within this factor.
  double max_spread = 1e3;
  /// Fails needs the running infimum to drop by this factor.
  double decay_factor = 10.0;
  /// Depth of the log10 t grid for Orlicz pairs.
  double decades = 4000.0;
  int points_per_octave = 8;
};

struct FactorizationReport {
  Factorization verdict = Factorization::Inconclusive;
  std::string route;
  std::string reason;
  /// (log10 t, R) on the grid, or (sample index, ratio) on the generic route.
  std::vector<std::pair<double, Bracket>> ratios;
  double spread = 0.0;
  double decay = 1.0;
};

/// Whether X ⊙ M(X,Y) = Y.
FactorizationReport factorization_check(const SpaceDescriptor& X, const SpaceDescriptor& Y,
                                        const std::vector<SequenceSpec>& sample_fs = {},
                                        const FactorizationOptions& opt = {});

enum class Pitt { AllCompact, SomeNonCompact, Unknown };
const char* to_string(Pitt p);

struct PittReport {
  Pitt verdict = Pitt::Unknown;
  std::string reason;
};

/// Every bounded multiplier X → Y is compact iff M(X,Y) is order continuous.
PittReport pitt_predicate(const SpaceDescriptor& X, const SpaceDescriptor& Y);

}  // namespace kothe

#endif
