#ifndef KOTHE_LORENTZ_HPP
#define KOTHE_LORENTZ_HPP

#include <string>

#include "kothe/spaces.hpp"
#include "kothe/weight.hpp"

namespace kothe {

struct IndexCheck {
  Tri holds = Tri::Unknown;
  Bracket index;
  std::string reason;
};

/// 1 < p_φ^∞.
IndexCheck lower_index_above_one(const ConcaveWeight& phi);
/// q_φ^∞ < ∞.
IndexCheck upper_index_finite(const ConcaveWeight& phi);

/// limsup num(n)/den(n) = ∞, decided from the growth exponents of the rules.
Tri ratio_unbounded(const ConcaveWeight& num, const ConcaveWeight& den);

/// M(m_φ, Y) = [Y(1/φ)]^(*), or ℓ_∞ when 1/φ ∈ Y, or Y when φ is bounded.
SpaceDescriptor multiplier_from_marcinkiewicz(const ConcaveWeight& phi, const SpaceDescriptor& Y);
SpaceDescriptor multiplier_from_marcinkiewicz(const ConcaveWeight& phi, const SpaceDescriptor& Y, std::string& rule);

/// M(X, λ_φ) = [X^×(φ(t)/t)]^(*), or ℓ_∞ when φ(n)/n ∈ X^×.
SpaceDescriptor multiplier_into_lorentz(const SpaceDescriptor& X, const ConcaveWeight& phi);
SpaceDescriptor multiplier_into_lorentz(const SpaceDescriptor& X, const ConcaveWeight& phi, std::string& rule);

enum class LorentzCase { I, II, III, IV, V };
const char* to_string(LorentzCase c);

/// space is X for (i), Y for (ii), Z for (iii); psi is used by (iv) and (v).
struct LorentzCaseParams {
  SpaceDescriptor space;
  ConcaveWeight phi;
  ConcaveWeight psi;
};

struct LorentzCaseReport {
  Verdict verdict = Verdict::Inconclusive;
  /// "main" or "degenerate".
  std::string branch;
  /// Space the derived sequence is tested against.
  std::string target;
  Tri member = Tri::Unknown;
  std::string reason;
};

LorentzCaseReport lorentz_case_check(LorentzCase c, const LorentzCaseParams& params, const SequenceSpec& lambda);

}  // namespace kothe

#endif
