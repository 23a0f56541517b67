#ifndef KOTHE_ESSNORM_HPP
#define KOTHE_ESSNORM_HPP

#include <string>
#include <utility>
#include <vector>

#include "kothe/multipliers.hpp"

namespace kothe {

struct EssNormReport {
  std::vector<std::pair<long long, Bracket>> tail_norms;
  Bracket limit;
  Verdict verdict = Verdict::Inconclusive;
  std::string certificate;
  std::vector<std::string> warnings;
};

/// lim_n ‖λχ_{n,n+1,...}‖_{M(X,Y)}.
EssNormReport essential_norm(const SpaceDescriptor& X, const SpaceDescriptor& Y, const SequenceSpec& lambda,
                             const std::vector<long long>& n_grid, const OracleOptions& opt = {});
EssNormReport essential_norm(const SpaceDescriptor& X, const SpaceDescriptor& Y, const SequenceSpec& lambda);

/// limsup |λ_n|, the essential norm of M_λ on an order continuous X.
EssNormReport essential_norm_self(const SpaceDescriptor& X, const SequenceSpec& lambda,
                                  const std::vector<long long>& n_grid);
EssNormReport essential_norm_self(const SpaceDescriptor& X, const SequenceSpec& lambda);

/// dist_Z(z, Z_o).
Bracket distance_to_oc_part(const SpaceDescriptor& Z, const SequenceSpec& z);

/// a_n(M_λ : ℓ_q → ℓ_p) = ‖λ*χ_{n,...}‖_{ℓ_r}, 1/r = 1/p − 1/q, p < q. Infinite when λ* ∉ ℓ_r.
std::vector<std::pair<long long, Bracket>> approximation_numbers(const SequenceSpec& lambda, double q, double p,
                                                                 const std::vector<long long>& n_grid);

/// M(CX, CY): ℓ_∞(n^{1/q−1/p}) for ℓ_p, ℓ_q with p < q; Tandori(M(X,Y)) when X ⊙ M(X,Y) = Y.
MultiplierResult cesaro_multiplier_space(const SpaceDescriptor& X, const SpaceDescriptor& Y);

/// Essential norm of the Fourier multiplier on H² → E, reduced to M(ℓ_2, E) tails.
EssNormReport fourier_multiplier_essnorm(const SpaceDescriptor& E, const SequenceSpec& lambda);

}  // namespace kothe

#endif
