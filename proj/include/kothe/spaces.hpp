#ifndef KOTHE_SPACES_HPP
#define KOTHE_SPACES_HPP

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "kothe/core.hpp"
#include "kothe/orlicz.hpp"
#include "kothe/seqcore.hpp"
#include "kothe/weight.hpp"

namespace kothe {

/// Verdict with the rule that produced it.
struct OcStatus {
  Tri status = Tri::Unknown;
  std::string rule;
};

/// Immutable constructor tree for a Köthe sequence space.
class SpaceDescriptor {
 public:
  enum class Kind {
    Lp,
    C0,
    LInfty,
    Weighted,
    Orlicz,
    MusielakOrlicz,
    Nakano,
    Lorentz,
    Marcinkiewicz,
    Symmetrized,
    Cesaro,
    Tandori,
    Unknown
  };

  SpaceDescriptor();

  /// p = ∞ gives LInfty.
  static SpaceDescriptor lp(double p);
  static SpaceDescriptor c0();
  static SpaceDescriptor linfty();
  /// X(w) with ‖x‖ = ‖xw‖_X.
  static SpaceDescriptor weighted(SpaceDescriptor base, SequenceSpec w, std::string label = "w");
  static SpaceDescriptor orlicz(OrliczFunction M);
  static SpaceDescriptor musielak_orlicz(OrliczFamily Ms);
  static SpaceDescriptor nakano(ExponentRule p);
  /// λ_φ with weights φ(n+1) − φ(n), or φ(n) − φ(n−1) when backward.
  static SpaceDescriptor lorentz(ConcaveWeight phi, bool backward = false);
  static SpaceDescriptor marcinkiewicz(ConcaveWeight phi);
  /// X^(*) with ‖x‖ = ‖x*‖_X.
  static SpaceDescriptor symmetrized(SpaceDescriptor base);
  static SpaceDescriptor cesaro(SpaceDescriptor base);
  static SpaceDescriptor tandori(SpaceDescriptor base);
  static SpaceDescriptor unknown(std::string reason);

  Kind kind() const;
  double p() const;
  const SpaceDescriptor& base() const;
  const SequenceSpec& weight() const;
  const std::string& weight_label() const;
  const OrliczFunction& orlicz_function() const;
  const OrliczFamily& family() const;
  const ExponentRule& exponents() const;
  const ConcaveWeight& phi() const;
  bool backward() const;
  const std::string& reason() const;

  std::string name() const;
  bool has_fatou() const;
  OcStatus oc_status() const;
  bool rearrangement_invariant() const;
  /// p when the norm is literally the ℓ_p norm (Lp, LInfty, power Orlicz, constant Nakano).
  std::optional<double> lp_exponent() const;

  bool operator==(const SpaceDescriptor& o) const;
  bool operator!=(const SpaceDescriptor& o) const { return !(*this == o); }

  struct Node;

 private:
  std::shared_ptr<const Node> node_;
  explicit SpaceDescriptor(std::shared_ptr<const Node> n);
};

const char* to_string(SpaceDescriptor::Kind k);

/// Bracket on ‖x‖ in the given space.
Bracket norm(const SpaceDescriptor& space, const SequenceSpec& x, const Truncation& N);
Bracket norm(const SpaceDescriptor& space, const SequenceSpec& x);

/// Yes when ‖x‖ < ∞ is certified, No when a certified bound shows divergence.
Tri in_space(const SpaceDescriptor& space, const SequenceSpec& x);
Tri in_space(const SpaceDescriptor& space, const SequenceSpec& x, std::string& reason);

/// Köthe dual; raises UnknownDual without a rule.
SpaceDescriptor kothe_dual(const SpaceDescriptor& space);

/// ‖χ_{1..n}‖.
double fundamental_function(const SpaceDescriptor& space, long long n);

OcStatus is_order_continuous(const SpaceDescriptor& space);

/// Bracket on lim_n ‖xχ_{n,n+1,...}‖, the distance from x to the order continuous part.
struct TailLimit {
  Bracket value;
  std::string rule;
};
TailLimit tail_norm_limit(const SpaceDescriptor& space, const SequenceSpec& x);

struct OcReport {
  std::vector<std::pair<long long, Bracket>> tail_norms;
  Bracket limit;
  Membership verdict = Membership::Inconclusive;
  std::string rule;
};

std::vector<long long> default_n_grid();

/// Tail norms t_n = ‖xχ_{n,...}‖ on n_grid, their limit and the membership verdict for X_o.
OcReport oc_membership(const SpaceDescriptor& space, const SequenceSpec& x, const std::vector<long long>& n_grid,
                       double tol = 1e-12);
OcReport oc_membership(const SpaceDescriptor& space, const SequenceSpec& x);

/// Termwise reciprocal of a positive weight sequence with a power-type tail.
SequenceSpec reciprocal_weight(const SequenceSpec& w);

}  // namespace kothe

#endif
