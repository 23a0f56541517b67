#include <algorithm>
#include <cmath>
#include <sstream>

#include "kothe/orlicz.hpp"

namespace kothe {

std::vector<double> default_ell_grid() { return {1.01, 1.1, 2.0, 10.0}; }

std::vector<double> default_k_grid() {
  std::vector<double> k;
  for (int e = 1; e <= 300; e += 1) k.push_back(std::pow(10.0, e));
  return k;
}

ExponentRule nakano_multiplier_exponents(const ExponentRule& ps, const ExponentRule& qs, long long sample_n) {
  ps.validate();
  qs.validate();
  std::vector<long long> idx;
  for (long long n = 1; n <= std::max(1LL, sample_n); ++n) idx.push_back(n);
  for (long long n : {1LL << 20, 1LL << 30, 1LL << 40, 1LL << 50, 1LL << 60}) idx.push_back(n);
  for (long long n : idx) {
    if (qs.at(n) > ps.at(n)) {
      std::ostringstream os;
      os << "q_n > p_n at n = " << n << " (" << qs.at(n) << " > " << ps.at(n) << ")";
      raise(ErrorKind::ExponentOrder, os.str());
    }
  }
  if (qs.limit() > ps.limit()) raise(ErrorKind::ExponentOrder, "lim q_n > lim p_n");
  return ExponentRule::derived(ps, qs);
}

namespace {

constexpr double kCellTol = 1e-12;

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

NakanoReport nakano_compactness(const SequenceSpec& lambda, const ExponentRule& ps, const ExponentRule& qs,
                                const std::vector<double>& ell_grid, const std::vector<double>& k_grid, long long N) {
  lambda.validate();
  ps.validate();
  qs.validate();
  for (double l : ell_grid)
    if (!(l > 1.0)) raise(ErrorKind::InvalidArgument, "ell grid values must exceed 1");
  for (std::size_t i = 0; i < k_grid.size(); ++i)
    if (!(k_grid[i] > 1.0) || (i > 0 && !(k_grid[i] > k_grid[i - 1])))
      raise(ErrorKind::InvalidArgument, "k grid must be increasing and above 1");
  if (ell_grid.empty() || k_grid.empty()) raise(ErrorKind::InvalidArgument, "grids must be non-empty");

  NakanoReport rep;
  ExponentRule r = ExponentRule::derived(ps, qs);
  bool finite = lambda.finite_support();
  long long H = finite ? lambda.support_end() : std::max(N, lambda.length());
  std::vector<double> lam = lambda.head(H);
  for (double& v : lam) v = std::fabs(v);

  Bracket L = finite ? Bracket::exact(0.0) : limsup_abs(lambda);
  double r_lim = r.limit();
  auto tr = r.range_from(H + 1);

  if (!std::isfinite(L.lower)) {
    rep.verdict = Verdict::NotBounded;
    rep.reason = "lambda is unbounded";
    return rep;
  }

  // boundedness: lambda must lie in the Nakano space with exponents r_n
  bool bounded = true;
  if (!finite) {
    Profile pr = lambda.tail->profile();
    if (std::isfinite(tr.second)) {
      if (L.lower > 0.0) {
        rep.verdict = Verdict::NotBounded;
        rep.reason = "lambda is not in c0 while r_n stays finite";
        return rep;
      }
      Bracket ps_hi = power_sum(lambda, tr.second, H + 1);
      if (pr.known && std::isinf(ps_hi.lower)) {
        rep.verdict = Verdict::NotBounded;
        rep.reason = "sum |lambda_n|^" + num(tr.second) + " diverges";
        return rep;
      }
    }
    Bracket S = sup_abs(lambda, H + 1);
    if (std::isinf(tr.first)) {
      bounded = std::isfinite(S.upper);
    } else {
      double U = envelope_power_sum(lambda.tail->upper(H + 1), tr.first, H + 1);
      if (lambda.majorant) U = std::min(U, envelope_power_sum(lambda.majorant->upper(H + 1), tr.first, H + 1));
      bounded = std::isfinite(U) && std::isfinite(S.upper);
    }
  }

  // cells: sum over {n : r_n > log k / log ell} of (|lambda_n| ell)^{r_n}
  bool all_vanish = true;
  for (double ell : ell_grid) {
    double le = std::log(ell);
    // first index past which |lambda_n| ell <= 1
    long long Hl = H + 1;
    bool tail_ok = true;
    if (!finite) {
      while (sup_abs(lambda, Hl).upper * ell > 1.0) {
        if (Hl > (1LL << 40)) {
          tail_ok = false;
          break;
        }
        Hl = Hl * 2;
      }
    }
    if (!finite && Hl - 1 > H + (1LL << 20)) tail_ok = false;
    long long extra_end = finite || !tail_ok ? H : Hl - 1;
    std::vector<double> ext = lam;
    for (long long n = H + 1; n <= extra_end; ++n) ext.push_back(std::fabs(lambda.at(n)));
    std::vector<double> rv(ext.size());
    for (std::size_t i = 0; i < ext.size(); ++i) rv[i] = r.at(static_cast<long long>(i + 1));
    auto trl = r.range_from(Hl);
    Envelope env = finite ? Envelope{} : lambda.tail->upper(Hl);
    double last_upper = kInf;
    for (double k : k_grid) {
      double K = std::log(k) / le;
      double lower = 0.0;
      for (std::size_t i = 0; i < ext.size(); ++i) {
        if (ext[i] == 0.0) continue;
        double rn = rv[i];
        if (!(rn > K) || std::isinf(rn)) continue;  // infinite exponents are judged through the limsup below
        lower += std::pow(ext[i] * ell, rn);
      }
      double upper = lower;
      if (!finite) {
        if (trl.second <= K) {
          // no tail index has r_n > K
        } else if (!tail_ok) {
          upper = kInf;
        } else {
          double re = std::max(trl.first, K);
          if (std::isinf(re)) {
            // (|lambda_n| ell)^inf vanishes once |lambda_n| ell <= 1
          } else {
            double s = envelope_power_sum(env, re, Hl);
            if (lambda.majorant) s = std::min(s, envelope_power_sum(lambda.majorant->upper(Hl), re, Hl));
            upper += std::exp(re * le) * s;
          }
        }
      }
      if (std::isinf(r_lim) && L.lower * ell > 1.0) {
        lower = kInf;
        upper = kInf;
      } else if (std::isinf(r_lim) && L.upper * ell > 1.0) {
        upper = kInf;
      }
      NakanoCell c;
      c.ell = ell;
      c.k = k;
      c.sum = Bracket::of(lower, std::max(lower, upper));
      rep.cells.push_back(c);
      last_upper = c.sum.upper;
    }
    const NakanoCell& last = rep.cells.back();
    if (last.sum.lower > kCellTol && rep.witness_ell == 0.0) {
      rep.witness_ell = ell;
      rep.witness_lower = last.sum.lower;
    }
    if (!(last_upper <= kCellTol)) all_vanish = false;
  }

  if (finite) {
    rep.verdict = Verdict::Compact;
    rep.reason = "finite support";
    return rep;
  }
  if (std::isinf(r_lim) && L.lower > 0.0) {
    rep.verdict = Verdict::NonCompact;
    if (rep.witness_ell == 0.0) {
      rep.witness_ell = 2.0 / L.lower;
      rep.witness_lower = kInf;
    }
    rep.reason = "r_n tends to infinity while limsup |lambda_n| >= " + num(L.lower);
    return rep;
  }
  if (rep.witness_ell != 0.0 && std::isinf(rep.witness_lower)) {
    rep.verdict = Verdict::NonCompact;
    rep.reason = "cell sums stay infinite";
    return rep;
  }
  if (!bounded) {
    rep.verdict = Verdict::Inconclusive;
    rep.reason = "boundedness of the multiplier is not certified";
    return rep;
  }
  if (all_vanish) {
    rep.verdict = Verdict::Compact;
    rep.reason = std::isfinite(tr.second) ? "r_n bounded on the tail" : "certified tail sums vanish";
    return rep;
  }
  rep.verdict = Verdict::Inconclusive;
  rep.reason = "cell sums not certified to vanish";
  return rep;
}

NakanoReport nakano_compactness(const SequenceSpec& lambda, const ExponentRule& ps, const ExponentRule& qs) {
  return nakano_compactness(lambda, ps, qs, default_ell_grid(), default_k_grid());
}

}  // namespace kothe
