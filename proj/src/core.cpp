#include "kothe/core.hpp"

namespace kothe {

const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NonMonotoneTail: return "NonMonotoneTail";
    case ErrorKind::UnboundedTail: return "UnboundedTail";
    case ErrorKind::DivergentTail: return "DivergentTail";
    case ErrorKind::NotInSpace: return "NotInSpace";
    case ErrorKind::UnknownDual: return "UnknownDual";
    case ErrorKind::ModularDivergent: return "ModularDivergent";
    case ErrorKind::ExponentOrder: return "ExponentOrder";
    case ErrorKind::BranchOverflow: return "BranchOverflow";
    case ErrorKind::InverseDomain: return "InverseDomain";
    case ErrorKind::HypothesisUnmet: return "HypothesisUnmet";
    case ErrorKind::NotBounded: return "NotBounded";
    case ErrorKind::UnsupportedTail: return "UnsupportedTail";
    case ErrorKind::OutsideSupport: return "OutsideSupport";
    case ErrorKind::UnsupportedIntegrand: return "UnsupportedIntegrand";
  }
  return "Unknown";
}

void raise(ErrorKind kind, const std::string& what) {
  throw Error(kind, std::string(to_string(kind)) + ": " + what);
}

const char* to_string(Tri t) {
  switch (t) {
    case Tri::Yes: return "Yes";
    case Tri::No: return "No";
    case Tri::Unknown: return "Unknown";
  }
  return "Unknown";
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Compact: return "Compact";
    case Verdict::NonCompact: return "NonCompact";
    case Verdict::Inconclusive: return "Inconclusive";
    case Verdict::NotBounded: return "NotBounded";
  }
  return "Inconclusive";
}

const char* to_string(Membership m) {
  switch (m) {
    case Membership::Member: return "Member";
    case Membership::NonMember: return "NonMember";
    case Membership::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

}  // namespace kothe
