#pragma once

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace netrw {

enum class Errc {
  DuplicatePortOccupancy,
  UnknownPort,
  FrontierArityViolation,
  GluingConflict,
  SizeBudgetExceeded,
  BudgetExceeded,
  DomainGap,
  BlockMismatch,
  NotANBH,
  NotReversible,
  EmptyIntersection,
  DanglingEnvironment,
  InfiniteBlock,
  InconsistentOccupancy,
  NoInducedPreimage,
  InterfaceMismatch,
  MissingMacro,
  UnattachedVertex,
  InvalidPosition,
  ParseError,
  ValidationError,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::DuplicatePortOccupancy: return "DuplicatePortOccupancy";
    case Errc::UnknownPort: return "UnknownPort";
    case Errc::FrontierArityViolation: return "FrontierArityViolation";
    case Errc::GluingConflict: return "GluingConflict";
    case Errc::SizeBudgetExceeded: return "SizeBudgetExceeded";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::DomainGap: return "DomainGap";
    case Errc::BlockMismatch: return "BlockMismatch";
    case Errc::NotANBH: return "NotANBH";
    case Errc::NotReversible: return "NotReversible";
    case Errc::EmptyIntersection: return "EmptyIntersection";
    case Errc::DanglingEnvironment: return "DanglingEnvironment";
    case Errc::InfiniteBlock: return "InfiniteBlock";
    case Errc::InconsistentOccupancy: return "InconsistentOccupancy";
    case Errc::NoInducedPreimage: return "NoInducedPreimage";
    case Errc::InterfaceMismatch: return "InterfaceMismatch";
    case Errc::MissingMacro: return "MissingMacro";
    case Errc::UnattachedVertex: return "UnattachedVertex";
    case Errc::InvalidPosition: return "InvalidPosition";
    case Errc::ParseError: return "ParseError";
    case Errc::ValidationError: return "ValidationError";
  }
  return "?";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc c, const std::string& msg) { throw Error(c, msg); }

/// Hard limits for every search/closure entry point. Exhaustion is a flag on
/// results, not an error, except where an operation's contract says otherwise.
struct Budget {
  std::size_t max_steps = 8;
  std::size_t max_net_size = 24;    // vertices per net
  std::size_t max_jungle_size = 512;

  static Budget defaults();

  bool operator==(const Budget&) const = default;
  bool leq(const Budget& o) const {
    return max_steps <= o.max_steps && max_net_size <= o.max_net_size &&
           max_jungle_size <= o.max_jungle_size;
  }
};

/// NETRW_BUDGET="steps,net,jungle" overrides the built-in defaults.
inline Budget Budget::defaults() {
  Budget b;
  if (const char* env = std::getenv("NETRW_BUDGET")) {
    unsigned long s = 0, n = 0, j = 0;
    if (std::sscanf(env, "%lu,%lu,%lu", &s, &n, &j) == 3) {
      b.max_steps = s;
      b.max_net_size = n;
      b.max_jungle_size = j;
    }
  }
  return b;
}

}  // namespace netrw
