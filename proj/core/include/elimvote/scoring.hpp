#pragma once

#include <string>
#include <string_view>

#include "elimvote/election.hpp"

namespace elimvote {

// Scoring vector (s_1,...,s_m), most-preferred position first.
using ScoringVector = std::vector<Weight>;

enum class ScoringKind {
  Plurality,
  Veto,
  Borda,
  KApproval,
  Heisman,
  Eurovision,
  Custom,
  Truncated,
};

// A positional rule family, instantiable at any candidate count.
struct RuleFamily {
  ScoringKind kind = ScoringKind::Plurality;
  int approval_k = 0;      // KApproval only
  ScoringVector entries;   // Custom and Truncated only

  static RuleFamily plurality();
  static RuleFamily veto();
  static RuleFamily borda();
  static RuleFamily kapproval(int k);
  static RuleFamily heisman();
  static RuleFamily eurovision();
  static RuleFamily custom(ScoringVector entries);
  static RuleFamily truncated(ScoringVector entries);

  // Grammar: plurality | veto | borda | kapproval:<k> | heisman | eurovision
  //          | custom:<s1,s2,...> | trunc:<s1,...,sk>
  static RuleFamily parse(std::string_view text);

  // Canonical token; parse(label()) reproduces the family.
  std::string label() const;

  bool operator==(const RuleFamily&) const = default;
};

// Length-m vector for the family. Named families regenerate per m; custom
// vectors are prefix-truncated literally, zero padded when m exceeds their
// length. Truncated families whose length-m prefix is constant fall back to
// plurality at m so every round keeps a usable rule.
ScoringVector instantiate(const RuleFamily& family, int m);

// Entry i of the result is s_1 - s_{m+1-i}. Output is nonincreasing and
// ends in 0; applied twice it returns v shifted down by s_m.
ScoringVector adjoint(const ScoringVector& v);

}  // namespace elimvote
