#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "elimvote/election.hpp"
#include "elimvote/scoring.hpp"

namespace elimvote {

enum class Combinator { None, Eliminate, Divide, Sequential, Coombs };

// Hardness showcase rules, addressed by their interface ids.
enum class DemoRule {
  AlphabeticalUnlessUnanimous,  // id thm1-alpha
  OneInThreeSat,                // id thm2-sat
};

// A full rule: a combinator over a scoring base or a demo base. Coombs takes
// no base; sequential takes a scoring base only; demo bases compose with
// eliminate and divide, or stand alone.
struct RuleSpec {
  Combinator combinator = Combinator::None;
  std::optional<RuleFamily> base;
  std::optional<DemoRule> demo;

  // Grammar: coombs | [eliminate:|divide:|sequential:]<base>
  // where <base> is a scoring token or a demo id (thm1-alpha, thm2-sat).
  static RuleSpec parse(std::string_view text);
  std::string label() const;
  void validate() const;
  bool operator==(const RuleSpec&) const = default;
};

enum class StopReason {
  LoserEliminated,
  MajorityReached,
  OneLeft,
  AllAtMean,
};

std::string_view stop_reason_label(StopReason reason);

struct TraceRound {
  int round = 0;                         // 1-based
  std::vector<CandidateId> remaining;    // start-of-round survivors, ascending
  ScoreTable scores;                     // this round's standings
  std::vector<CandidateId> eliminated;   // ascending; empty on terminal rounds
  StopReason reason = StopReason::LoserEliminated;
  bool operator==(const TraceRound&) const = default;
};

// Full run record. score_kind says how to read the tables: "veto" holds
// last-place counts (larger is worse), "positional" holds rule scores
// (smaller is worse), "rank" holds 1-based positions from a demo ranking.
// A single-candidate start yields zero rounds except under coombs, which
// records its majority round.
struct EliminationTrace {
  std::vector<std::string> roster;
  std::string rule_label;
  std::string score_kind;
  std::vector<TraceRound> rounds;
  CandidateId winner = -1;
  bool operator==(const EliminationTrace&) const = default;
};

// Worst-score direction for a scoring base: veto counts last places.
LoserDirection base_direction(const RuleFamily& family);

// Per-round standings among remaining: last-place counts for veto, positional
// scores under the family's length-m vector otherwise. Indexed by full id.
std::vector<Weight> base_scores_among(const Profile& profile,
                                      const CandidateMask& remaining,
                                      const RuleFamily& family);

// One-shot positional rule: ranking by descending score. Among ties the
// policy's more protected candidate ranks higher, so the convention that
// eliminates earliest ranks later-priority candidates first.
struct PositionalResult {
  std::vector<CandidateId> ranking;
  ScoreTable scores;
};
PositionalResult run_positional(const Profile& profile, const RuleFamily& family,
                                const TieBreakPolicy& policy);

// One candidate out per round, lowest base score (most last places for veto).
EliminationTrace run_eliminate(const RuleFamily& base, const Profile& profile,
                               const TieBreakPolicy& policy);
EliminationTrace run_eliminate(DemoRule base, const Profile& profile,
                               const TieBreakPolicy& policy);

// Each round removes every candidate at or below the mean score, compared as
// count*score <= sum. An all-tied round stops with the policy's most
// protected candidate. Demo bases drop the bottom half of their ranking.
EliminationTrace run_divide(const RuleFamily& base, const Profile& profile,
                            const TieBreakPolicy& policy);
EliminationTrace run_divide(DemoRule base, const Profile& profile,
                            const TieBreakPolicy& policy);

// Veto elimination with a stop as soon as some candidate holds a strict
// majority of first places, checked at the start of every round.
EliminationTrace run_coombs(const Profile& profile, const TieBreakPolicy& policy);

// Per-round ballot for the designated extra voter: a permutation of the
// remaining candidates, in full-roster ids. Receives the standings so far.
using SequentialStrategy =
    std::function<std::vector<CandidateId>(const CandidateMask&, const EliminationTrace&)>;

// Re-vote each round restricted to the remaining candidates. Sincere voters
// restrict their original ballots; the optional strategy adds one weight-1
// ballot per elimination round. Without a strategy the trace equals
// run_eliminate with the same base.
EliminationTrace run_sequential(const RuleFamily& base, const Profile& profile,
                                const TieBreakPolicy& policy,
                                SequentialStrategy strategy = {});

// Full ranking for a demo rule on the given profile.
std::vector<CandidateId> run_demo(DemoRule rule, const Profile& profile);

// Dispatch on the combinator; requires combinator != None.
EliminationTrace run_rule(const RuleSpec& spec, const Profile& profile,
                          const TieBreakPolicy& policy,
                          SequentialStrategy strategy = {});

// One record per round plus the winner on the final line.
std::string trace_to_text(const EliminationTrace& trace);

// Same fields as the text trace in a machine-readable tree.
std::string trace_to_json_string(const EliminationTrace& trace);

}  // namespace elimvote
