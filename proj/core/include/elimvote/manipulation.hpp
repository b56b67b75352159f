#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>

#include "elimvote/engines.hpp"

namespace elimvote {

// Node budget for every search. A node is one elimination round simulated,
// optimistic tie branches included; terminal rounds are free.
struct SearchBudget {
  std::uint64_t max_nodes = 10'000'000;
};

// Raised when a search would pass its node budget; distinct from a no
// decision. completed_k is the largest coalition size fully decided before
// the throw, or -1 when none was.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(std::uint64_t limit, std::uint64_t used);
  std::uint64_t limit() const { return limit_; }
  std::uint64_t used() const { return used_; }
  int completed_k = -1;

 private:
  std::uint64_t limit_;
  std::uint64_t used_;
};

struct SearchStats {
  std::uint64_t nodes = 0;
  std::uint64_t ballots_tried = 0;
};

struct ManipulationQuery {
  RuleSpec rule;
  Profile profile;  // sincere voters only
  CandidateId preferred = -1;
  int manipulators = 0;
  TieBreakPolicy policy;
  void validate() const;
};

struct ManipulationResult {
  bool decision = false;
  std::vector<Ballot> witness;        // one ballot per manipulator
  bool witness_is_per_round = false;  // sequential: witness[i] is round i+1's ballot
  SearchStats stats;
};

// Single winner check under the query's tie handling: deterministic when the
// policy has no optimistic marker, otherwise branches over every tied loser
// and accepts any branch electing preferred. Charges simulated rounds to the
// budget.
bool preferred_wins(const RuleSpec& rule, const Profile& profile,
                    const TieBreakPolicy& policy, CandidateId preferred,
                    const SearchBudget& budget = {}, SearchStats* stats = nullptr);

// Exhaustive search over multisets of k ballots in lexicographic order; the
// witness is the first accepting multiset. Every yes is re-verified through
// the engine before returning.
ManipulationResult find_manipulation_brute(const ManipulationQuery& query,
                                           const SearchBudget& budget = {});

enum class FrontierVariant {
  EliminateVeto,  // manipulator ballot acts through its last-ranked survivor
  Stv,            // manipulator ballot acts through its top-ranked survivor
};

// Single-manipulator search over active-target sequences: a new target is
// chosen only when the previous one is eliminated; memoized on the remaining
// set plus target. Veto targets never include the preferred candidate; stv
// targets may (supporting it to the end). Returns the lexicographically
// smallest accepting target sequence rebuilt as a concrete ballot and
// verified by the engine. Requires a deterministic policy.
ManipulationResult find_manipulation_frontier(FrontierVariant variant,
                                              const Profile& profile,
                                              CandidateId preferred,
                                              const TieBreakPolicy& policy,
                                              const SearchBudget& budget = {});

// Smallest coalition size in 0..k_max that succeeds, searching upward via
// the exhaustive solver; nullopt when every size fails. A budget throw
// carries the largest fully decided size.
std::optional<int> min_coalition(const RuleSpec& rule, const Profile& profile,
                                 CandidateId preferred, int k_max,
                                 const TieBreakPolicy& policy,
                                 const SearchBudget& budget = {});

// Adaptive single-manipulator search for sequential(base): depth-first over
// per-round ballots, memoized on the remaining set (round standings depend
// on nothing else). Plurality branches on tops and veto on bottoms; other
// bases branch on full round ballots. The witness holds one ballot per
// elimination round and is verified by replay. Requires a deterministic
// policy.
ManipulationResult sequential_manipulate(const RuleFamily& base, const Profile& profile,
                                         CandidateId preferred,
                                         const TieBreakPolicy& policy,
                                         const SearchBudget& budget = {});

}  // namespace elimvote
