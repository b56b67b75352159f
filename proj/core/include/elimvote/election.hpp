#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace elimvote {

using CandidateId = std::int32_t;
using Weight = std::int64_t;

// A complete strict ranking over the roster, most preferred first.
// Multiplicity encodes repeated identical votes.
struct Ballot {
  std::vector<CandidateId> ranking;
  Weight multiplicity = 1;

  bool operator==(const Ballot&) const = default;
};

struct Profile {
  std::vector<std::string> roster;
  std::vector<Ballot> ballots;

  int num_candidates() const { return static_cast<int>(roster.size()); }
  Weight total_weight() const;
  std::optional<CandidateId> find_candidate(std::string_view name) const;

  // Throws std::invalid_argument unless every ballot is a permutation of the
  // roster with positive multiplicity, names are unique and nonempty, and
  // total weight is positive.
  void validate() const;

  bool operator==(const Profile&) const = default;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

enum class TieConvention {
  EliminateEarliest,  // the tied candidate earliest in the priority list is eliminated
  EliminateLatest,    // the tied candidate latest in the priority list is eliminated
};

struct TieBreakPolicy {
  std::vector<CandidateId> priority;  // permutation of the roster
  TieConvention convention = TieConvention::EliminateEarliest;
  // When set, manipulation search branches over every tied loser and accepts
  // any branch favoring the searched candidate. Engines ignore it.
  std::optional<CandidateId> optimistic_for;

  static TieBreakPolicy roster_order(
      const Profile& profile,
      TieConvention convention = TieConvention::EliminateEarliest);
  void validate(const Profile& profile) const;
};

struct ScoreEntry {
  CandidateId candidate;
  Weight score;

  bool operator==(const ScoreEntry&) const = default;
};

// Scores for the candidates remaining in one round; entries ascend by id.
struct ScoreTable {
  int round = 0;
  std::vector<ScoreEntry> entries;

  bool contains(CandidateId c) const;
  Weight score_of(CandidateId c) const;  // throws std::out_of_range if absent

  bool operator==(const ScoreTable&) const = default;
};

enum class LoserDirection {
  MinScoreLoses,  // positional scores
  MaxScoreLoses,  // veto-scores and rank positions
};

// 0/1 flag per candidate id; 1 = still in the running.
using CandidateMask = std::vector<std::uint8_t>;

CandidateMask full_mask(const Profile& profile);
int mask_count(const CandidateMask& mask);

// Ballot-file grammar:
//   # comment to end of line
//   candidates: name1,name2,...
//   <multiplicity>: name_i > name_j > ...
// Every ranking must be a permutation of the roster. Errors carry the
// offending 1-based line number.
Profile parse_profile(const std::string& text);
std::string serialize_profile(const Profile& profile);

// Deletes the given candidates from roster and ballots, preserving the
// relative order of survivors and all multiplicities. Ids are reassigned to
// the new roster. Throws if a candidate id is invalid or nothing remains.
Profile restrict_profile(const Profile& profile,
                         const std::vector<CandidateId>& removed);

// score(c) = sum over ballots of multiplicity * vector[position of c].
// vector.size() must equal the roster size.
std::vector<Weight> positional_scores(const Profile& profile,
                                      const std::vector<Weight>& vector);

// Same, ignoring non-remaining candidates; vector.size() must equal the
// number of remaining candidates. Indexed by full-roster id; removed
// candidates score 0.
std::vector<Weight> positional_scores_among(const Profile& profile,
                                            const CandidateMask& remaining,
                                            const std::vector<Weight>& vector);

// Weight of ballots placing each candidate last among the remaining ones.
std::vector<Weight> veto_scores_among(const Profile& profile,
                                      const CandidateMask& remaining);

// Weight of ballots placing each candidate first among the remaining ones.
std::vector<Weight> top_counts_among(const Profile& profile,
                                     const CandidateMask& remaining);

ScoreTable make_score_table(int round, const CandidateMask& remaining,
                            const std::vector<Weight>& scores_by_id);

// Candidate top-ranked by strictly more than half the total weight.
std::optional<CandidateId> majority_winner(const Profile& profile);
std::optional<CandidateId> majority_winner_among(const Profile& profile,
                                                 const CandidateMask& remaining,
                                                 Weight total_weight);

// Candidate beating every other in strict pairwise majority.
std::optional<CandidateId> condorcet_winner(const Profile& profile);

// All candidates attaining the losing score for the given direction.
std::vector<CandidateId> tied_losers(const ScoreTable& scores,
                                     LoserDirection direction);

// One loser, ties resolved by the policy convention over its priority list.
CandidateId select_loser(const ScoreTable& scores, const TieBreakPolicy& policy,
                         LoserDirection direction);

}  // namespace elimvote
