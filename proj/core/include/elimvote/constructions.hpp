#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "elimvote/engines.hpp"

namespace elimvote {

// Exact-cover question: can n/3 of the listed triples cover {1..n} exactly?
struct CoverInstance {
  int n = 0;
  std::vector<std::array<int, 3>> sets;

  int num_sets() const { return static_cast<int>(sets.size()); }
  // n must be a positive multiple of 3; every set holds 3 distinct elements
  // of {1..n}.
  void validate() const;
};

// Text form: {"n": 6, "sets": [[1,2,3],[4,5,6]]}
CoverInstance parse_cover_instance(const std::string& text);
std::string serialize_cover_instance(const CoverInstance& instance);

// 1-based set indices, ascending.
struct CoverSolution {
  std::vector<int> indices;
};

// Exhaustive search over all size-n/3 index subsets in lexicographic order;
// returns the first exact cover found.
std::optional<CoverSolution> cover_oracle(const CoverInstance& instance);

struct ReductionConstants {
  Weight f1 = 0;
  Weight f2 = 0;
  Weight f3 = 0;
  Weight f4 = 0;
  Weight f12 = 0;
  Weight f123 = 0;
  Weight X = 0;

  // f1 = 11(2m+3), f2 = 8(2m+3), f3 = 3+(2m+3), f4 = 2m-2n/3+3.
  // X exceeds 16m^5 and every per-line subtraction, so all vote
  // multiplicities stay positive; the smallest such value is chosen.
  static ReductionConstants for_instance(int m, int n);
  void validate(int m, int n) const;
};

enum class Role {
  Preferred,
  Item,
  FirstLoser,
  SecondLine,
  Pump,
  Switch,
  Garbage,
  GarbagePrime,
};
std::string role_label(Role role);

// The cover instance translated into a veto-elimination election. The
// preferred candidate wins the election with one extra ballot iff the
// instance has an exact cover.
struct ReductionOutput {
  Profile profile;
  CandidateId preferred = 0;
  TieBreakPolicy policy;
  std::vector<Role> roles;
  ReductionConstants constants;
  CoverInstance instance;

  CandidateId item(int k) const;                    // d_k, k in [0, n]
  CandidateId second_line(int i, bool bar) const;   // a_i / abar_i, i in [1, m]
  CandidateId first_loser(int i, bool bar) const;   // b_i / bbar_i
  CandidateId pump(int i) const;                    // p_i
  CandidateId switch1() const;
  CandidateId switch2() const;
  Weight sincere_weight() const { return profile.total_weight(); }
};

ReductionOutput build_veto_reduction(const CoverInstance& instance);

// Manipulator ballot realizing the given cover: chosen pairs are vetoed
// lower-first from the bottom, then d_0 and s_2, preferred on top.
Ballot cover_to_ballot(const ReductionOutput& reduction, const CoverSolution& cover);

// All 2^m selection patterns pushed through the same ballot template,
// including patterns that are not covers.
std::vector<Ballot> canonical_ballots(const ReductionOutput& reduction);

// Round-by-round audit of a trace over the reduction profile, with or
// without one manipulator ballot appended. Stops at the first violation.
struct PhaseReport {
  bool ok = true;
  int failed_round = 0;
  std::string message;
  // Extra ballot weight beyond the sincere profile; 0 or 1.
  Weight delta = 0;
  // Set indices whose lower pair member fell in its selection round.
  std::vector<int> selected;
};
PhaseReport check_phase_invariants(const EliminationTrace& trace,
                                   const ReductionOutput& reduction);

// Constants, roles, policy, and source instance as a JSON document.
std::string reduction_sidecar_json(const ReductionOutput& reduction);

struct FamilyOutput {
  Profile profile;
  CandidateId preferred = 0;
  TieBreakPolicy policy;
};

// 3n ballots over {a,b,c,d_1..d_n}: veto elimination already elects a, while
// the majority-stopping variant needs an ever larger coalition to do so.
FamilyOutput build_thm4_family(int n);

// 2n ballots over {a,b,d_1..d_n}: one manipulator suffices under the
// majority-stopping variant, but fewer than n-1 never suffice under veto
// elimination.
FamilyOutput build_thm5_family(int n);

// The nine weighted ballots of the adaptive-manipulation scenario, with its
// eliminate-latest tie policy; an adaptive round-by-round manipulator can
// elect p where no fixed ballot can.
FamilyOutput build_example2();

Profile reverse_profile(const Profile& profile);

// reverse(V) plus vec[0]*(|V|+k+1) copies of the m cyclic ballots. The
// padding scores every candidate equally, so relative scores match
// reverse(V); eliminating the padded profile hinges on the first round.
Profile build_adjoint_padding(const Profile& sincere, int manipulators,
                              const ScoringVector& vec);

}  // namespace elimvote
