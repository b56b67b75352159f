#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "elimvote/manipulation.hpp"
#include "elimvote/random.hpp"

using namespace elimvote;

namespace {

const char* kCyclicSix =
    "candidates: a,b,c,d1,d2\n"
    "1: a > d1 > d2 > b > c\n"
    "1: a > d2 > d1 > b > c\n"
    "1: b > a > d1 > d2 > c\n"
    "1: b > a > d2 > d1 > c\n"
    "1: c > b > a > d1 > d2\n"
    "1: c > b > a > d2 > d1\n";

const char* kNineVotes =
    "candidates: a,b,c,d,e,f,g,h,p\n"
    "1: a > h > p > b > c > d > e > f > g\n"
    "1: c > a > h > p > b > d > e > f > g\n"
    "1: d > a > h > p > b > c > e > f > g\n"
    "3: g > a > h > p > b > c > d > e > f\n"
    "2: b > h > p > a > c > d > e > f > g\n"
    "2: e > b > h > p > a > c > d > f > g\n"
    "2: f > b > h > p > a > c > d > e > g\n"
    "6: h > p > a > b > c > d > e > f > g\n"
    "5: p > h > a > b > c > d > e > f > g\n";

CandidateId id_of(const Profile& profile, const std::string& name) {
  auto found = profile.find_candidate(name);
  REQUIRE(found.has_value());
  return *found;
}

TieBreakPolicy name_policy(const Profile& profile,
                           const std::vector<std::string>& names,
                           TieConvention convention) {
  TieBreakPolicy policy;
  policy.convention = convention;
  for (const std::string& name : names) policy.priority.push_back(id_of(profile, name));
  policy.validate(profile);
  return policy;
}

TieBreakPolicy nine_votes_policy(const Profile& profile) {
  return name_policy(profile, {"p", "g", "c", "d", "a", "e", "f", "b", "h"},
                     TieConvention::EliminateLatest);
}

// n sincere voters a > b > d-cycle plus n sincere voters b > d-cycle > a.
// The a-last block pins a's veto-score at n while a remains.
Profile weakest_front_runner(int n) {
  Profile profile;
  profile.roster = {"a", "b"};
  for (int j = 1; j <= n; ++j) profile.roster.push_back("d" + std::to_string(j));
  for (int i = 0; i < n; ++i) {
    std::vector<CandidateId> first{0, 1};
    std::vector<CandidateId> second{1};
    for (int j = 0; j < n; ++j) {
      CandidateId d = static_cast<CandidateId>(2 + (i + j) % n);
      first.push_back(d);
      second.push_back(d);
    }
    second.push_back(0);
    profile.ballots.push_back({first, 1});
    profile.ballots.push_back({second, 1});
  }
  profile.validate();
  return profile;
}

ManipulationQuery make_query(const std::string& rule, const Profile& profile,
                             CandidateId preferred, int k, const TieBreakPolicy& policy) {
  return ManipulationQuery{RuleSpec::parse(rule), profile, preferred, k, policy};
}

}  // namespace

TEST_CASE("brute finds the lexicographically first coalition ballot multiset") {
  Profile profile = parse_profile("candidates: x,y\n1: x > y\n");
  TieBreakPolicy policy = TieBreakPolicy::roster_order(profile);
  ManipulationResult result =
      find_manipulation_brute(make_query("eliminate:plurality", profile, 1, 2, policy));
  CHECK(result.decision);
  CHECK_FALSE(result.witness_is_per_round);
  REQUIRE(result.witness.size() == 2);
  CHECK(result.witness[0].ranking == std::vector<CandidateId>{1, 0});
  CHECK(result.witness[1].ranking == std::vector<CandidateId>{1, 0});
  // Multisets tried before the hit: (xy,xy) and (xy,yx).
  CHECK(result.stats.ballots_tried == 3);
}

TEST_CASE("brute with zero manipulators reports whether preferred already wins") {
  Profile profile = parse_profile(kCyclicSix);
  TieBreakPolicy policy = TieBreakPolicy::roster_order(profile);
  ManipulationResult yes =
      find_manipulation_brute(make_query("eliminate:veto", profile, id_of(profile, "a"), 0, policy));
  CHECK(yes.decision);
  CHECK(yes.witness.empty());
  CHECK(yes.stats.ballots_tried == 0);
  CHECK(yes.stats.nodes == 4);
  ManipulationResult no =
      find_manipulation_brute(make_query("eliminate:veto", profile, id_of(profile, "b"), 0, policy));
  CHECK_FALSE(no.decision);
  CHECK(no.witness.empty());
}

TEST_CASE("preferred_wins charges one node per elimination round") {
  Profile profile = parse_profile(kCyclicSix);
  TieBreakPolicy policy = TieBreakPolicy::roster_order(profile);
  SearchStats stats;
  CHECK(preferred_wins(RuleSpec::parse("eliminate:veto"), profile, policy,
                       id_of(profile, "a"), SearchBudget{}, &stats));
  CHECK(stats.nodes == 4);

  stats = {};
  CHECK(preferred_wins(RuleSpec::parse("coombs"), profile, policy, id_of(profile, "b"),
                       SearchBudget{}, &stats));
  CHECK(stats.nodes == 1);

  stats = {};
  CHECK(preferred_wins(RuleSpec::parse("divide:plurality"), profile, policy,
                       id_of(profile, "c"), SearchBudget{}, &stats));
  CHECK(stats.nodes == 1);

  stats = {};
  preferred_wins(RuleSpec::parse("borda"), profile, policy, id_of(profile, "a"),
                 SearchBudget{}, &stats);
  CHECK(stats.nodes == 1);
}

TEST_CASE("frontier agrees with brute for one veto-elimination manipulator") {
  std::mt19937_64 rng(20260822);
  int yes_seen = 0;
  for (int trial = 0; trial < 120; ++trial) {
    int m = 2 + static_cast<int>(rng() % 4);
    Weight weight = 1 + static_cast<Weight>(rng() % 7);
    Profile profile = random_profile(rng, m, weight);
    TieConvention convention = trial % 2 == 0 ? TieConvention::EliminateEarliest
                                              : TieConvention::EliminateLatest;
    TieBreakPolicy policy = TieBreakPolicy::roster_order(profile, convention);
    for (CandidateId preferred = 0; preferred < m; ++preferred) {
      ManipulationResult brute =
          find_manipulation_brute(make_query("eliminate:veto", profile, preferred, 1, policy));
      ManipulationResult frontier = find_manipulation_frontier(
          FrontierVariant::EliminateVeto, profile, preferred, policy);
      REQUIRE(brute.decision == frontier.decision);
      if (frontier.decision) {
        ++yes_seen;
        REQUIRE(frontier.witness.size() == 1);
        CHECK(frontier.witness[0].ranking.front() == preferred);
        Profile check = profile;
        check.ballots.push_back(frontier.witness[0]);
        CHECK(run_eliminate(RuleFamily::veto(), check, policy).winner == preferred);
      }
    }
  }
  CHECK(yes_seen > 50);
}

TEST_CASE("frontier agrees with brute for one stv manipulator") {
  std::mt19937_64 rng(9151);
  int yes_seen = 0;
  for (int trial = 0; trial < 120; ++trial) {
    int m = 2 + static_cast<int>(rng() % 4);
    Weight weight = 1 + static_cast<Weight>(rng() % 7);
    Profile profile = random_profile(rng, m, weight);
    TieConvention convention = trial % 2 == 0 ? TieConvention::EliminateEarliest
                                              : TieConvention::EliminateLatest;
    TieBreakPolicy policy = TieBreakPolicy::roster_order(profile, convention);
    for (CandidateId preferred = 0; preferred < m; ++preferred) {
      ManipulationResult brute = find_manipulation_brute(
          make_query("eliminate:plurality", profile, preferred, 1, policy));
      ManipulationResult frontier =
          find_manipulation_frontier(FrontierVariant::Stv, profile, preferred, policy);
      REQUIRE(brute.decision == frontier.decision);
      if (frontier.decision) {
        ++yes_seen;
        REQUIRE(frontier.witness.size() == 1);
        Profile check = profile;
        check.ballots.push_back(frontier.witness[0]);
        CHECK(run_eliminate(RuleFamily::plurality(), check, policy).winner == preferred);
      }
    }
  }
  CHECK(yes_seen > 50);
}

TEST_CASE("one coombs manipulator beats the family that veto elimination resists") {
  for (int n : {3, 4}) {
    Profile profile = weakest_front_runner(n);
    TieBreakPolicy policy = TieBreakPolicy::roster_order(profile);
    CandidateId a = id_of(profile, "a");

    ManipulationResult coombs =
        find_manipulation_brute(make_query("coombs", profile, a, 1, policy));
    CHECK(coombs.decision);
    // The identity ballot already tops a, reaching a strict majority.
    CHECK(coombs.stats.ballots_tried == 1);
    REQUIRE(coombs.witness.size() == 1);
    CHECK(coombs.witness[0].ranking.front() == a);

    ManipulationResult veto =
        find_manipulation_brute(make_query("eliminate:veto", profile, a, 1, policy));
    CHECK_FALSE(veto.decision);
    ManipulationResult frontier =
        find_manipulation_frontier(FrontierVariant::EliminateVeto, profile, a, policy);
    CHECK_FALSE(frontier.decision);

    CHECK(min_coalition(RuleSpec::parse("coombs"), profile, a, 2, policy) == 1);
    CHECK_FALSE(
        min_coalition(RuleSpec::parse("eliminate:veto"), profile, a, n - 2, policy).has_value());
  }
}

TEST_CASE("min_coalition reports the smallest successful coalition") {
  Profile profile = parse_profile("candidates: x,y\n3: x > y\n");
  RuleSpec rule = RuleSpec::parse("eliminate:plurality");
  TieBreakPolicy earliest =
      TieBreakPolicy::roster_order(profile, TieConvention::EliminateEarliest);
  TieBreakPolicy latest = TieBreakPolicy::roster_order(profile, TieConvention::EliminateLatest);
  // A three-way top tie eliminates x under the earliest convention, so three
  // manipulators suffice there and a fourth is needed otherwise.
  CHECK(min_coalition(rule, profile, 1, 6, earliest) == 3);
  CHECK(min_coalition(rule, profile, 1, 6, latest) == 4);
  CHECK(min_coalition(rule, profile, 0, 6, earliest) == 0);
  CHECK_FALSE(min_coalition(rule, profile, 1, 2, earliest).has_value());
}

TEST_CASE("search budget is enforced and reported") {
  Profile profile = parse_profile(kCyclicSix);
  TieBreakPolicy policy = TieBreakPolicy::roster_order(profile);
  try {
    preferred_wins(RuleSpec::parse("eliminate:veto"), profile, policy, 0, SearchBudget{2});
    FAIL("expected BudgetExceeded");
  } catch (const BudgetExceeded& e) {
    CHECK(e.limit() == 2);
    CHECK(e.used() == 3);
    CHECK(e.completed_k == -1);
    CHECK(std::string(e.what()).find("search budget exceeded") != std::string::npos);
  }
  // A budget below one full trace trips inside the very first trial.
  CHECK_THROWS_AS(
      find_manipulation_brute(make_query("eliminate:veto", profile, id_of(profile, "b"), 2, policy),
                              SearchBudget{3}),
      BudgetExceeded);
}

TEST_CASE("min_coalition marks the last fully searched coalition size on budget exhaustion") {
  Profile profile = weakest_front_runner(3);
  TieBreakPolicy policy = TieBreakPolicy::roster_order(profile);
  try {
    min_coalition(RuleSpec::parse("eliminate:veto"), profile, id_of(profile, "a"), 5, policy,
                  SearchBudget{600});
    FAIL("expected BudgetExceeded");
  } catch (const BudgetExceeded& e) {
    CHECK(e.completed_k == 1);
    CHECK(e.limit() == 600);
    CHECK(e.used() > e.limit());
  }
}

TEST_CASE("adaptive sequential manipulation wins the nine-vote scenario") {
  Profile profile = parse_profile(kNineVotes);
  TieBreakPolicy policy = nine_votes_policy(profile);
  CandidateId p = id_of(profile, "p");

  ManipulationResult adaptive =
      sequential_manipulate(RuleFamily::plurality(), profile, p, policy);
  CHECK(adaptive.decision);
  CHECK(adaptive.witness_is_per_round);
  REQUIRE(adaptive.witness.size() == 8);

  const std::vector<Ballot>& plan = adaptive.witness;
  SequentialStrategy scripted = [&plan](const CandidateMask&, const EliminationTrace& so_far) {
    return plan.at(so_far.rounds.size()).ranking;
  };
  EliminationTrace replay = run_sequential(RuleFamily::plurality(), profile, policy, scripted);
  CHECK(replay.winner == p);
  REQUIRE(replay.rounds.size() == 9);
  for (std::size_t r = 0; r + 1 < replay.rounds.size(); ++r) {
    std::vector<CandidateId> ranked = plan[r].ranking;
    std::sort(ranked.begin(), ranked.end());
    CHECK(ranked == replay.rounds[r].remaining);
  }
}

TEST_CASE("no fixed ballot wins the nine-vote scenario") {
  Profile profile = parse_profile(kNineVotes);
  TieBreakPolicy policy = nine_votes_policy(profile);
  CandidateId p = id_of(profile, "p");
  ManipulationResult fixed =
      find_manipulation_brute(make_query("eliminate:plurality", profile, p, 1, policy));
  CHECK_FALSE(fixed.decision);
  CHECK(fixed.stats.ballots_tried == 362880);
}

TEST_CASE("adaptive sequential manipulation dominates any fixed ballot") {
  std::mt19937_64 rng(771204);
  const std::vector<std::string> bases{"plurality", "veto", "borda"};
  int fixed_yes = 0;
  for (int trial = 0; trial < 90; ++trial) {
    int m = 2 + static_cast<int>(rng() % 3);
    Weight weight = 1 + static_cast<Weight>(rng() % 6);
    Profile profile = random_profile(rng, m, weight);
    TieConvention convention = trial % 2 == 0 ? TieConvention::EliminateEarliest
                                              : TieConvention::EliminateLatest;
    TieBreakPolicy policy = TieBreakPolicy::roster_order(profile, convention);
    RuleFamily base = RuleFamily::parse(bases[static_cast<std::size_t>(trial) % bases.size()]);
    std::string rule = "eliminate:" + base.label();
    for (CandidateId preferred = 0; preferred < m; ++preferred) {
      ManipulationResult fixed =
          find_manipulation_brute(make_query(rule, profile, preferred, 1, policy));
      if (!fixed.decision) continue;
      ++fixed_yes;
      ManipulationResult adaptive = sequential_manipulate(base, profile, preferred, policy);
      REQUIRE(adaptive.decision);
      REQUIRE(adaptive.witness.size() ==
              static_cast<std::size_t>(profile.num_candidates() - 1));
      const std::vector<Ballot>& plan = adaptive.witness;
      SequentialStrategy scripted = [&plan](const CandidateMask&,
                                            const EliminationTrace& so_far) {
        return plan.at(so_far.rounds.size()).ranking;
      };
      CHECK(run_sequential(base, profile, policy, scripted).winner == preferred);
    }
  }
  CHECK(fixed_yes > 40);
}

TEST_CASE("optimistic preferred_wins accepts any favorable tie branch") {
  Profile pair = parse_profile("candidates: x,y\n1: x > y\n1: y > x\n");
  TieBreakPolicy policy = TieBreakPolicy::roster_order(pair);
  RuleSpec rule = RuleSpec::parse("eliminate:plurality");
  CHECK_FALSE(preferred_wins(rule, pair, policy, 0));
  CHECK(preferred_wins(rule, pair, policy, 1));
  TieBreakPolicy hope_x = policy;
  hope_x.optimistic_for = 0;
  TieBreakPolicy hope_y = policy;
  hope_y.optimistic_for = 1;
  CHECK(preferred_wins(rule, pair, hope_x, 0));
  CHECK(preferred_wins(rule, pair, hope_y, 1));

  std::mt19937_64 rng(40813);
  const std::vector<std::string> rules{"eliminate:borda", "coombs", "divide:plurality"};
  for (int trial = 0; trial < 80; ++trial) {
    int m = 2 + static_cast<int>(rng() % 3);
    Weight weight = 1 + static_cast<Weight>(rng() % 6);
    Profile profile = random_profile(rng, m, weight);
    TieBreakPolicy deterministic = TieBreakPolicy::roster_order(profile);
    RuleSpec spec = RuleSpec::parse(rules[static_cast<std::size_t>(trial) % rules.size()]);
    for (CandidateId preferred = 0; preferred < m; ++preferred) {
      if (!preferred_wins(spec, profile, deterministic, preferred)) continue;
      TieBreakPolicy optimistic = deterministic;
      optimistic.optimistic_for = preferred;
      CHECK(preferred_wins(spec, profile, optimistic, preferred));
    }
  }
}

TEST_CASE("one-shot scoring manipulation respects positional tie protection") {
  Profile profile = parse_profile("candidates: x,y,z\n2: x > y > z\n");
  TieBreakPolicy earliest =
      TieBreakPolicy::roster_order(profile, TieConvention::EliminateEarliest);
  TieBreakPolicy latest = TieBreakPolicy::roster_order(profile, TieConvention::EliminateLatest);
  // One extra ballot can at best tie y with x at four Borda points.
  ManipulationResult tied_up =
      find_manipulation_brute(make_query("borda", profile, 1, 1, earliest));
  CHECK(tied_up.decision);
  ManipulationResult blocked =
      find_manipulation_brute(make_query("borda", profile, 1, 1, latest));
  CHECK_FALSE(blocked.decision);
}

TEST_CASE("single-candidate profiles are trivially manipulable") {
  Profile solo;
  solo.roster = {"only"};
  solo.ballots.push_back({{0}, 2});
  TieBreakPolicy policy = TieBreakPolicy::roster_order(solo);
  ManipulationResult frontier =
      find_manipulation_frontier(FrontierVariant::EliminateVeto, solo, 0, policy);
  CHECK(frontier.decision);
  REQUIRE(frontier.witness.size() == 1);
  CHECK(frontier.witness[0].ranking == std::vector<CandidateId>{0});
  ManipulationResult sequential = sequential_manipulate(RuleFamily::veto(), solo, 0, policy);
  CHECK(sequential.decision);
  CHECK(sequential.witness.empty());
  CHECK(sequential.witness_is_per_round);
}

TEST_CASE("searches reject optimistic policies and invalid queries") {
  Profile profile = parse_profile(kCyclicSix);
  TieBreakPolicy optimistic = TieBreakPolicy::roster_order(profile);
  optimistic.optimistic_for = 0;
  CHECK_THROWS_AS(
      find_manipulation_frontier(FrontierVariant::EliminateVeto, profile, 0, optimistic),
      std::invalid_argument);
  CHECK_THROWS_AS(sequential_manipulate(RuleFamily::plurality(), profile, 0, optimistic),
                  std::invalid_argument);
  TieBreakPolicy policy = TieBreakPolicy::roster_order(profile);
  CHECK_THROWS_AS(find_manipulation_frontier(FrontierVariant::Stv, profile, 9, policy),
                  std::invalid_argument);
  ManipulationQuery bad_preferred = make_query("coombs", profile, 7, 1, policy);
  CHECK_THROWS_AS(bad_preferred.validate(), std::invalid_argument);
  ManipulationQuery bad_count = make_query("coombs", profile, 0, -1, policy);
  CHECK_THROWS_AS(bad_count.validate(), std::invalid_argument);
  CHECK_THROWS_AS(min_coalition(RuleSpec::parse("coombs"), profile, 0, -1, policy),
                  std::invalid_argument);
}

TEST_CASE("random profiles are valid, reproducible, and merged") {
  std::mt19937_64 rng_a(5);
  std::mt19937_64 rng_b(5);
  Profile first = random_profile(rng_a, 6, 12);
  Profile second = random_profile(rng_b, 6, 12);
  CHECK(serialize_profile(first) == serialize_profile(second));
  first.validate();
  CHECK(first.total_weight() == 12);

  std::mt19937_64 rng_c(6);
  Profile third = random_profile(rng_c, 6, 12);
  CHECK(serialize_profile(first) != serialize_profile(third));

  std::mt19937_64 rng_d(7);
  Profile pair = random_profile(rng_d, 2, 40);
  CHECK(pair.ballots.size() <= 2);
  CHECK(pair.total_weight() == 40);

  std::mt19937_64 rng_e(8);
  Profile solo = random_profile(rng_e, 1, 5);
  REQUIRE(solo.ballots.size() == 1);
  CHECK(solo.ballots[0].multiplicity == 5);

  std::mt19937_64 rng_f(9);
  Profile wide = random_profile(rng_f, 28, 1);
  CHECK(wide.roster[0] == "a");
  CHECK(wide.roster[25] == "z");
  CHECK(wide.roster[26] == "c27");
  CHECK(wide.roster[27] == "c28");

  std::mt19937_64 rng_g(10);
  Profile numbered = random_profile(rng_g, 4, 3, RosterNaming::Numerals);
  CHECK(numbered.roster == std::vector<std::string>{"0", "1", "2", "3"});

  std::mt19937_64 rng_h(11);
  CHECK_THROWS_AS(random_profile(rng_h, 0, 3), std::invalid_argument);
  CHECK_THROWS_AS(random_profile(rng_h, 3, 0), std::invalid_argument);
}
