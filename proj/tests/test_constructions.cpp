#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "elimvote/constructions.hpp"
#include "elimvote/manipulation.hpp"
#include "elimvote/random.hpp"
#include "json.hpp"

using namespace elimvote;

namespace {

CoverInstance make_instance(int n, std::vector<std::array<int, 3>> sets) {
  CoverInstance out;
  out.n = n;
  out.sets = std::move(sets);
  return out;
}

CoverInstance yes_one() { return make_instance(3, {{{1, 2, 3}}}); }
CoverInstance yes_two() { return make_instance(6, {{{1, 2, 3}, {4, 5, 6}}}); }
CoverInstance no_two() { return make_instance(6, {{{1, 2, 3}, {1, 2, 4}}}); }

Profile with_ballot(const Profile& profile, const Ballot& extra) {
  Profile out = profile;
  out.ballots.push_back(extra);
  return out;
}

int role_count(const ReductionOutput& red, Role role) {
  return static_cast<int>(std::count(red.roles.begin(), red.roles.end(), role));
}

}  // namespace

TEST_CASE("reduction constants follow their closed forms") {
  const ReductionConstants one = ReductionConstants::for_instance(1, 3);
  CHECK(one.f1 == 55);
  CHECK(one.f2 == 40);
  CHECK(one.f3 == 8);
  CHECK(one.f4 == 3);
  CHECK(one.f12 == 95);
  CHECK(one.f123 == 103);
  CHECK(one.X == 1291);
  CHECK_NOTHROW(one.validate(1, 3));

  const ReductionConstants two = ReductionConstants::for_instance(2, 6);
  CHECK(two.f1 == 77);
  CHECK(two.f2 == 56);
  CHECK(two.f3 == 10);
  CHECK(two.f4 == 3);
  CHECK(two.f12 == 133);
  CHECK(two.f123 == 143);
  CHECK(two.X == 2710);
  CHECK_NOTHROW(two.validate(2, 6));

  // Large instances clear every subtraction, so the polynomial floor binds.
  const ReductionConstants four = ReductionConstants::for_instance(4, 12);
  CHECK(four.f1 == 121);
  CHECK(four.f4 == 3);
  CHECK(four.X == 16 * 1024 + 1);
  CHECK_NOTHROW(four.validate(4, 12));

  ReductionConstants tampered = one;
  tampered.X += 1;
  CHECK_THROWS_AS(tampered.validate(1, 3), std::invalid_argument);
  CHECK_THROWS_AS(ReductionConstants::for_instance(0, 3), std::invalid_argument);
  CHECK_THROWS_AS(ReductionConstants::for_instance(1, 4), std::invalid_argument);
  CHECK_THROWS_AS(ReductionConstants::for_instance(1, 0), std::invalid_argument);
}

TEST_CASE("the built election has the documented shape") {
  const ReductionOutput red = build_veto_reduction(yes_one());
  CHECK(red.profile.ballots.size() == 40);
  CHECK(red.profile.num_candidates() == 90);
  CHECK(red.profile.roster[red.preferred] == "p");
  CHECK(red.profile.roster[red.item(0)] == "d0");
  CHECK(red.profile.roster[red.item(3)] == "d3");
  CHECK(red.profile.roster[red.second_line(1, false)] == "a1");
  CHECK(red.profile.roster[red.second_line(1, true)] == "abar1");
  CHECK(red.profile.roster[red.first_loser(1, false)] == "b1");
  CHECK(red.profile.roster[red.first_loser(1, true)] == "bbar1");
  CHECK(red.profile.roster[red.pump(1)] == "p1");
  CHECK(red.profile.roster[red.switch1()] == "s1");
  CHECK(red.profile.roster[red.switch2()] == "s2");

  CHECK(role_count(red, Role::Preferred) == 1);
  CHECK(role_count(red, Role::Item) == 4);
  CHECK(role_count(red, Role::SecondLine) == 2);
  CHECK(role_count(red, Role::FirstLoser) == 2);
  CHECK(role_count(red, Role::Pump) == 1);
  CHECK(role_count(red, Role::Switch) == 2);
  CHECK(role_count(red, Role::Garbage) == 39);
  CHECK(role_count(red, Role::GarbagePrime) == 39);

  CHECK(red.policy.convention == TieConvention::EliminateEarliest);
  const std::vector<CandidateId> front(red.policy.priority.begin(),
                                       red.policy.priority.begin() + 6);
  CHECK(front == std::vector<CandidateId>{red.switch2(), red.item(0), red.preferred,
                                          red.item(1), red.item(2), red.item(3)});
  for (const Ballot& ballot : red.profile.ballots) CHECK(ballot.multiplicity >= 1);

  const ReductionOutput big = build_veto_reduction(yes_two());
  CHECK(big.profile.ballots.size() == 82);
  CHECK(big.profile.num_candidates() == 182);
  CHECK(role_count(big, Role::Garbage) == 81);
  CHECK(role_count(big, Role::GarbagePrime) == 81);

  // Below n/3 sets no cover can exist and the election is rejected.
  CHECK_THROWS_AS(build_veto_reduction(make_instance(9, {{{1, 2, 3}, {4, 5, 6}}})),
                  std::invalid_argument);
}

TEST_CASE("initial veto-scores match their closed forms") {
  const ReductionOutput red = build_veto_reduction(yes_one());
  const Weight X = red.constants.X;
  const auto scores = veto_scores_among(red.profile, full_mask(red.profile));
  CHECK(scores[red.preferred] == X - 1);
  CHECK(scores[red.item(0)] == X - 2);
  for (int k = 1; k <= 3; ++k) CHECK(scores[red.item(k)] == X - 2);
  CHECK(scores[red.second_line(1, false)] == X + 3);
  CHECK(scores[red.second_line(1, true)] == X + 3);
  CHECK(scores[red.first_loser(1, false)] == X);
  CHECK(scores[red.first_loser(1, true)] == X);
  CHECK(scores[red.pump(1)] == X);
  CHECK(scores[red.switch1()] == X);
  CHECK(scores[red.switch2()] == X - 6);
  for (CandidateId c = 0; c < red.profile.num_candidates(); ++c) {
    if (red.roles[c] == Role::Garbage || red.roles[c] == Role::GarbagePrime) {
      CHECK(scores[c] == 0);
    }
  }
  CHECK(std::accumulate(scores.begin(), scores.end(), Weight{0}) ==
        red.profile.total_weight());

  const ReductionOutput big = build_veto_reduction(yes_two());
  const Weight Y = big.constants.X;
  const auto tall = veto_scores_among(big.profile, full_mask(big.profile));
  CHECK(tall[big.preferred] == Y - 1);
  CHECK(tall[big.item(0)] == Y - 2);
  CHECK(tall[big.second_line(1, false)] == Y + 3);
  CHECK(tall[big.second_line(1, true)] == Y + 3);
  CHECK(tall[big.second_line(2, false)] == Y);
  CHECK(tall[big.second_line(2, true)] == Y);
  CHECK(tall[big.first_loser(2, false)] == Y);
  CHECK(tall[big.pump(1)] == Y);
  CHECK(tall[big.pump(2)] == Y);
  CHECK(tall[big.switch1()] == Y);
  CHECK(tall[big.switch2()] == Y - 9);
}

TEST_CASE("the cover ballot elects the preferred candidate under both rules") {
  const ReductionOutput red = build_veto_reduction(yes_one());
  const auto cover = cover_oracle(red.instance);
  REQUIRE(cover.has_value());
  const Ballot ballot = cover_to_ballot(red, *cover);
  REQUIRE(ballot.ranking.size() == 90);
  CHECK(ballot.ranking.front() == red.preferred);
  CHECK(ballot.ranking[88] == red.second_line(1, true));
  CHECK(ballot.ranking[89] == red.second_line(1, false));

  const Profile swayed = with_ballot(red.profile, ballot);
  CHECK(run_eliminate(RuleFamily::veto(), swayed, red.policy).winner == red.preferred);
  CHECK(run_coombs(swayed, red.policy).winner == red.preferred);
  CHECK(run_eliminate(RuleFamily::veto(), red.profile, red.policy).winner !=
        red.preferred);
  CHECK(run_coombs(red.profile, red.policy).winner != red.preferred);

  const ReductionOutput big = build_veto_reduction(yes_two());
  const auto pair = cover_oracle(big.instance);
  REQUIRE(pair.has_value());
  CHECK(pair->indices == std::vector<int>{1, 2});
  const Profile led = with_ballot(big.profile, cover_to_ballot(big, *pair));
  CHECK(run_eliminate(RuleFamily::veto(), led, big.policy).winner == big.preferred);
  CHECK(run_coombs(led, big.policy).winner == big.preferred);
  CHECK(run_eliminate(RuleFamily::veto(), big.profile, big.policy).winner !=
        big.preferred);
}

TEST_CASE("phase invariants hold for sincere and manipulated traces") {
  const ReductionOutput red = build_veto_reduction(yes_one());
  const EliminationTrace sincere =
      run_eliminate(RuleFamily::veto(), red.profile, red.policy);
  const PhaseReport quiet = check_phase_invariants(sincere, red);
  CHECK(quiet.ok);
  CHECK(quiet.delta == 0);
  CHECK(quiet.selected == std::vector<int>{1});

  const Profile swayed =
      with_ballot(red.profile, cover_to_ballot(red, *cover_oracle(red.instance)));
  const EliminationTrace led = run_eliminate(RuleFamily::veto(), swayed, red.policy);
  const PhaseReport loud = check_phase_invariants(led, red);
  CHECK(loud.ok);
  CHECK(loud.delta == 1);
  CHECK(loud.selected == std::vector<int>{1});

  const ReductionOutput big = build_veto_reduction(yes_two());
  const PhaseReport wide = check_phase_invariants(
      run_eliminate(RuleFamily::veto(), big.profile, big.policy), big);
  CHECK(wide.ok);
  CHECK(wide.delta == 0);
  CHECK(wide.selected == std::vector<int>{1, 2});
  const Profile led_big =
      with_ballot(big.profile, cover_to_ballot(big, *cover_oracle(big.instance)));
  const PhaseReport tall = check_phase_invariants(
      run_eliminate(RuleFamily::veto(), led_big, big.policy), big);
  CHECK(tall.ok);
  CHECK(tall.delta == 1);
  CHECK(tall.selected == std::vector<int>{1, 2});

  // Traces from another profile or another score kind are not comparable.
  const FamilyOutput other = build_thm4_family(2);
  const EliminationTrace foreign =
      run_eliminate(RuleFamily::veto(), other.profile, other.policy);
  CHECK_THROWS_AS(check_phase_invariants(foreign, red), std::invalid_argument);
  const EliminationTrace positional =
      run_eliminate(RuleFamily::borda(), red.profile, red.policy);
  CHECK_THROWS_AS(check_phase_invariants(positional, red), std::invalid_argument);
}

TEST_CASE("phase invariants reject a tampered profile") {
  const ReductionOutput red = build_veto_reduction(yes_one());
  Profile tampered = red.profile;
  bool bumped = false;
  for (Ballot& ballot : tampered.ballots) {
    if (ballot.ranking.back() == red.switch2()) {
      ballot.multiplicity += 1;
      bumped = true;
      break;
    }
  }
  REQUIRE(bumped);
  const EliminationTrace trace =
      run_eliminate(RuleFamily::veto(), tampered, red.policy);
  const PhaseReport report = check_phase_invariants(trace, red);
  CHECK_FALSE(report.ok);
  CHECK(report.failed_round == 6);
  CHECK_FALSE(report.message.empty());
  CHECK(report.delta == 1);
}

TEST_CASE("cover oracle finds the lexicographically first cover") {
  const auto single = cover_oracle(yes_one());
  REQUIRE(single.has_value());
  CHECK(single->indices == std::vector<int>{1});

  const auto pair = cover_oracle(
      make_instance(6, {{{1, 2, 3}, {4, 5, 6}, {1, 4, 5}}}));
  REQUIRE(pair.has_value());
  CHECK(pair->indices == std::vector<int>{1, 2});

  const auto swapped = cover_oracle(
      make_instance(6, {{{1, 4, 5}, {2, 3, 6}, {1, 2, 3}, {4, 5, 6}}}));
  REQUIRE(swapped.has_value());
  CHECK(swapped->indices == std::vector<int>{1, 2});

  CHECK_FALSE(cover_oracle(no_two()).has_value());
  CHECK_FALSE(cover_oracle(make_instance(3, {})).has_value());

  CHECK_THROWS_AS(cover_oracle(make_instance(4, {{{1, 2, 3}}})),
                  std::invalid_argument);
  CHECK_THROWS_AS(cover_oracle(make_instance(3, {{{1, 1, 2}}})),
                  std::invalid_argument);
  CHECK_THROWS_AS(cover_oracle(make_instance(3, {{{0, 1, 2}}})),
                  std::invalid_argument);
}

TEST_CASE("canonical ballots cover the pattern space and decide no-instances") {
  const ReductionOutput red = build_veto_reduction(yes_one());
  const std::vector<Ballot> two = canonical_ballots(red);
  REQUIRE(two.size() == 2);
  CHECK(two[0].ranking != two[1].ranking);
  CHECK(two[1].ranking == cover_to_ballot(red, *cover_oracle(red.instance)).ranking);
  CHECK(run_eliminate(RuleFamily::veto(), with_ballot(red.profile, two[0]),
                      red.policy)
            .winner != red.preferred);
  CHECK(run_eliminate(RuleFamily::veto(), with_ballot(red.profile, two[1]),
                      red.policy)
            .winner == red.preferred);

  const ReductionOutput blocked = build_veto_reduction(no_two());
  CHECK_FALSE(cover_oracle(blocked.instance).has_value());
  const std::vector<Ballot> four = canonical_ballots(blocked);
  REQUIRE(four.size() == 4);
  std::set<std::vector<CandidateId>> distinct;
  for (const Ballot& ballot : four) distinct.insert(ballot.ranking);
  CHECK(distinct.size() == 4);
  for (const Ballot& ballot : four) {
    CHECK(run_eliminate(RuleFamily::veto(), with_ballot(blocked.profile, ballot),
                        blocked.policy)
              .winner != blocked.preferred);
  }

  // On the yes-instance exactly the cover pattern elects p.
  const ReductionOutput open = build_veto_reduction(yes_two());
  const std::vector<Ballot> grid = canonical_ballots(open);
  REQUIRE(grid.size() == 4);
  int wins = 0;
  for (const Ballot& ballot : grid) {
    const bool won = run_eliminate(RuleFamily::veto(),
                                   with_ballot(open.profile, ballot), open.policy)
                         .winner == open.preferred;
    if (won) {
      ++wins;
      CHECK(ballot.ranking ==
            cover_to_ballot(open, *cover_oracle(open.instance)).ranking);
    }
  }
  CHECK(wins == 1);
}

TEST_CASE("cover_to_ballot rejects malformed covers") {
  const ReductionOutput red = build_veto_reduction(yes_two());
  CHECK_NOTHROW(cover_to_ballot(red, CoverSolution{{1, 2}}));
  CHECK_THROWS_AS(cover_to_ballot(red, CoverSolution{{1}}), std::invalid_argument);
  CHECK_THROWS_AS(cover_to_ballot(red, CoverSolution{{2, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(cover_to_ballot(red, CoverSolution{{1, 3}}), std::invalid_argument);

  const ReductionOutput blocked = build_veto_reduction(no_two());
  CHECK_THROWS_AS(cover_to_ballot(blocked, CoverSolution{{1, 2}}),
                  std::invalid_argument);
}

TEST_CASE("sidecar and cover instance files round-trip") {
  const CoverInstance instance = yes_two();
  const CoverInstance back = parse_cover_instance(serialize_cover_instance(instance));
  CHECK(back.n == instance.n);
  CHECK(back.sets == instance.sets);

  const ReductionOutput red = build_veto_reduction(yes_one());
  const nlohmann::json doc = nlohmann::json::parse(reduction_sidecar_json(red));
  CHECK(doc["instance"]["n"] == 3);
  CHECK(doc["instance"]["sets"].size() == 1);
  CHECK(doc["constants"]["X"] == 1291);
  CHECK(doc["constants"]["f1"] == 55);
  CHECK(doc["preferred"] == "p");
  CHECK(doc["policy"]["convention"] == "eliminate-earliest");
  CHECK(doc["policy"]["priority"][0] == "s2");
  CHECK(doc["policy"]["priority"][1] == "d0");
  CHECK(doc["policy"]["priority"][2] == "p");
  CHECK(doc["roles"]["p"] == "preferred");
  CHECK(doc["roles"]["s1"] == "switch");
  CHECK(doc["roles"]["abar1"] == "second-line");
  CHECK(doc["roles"]["g_L01"] == "garbage");
  CHECK(doc["roles"]["gp_L01"] == "garbage-prime");

  CHECK_THROWS_AS(parse_cover_instance("{"), std::invalid_argument);
  CHECK_THROWS_AS(parse_cover_instance("{\"n\": 3}"), std::invalid_argument);
  CHECK_THROWS_AS(parse_cover_instance("{\"n\": 3, \"sets\": [[1, 2]]}"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_cover_instance("{\"n\": 3, \"sets\": [[1, \"x\", 2]]}"),
                  std::invalid_argument);
}

TEST_CASE("the separation families take their documented shapes") {
  const FamilyOutput narrow = build_thm4_family(2);
  CHECK(narrow.profile.ballots.size() == 6);
  CHECK(narrow.profile.num_candidates() == 5);
  CHECK(narrow.preferred == 0);
  CHECK(narrow.profile.ballots[0].ranking ==
        std::vector<CandidateId>{0, 3, 4, 1, 2});
  CHECK(narrow.profile.ballots[1].ranking ==
        std::vector<CandidateId>{0, 4, 3, 1, 2});
  CHECK(narrow.profile.ballots[2].ranking ==
        std::vector<CandidateId>{1, 0, 3, 4, 2});
  CHECK(narrow.profile.ballots[4].ranking ==
        std::vector<CandidateId>{2, 1, 0, 3, 4});
  CHECK(run_eliminate(RuleFamily::veto(), narrow.profile, narrow.policy).winner == 0);
  CHECK(run_coombs(narrow.profile, narrow.policy).winner == 1);

  const FamilyOutput wide = build_thm4_family(3);
  CHECK(wide.profile.ballots.size() == 9);
  CHECK(wide.profile.num_candidates() == 6);
  CHECK(run_eliminate(RuleFamily::veto(), wide.profile, wide.policy).winner == 0);
  CHECK(run_coombs(wide.profile, wide.policy).winner == 1);

  const FamilyOutput pinned = build_thm5_family(3);
  CHECK(pinned.profile.ballots.size() == 6);
  CHECK(pinned.profile.num_candidates() == 5);
  CHECK(pinned.profile.ballots[0].ranking ==
        std::vector<CandidateId>{0, 1, 2, 3, 4});
  CHECK(pinned.profile.ballots[1].ranking ==
        std::vector<CandidateId>{0, 1, 3, 4, 2});
  CHECK(pinned.profile.ballots[3].ranking ==
        std::vector<CandidateId>{1, 2, 3, 4, 0});
  CHECK_FALSE(majority_winner(pinned.profile).has_value());

  // One first-place ballot hands a the majority under the stopping rule.
  const Profile tipped =
      with_ballot(pinned.profile, Ballot{{0, 1, 2, 3, 4}, 1});
  CHECK(run_coombs(tipped, pinned.policy).winner == 0);

  ManipulationQuery query;
  query.rule = RuleSpec::parse("eliminate:veto");
  query.profile = pinned.profile;
  query.preferred = pinned.preferred;
  query.manipulators = 1;
  query.policy = pinned.policy;
  CHECK_FALSE(find_manipulation_brute(query).decision);

  ManipulationQuery coombs = query;
  coombs.rule = RuleSpec::parse("coombs");
  CHECK(find_manipulation_brute(coombs).decision);

  CHECK(min_coalition(RuleSpec::parse("coombs"), pinned.profile, pinned.preferred,
                      2, pinned.policy) == 1);

  const FamilyOutput wider = build_thm5_family(4);
  const Profile tipped4 =
      with_ballot(wider.profile, Ballot{{0, 1, 2, 3, 4, 5}, 1});
  CHECK(run_coombs(tipped4, wider.policy).winner == 0);

  CHECK_THROWS_AS(build_thm4_family(1), std::invalid_argument);
  CHECK_THROWS_AS(build_thm5_family(1), std::invalid_argument);
}

TEST_CASE("the nine-vote scenario matches its description") {
  const FamilyOutput nine = build_example2();
  CHECK(nine.profile.total_weight() == 23);
  CHECK(nine.profile.num_candidates() == 9);
  CHECK(nine.profile.roster[nine.preferred] == "p");
  CHECK(nine.policy.convention == TieConvention::EliminateLatest);
  const std::vector<std::string> order = {"p", "g", "c", "d", "a",
                                          "e", "f", "b", "h"};
  REQUIRE(nine.policy.priority.size() == order.size());
  for (std::size_t t = 0; t < order.size(); ++t) {
    CHECK(nine.profile.roster[nine.policy.priority[t]] == order[t]);
  }

  const auto tops = top_counts_among(nine.profile, full_mask(nine.profile));
  CHECK(tops[*nine.profile.find_candidate("h")] == 6);
  CHECK(tops[*nine.profile.find_candidate("p")] == 5);
  CHECK(tops[*nine.profile.find_candidate("g")] == 3);

  const EliminationTrace fixed =
      run_eliminate(RuleFamily::plurality(), nine.profile, nine.policy);
  const EliminationTrace sincere =
      run_sequential(RuleFamily::plurality(), nine.profile, nine.policy);
  CHECK(fixed.winner == sincere.winner);
  CHECK(fixed.winner != nine.preferred);
}

TEST_CASE("adjoint padding balances the pad and preserves differences") {
  const Profile V = parse_profile(
      "candidates: x,y,z\n"
      "1: x > y > z\n"
      "1: y > x > z\n");
  const ScoringVector borda = instantiate(RuleFamily::borda(), 3);

  const Profile reversed = reverse_profile(V);
  CHECK(reversed.ballots[0].ranking == std::vector<CandidateId>{2, 1, 0});
  CHECK(reversed.ballots[1].ranking == std::vector<CandidateId>{2, 0, 1});
  CHECK(reversed.total_weight() == V.total_weight());

  const Profile padded = build_adjoint_padding(V, 1, borda);
  REQUIRE(padded.ballots.size() == 5);
  CHECK(padded.ballots[2].multiplicity == 8);
  CHECK(padded.ballots[3].multiplicity == 8);
  CHECK(padded.ballots[4].multiplicity == 8);
  CHECK(padded.total_weight() == 2 + 24);
  CHECK(padded.ballots[2].ranking == std::vector<CandidateId>{0, 1, 2});
  CHECK(padded.ballots[3].ranking == std::vector<CandidateId>{1, 2, 0});
  CHECK(padded.ballots[4].ranking == std::vector<CandidateId>{2, 0, 1});

  // The pad is score-neutral under any vector, so differences carry over.
  for (const ScoringVector& vec :
       {borda, ScoringVector{5, 2, 0}, ScoringVector{1, 1, 0}}) {
    const auto base = positional_scores(reversed, vec);
    const auto lifted = positional_scores(padded, vec);
    const Weight shift = lifted[0] - base[0];
    for (CandidateId c = 0; c < 3; ++c) CHECK(lifted[c] - base[c] == shift);
  }

  CHECK(build_adjoint_padding(V, 1, borda).ballots == padded.ballots);

  const Profile narrow = parse_profile("candidates: x,y\n1: x > y\n");
  CHECK_THROWS_AS(build_adjoint_padding(narrow, 1, ScoringVector{1, 0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_adjoint_padding(V, -1, borda), std::invalid_argument);
  CHECK_THROWS_AS(build_adjoint_padding(V, 1, ScoringVector{1, 0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_adjoint_padding(V, 1, ScoringVector{0, 1, 2}),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_adjoint_padding(V, 1, ScoringVector{0, 0, 0}),
                  std::invalid_argument);
}

TEST_CASE("a reversed-profile witness carries to the padded election") {
  // The pad shifts every first-round score equally, so the padded run must
  // eliminate the same candidate first as the reversed profile plus the
  // witness ballot; afterwards the pad forces the lead rotation winner.
  std::mt19937_64 rng(20260822);
  const ScoringVector bases[2] = {instantiate(RuleFamily::borda(), 3),
                                  instantiate(RuleFamily::borda(), 4)};
  int witnessed = 0;
  for (int trial = 0; trial < 24; ++trial) {
    const int m = 3 + trial % 2;
    const Profile V = random_profile(rng, m, 1 + static_cast<Weight>(trial % 6));
    const Profile reversed = reverse_profile(V);
    const TieBreakPolicy policy = TieBreakPolicy::roster_order(reversed);
    const ScoringVector& vec = bases[trial % 2];
    const CandidateId last = m - 1;

    std::vector<CandidateId> ballot(m);
    std::iota(ballot.begin(), ballot.end(), 0);
    std::optional<std::vector<CandidateId>> witness;
    do {
      const Profile probe = with_ballot(reversed, Ballot{ballot, 1});
      const EliminationTrace head =
          run_eliminate(RuleFamily::borda(), probe, policy);
      if (head.rounds.front().eliminated == std::vector<CandidateId>{last}) {
        witness = ballot;
        break;
      }
    } while (std::next_permutation(ballot.begin(), ballot.end()));

    if (!witness.has_value()) continue;
    ++witnessed;
    const Profile padded =
        with_ballot(build_adjoint_padding(V, 1, vec), Ballot{*witness, 1});
    const EliminationTrace full =
        run_eliminate(RuleFamily::borda(), padded, policy);
    CHECK(full.rounds.front().eliminated == std::vector<CandidateId>{last});
    CHECK(full.winner == 0);
  }
  CHECK(witnessed > 8);
}
