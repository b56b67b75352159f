#include "elimvote/engines.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace elimvote {

namespace {

constexpr std::string_view kDemoAlphaId = "thm1-alpha";
constexpr std::string_view kDemoSatId = "thm2-sat";

std::optional<DemoRule> parse_demo_id(std::string_view text) {
  if (text == kDemoAlphaId) return DemoRule::AlphabeticalUnlessUnanimous;
  if (text == kDemoSatId) return DemoRule::OneInThreeSat;
  return std::nullopt;
}

std::string_view demo_id(DemoRule rule) {
  return rule == DemoRule::AlphabeticalUnlessUnanimous ? kDemoAlphaId : kDemoSatId;
}

std::vector<CandidateId> remaining_ids(const CandidateMask& mask) {
  std::vector<CandidateId> ids;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) ids.push_back(static_cast<CandidateId>(i));
  }
  return ids;
}

// Candidate the policy protects longest: ties eliminate from one end of the
// priority list, so the survivor sits at the other end.
CandidateId most_protected(const CandidateMask& mask, const TieBreakPolicy& policy) {
  if (policy.convention == TieConvention::EliminateEarliest) {
    for (auto it = policy.priority.rbegin(); it != policy.priority.rend(); ++it) {
      if (mask[static_cast<std::size_t>(*it)]) return *it;
    }
  } else {
    for (CandidateId c : policy.priority) {
      if (mask[static_cast<std::size_t>(c)]) return c;
    }
  }
  throw std::invalid_argument("no remaining candidate in priority");
}

EliminationTrace make_trace(const Profile& profile, std::string rule_label,
                            std::string score_kind) {
  EliminationTrace trace;
  trace.roster = profile.roster;
  trace.rule_label = std::move(rule_label);
  trace.score_kind = std::move(score_kind);
  return trace;
}

// Numeral values for the 1-in-3 demo; names must be canonical decimals.
std::vector<int> sat_numerals(const Profile& profile) {
  std::vector<int> value(profile.roster.size(), -1);
  for (std::size_t i = 0; i < profile.roster.size(); ++i) {
    const std::string& name = profile.roster[i];
    int v = 0;
    auto [ptr, ec] = std::from_chars(name.data(), name.data() + name.size(), v);
    if (ec != std::errc() || ptr != name.data() + name.size() || v < 0 ||
        name != std::to_string(v)) {
      throw std::invalid_argument("demo roster name is not a numeral: " + name);
    }
    value[i] = v;
  }
  return value;
}

void demo_validate(DemoRule rule, const Profile& profile) {
  if (rule != DemoRule::OneInThreeSat) return;
  std::vector<int> value = sat_numerals(profile);
  std::vector<std::uint8_t> seen(value.size(), 0);
  for (int v : value) {
    if (v >= static_cast<int>(value.size())) {
      throw std::invalid_argument("demo roster numerals must be contiguous from 0");
    }
    seen[static_cast<std::size_t>(v)] = 1;
  }
  for (std::uint8_t s : seen) {
    if (!s) throw std::invalid_argument("demo roster numerals must be contiguous from 0");
  }
  if (profile.num_candidates() == 3) {
    CandidateId zero = *profile.find_candidate("0");
    for (const Ballot& b : profile.ballots) {
      if (b.ranking.front() == zero) {
        throw std::invalid_argument("clause vote cannot be decoded with 3 candidates");
      }
    }
  }
}

std::vector<CandidateId> sat_ranking(const Profile& profile) {
  const int m = profile.num_candidates();
  std::vector<int> value = sat_numerals(profile);
  auto by_value = [&](CandidateId x, CandidateId y) {
    return value[static_cast<std::size_t>(x)] < value[static_cast<std::size_t>(y)];
  };
  if (m == 1) return {0};
  if (m == 2) {
    CandidateId x = 0, y = 1;
    Weight for_x = 0, for_y = 0;
    for (const Ballot& b : profile.ballots) {
      (b.ranking.front() == x ? for_x : for_y) += b.multiplicity;
    }
    // Pairwise tie goes to the smaller numeral.
    CandidateId winner = for_x > for_y ? x : for_y > for_x ? y : (by_value(x, y) ? x : y);
    return {winner, winner == x ? y : x};
  }

  std::optional<CandidateId> zero, one;
  for (CandidateId c = 0; c < m; ++c) {
    if (value[static_cast<std::size_t>(c)] == 0) zero = c;
    if (value[static_cast<std::size_t>(c)] == 1) one = c;
  }
  if (!zero || !one) {
    throw std::invalid_argument("demo roster lacks candidates 0 and 1");
  }

  // Clause votes start with 0 and name three literals; assignment votes make
  // a candidate true when it is ranked before 0.
  std::vector<std::array<CandidateId, 3>> clauses;
  std::vector<const Ballot*> assignments;
  for (const Ballot& b : profile.ballots) {
    if (b.ranking.front() == *zero) {
      if (m >= 4) clauses.push_back({b.ranking[1], b.ranking[2], b.ranking[3]});
    } else {
      assignments.push_back(&b);
    }
  }
  bool zero_wins = false;
  for (const Ballot* b : assignments) {
    std::vector<std::uint8_t> truth(profile.roster.size(), 0);
    for (CandidateId c : b->ranking) {
      if (c == *zero) break;
      truth[static_cast<std::size_t>(c)] = 1;
    }
    bool all_exact = true;
    for (const auto& clause : clauses) {
      int sat = truth[static_cast<std::size_t>(clause[0])] +
                truth[static_cast<std::size_t>(clause[1])] +
                truth[static_cast<std::size_t>(clause[2])];
      if (sat != 1) {
        all_exact = false;
        break;
      }
    }
    if (all_exact) {
      zero_wins = true;
      break;
    }
  }

  CandidateId winner = zero_wins ? *zero : *one;
  std::vector<CandidateId> rest;
  for (CandidateId c = 0; c < m; ++c) {
    if (c != winner) rest.push_back(c);
  }
  std::sort(rest.begin(), rest.end(), by_value);
  std::vector<CandidateId> ranking{winner};
  ranking.insert(ranking.end(), rest.begin(), rest.end());
  return ranking;
}

std::vector<CandidateId> demo_ranking(DemoRule rule, const Profile& profile) {
  if (rule == DemoRule::OneInThreeSat) return sat_ranking(profile);
  bool unanimous = true;
  for (const Ballot& b : profile.ballots) {
    if (b.ranking != profile.ballots.front().ranking) {
      unanimous = false;
      break;
    }
  }
  if (unanimous) return profile.ballots.front().ranking;
  std::vector<CandidateId> ranking(profile.roster.size());
  for (std::size_t i = 0; i < ranking.size(); ++i) ranking[i] = static_cast<CandidateId>(i);
  std::sort(ranking.begin(), ranking.end(), [&](CandidateId x, CandidateId y) {
    return profile.roster[static_cast<std::size_t>(x)] < profile.roster[static_cast<std::size_t>(y)];
  });
  return ranking;
}

// Demo ranking of the profile restricted to the mask, in full-roster ids.
std::vector<CandidateId> demo_ranking_among(DemoRule rule, const Profile& profile,
                                            const CandidateMask& mask) {
  std::vector<CandidateId> removed;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (!mask[i]) removed.push_back(static_cast<CandidateId>(i));
  }
  if (removed.empty()) return demo_ranking(rule, profile);
  Profile restricted = restrict_profile(profile, removed);
  std::vector<CandidateId> to_full = remaining_ids(mask);
  std::vector<CandidateId> ranking = demo_ranking(rule, restricted);
  std::vector<CandidateId> full;
  full.reserve(ranking.size());
  for (CandidateId c : ranking) full.push_back(to_full[static_cast<std::size_t>(c)]);
  return full;
}

ScoreTable rank_table(int round, const CandidateMask& mask,
                      const std::vector<CandidateId>& ranking) {
  std::vector<Weight> position(mask.size(), 0);
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    position[static_cast<std::size_t>(ranking[i])] = static_cast<Weight>(i) + 1;
  }
  return make_score_table(round, mask, position);
}

EliminationTrace demo_trace(Combinator combinator, DemoRule base, const Profile& profile,
                            const TieBreakPolicy& policy) {
  profile.validate();
  policy.validate(profile);
  demo_validate(base, profile);
  std::string label = std::string(combinator == Combinator::Eliminate ? "eliminate:" : "divide:") +
                      std::string(demo_id(base));
  EliminationTrace trace = make_trace(profile, std::move(label), "rank");
  CandidateMask mask = full_mask(profile);
  if (profile.num_candidates() == 1) {
    trace.winner = 0;
    return trace;
  }
  int round = 1;
  while (mask_count(mask) > 1) {
    std::vector<CandidateId> ranking = demo_ranking_among(base, profile, mask);
    TraceRound r;
    r.round = round;
    r.remaining = remaining_ids(mask);
    r.scores = rank_table(round, mask, ranking);
    if (combinator == Combinator::Eliminate) {
      r.eliminated = {ranking.back()};
    } else {
      std::size_t cut = ranking.size() / 2;
      r.eliminated.assign(ranking.end() - static_cast<std::ptrdiff_t>(cut), ranking.end());
      std::sort(r.eliminated.begin(), r.eliminated.end());
    }
    r.reason = StopReason::LoserEliminated;
    for (CandidateId c : r.eliminated) mask[static_cast<std::size_t>(c)] = 0;
    trace.rounds.push_back(std::move(r));
    ++round;
  }
  TraceRound last;
  last.round = round;
  last.remaining = remaining_ids(mask);
  last.scores = rank_table(round, mask, {last.remaining.front()});
  last.reason = StopReason::OneLeft;
  trace.rounds.push_back(std::move(last));
  trace.winner = remaining_ids(mask).front();
  return trace;
}

}  // namespace

RuleSpec RuleSpec::parse(std::string_view text) {
  RuleSpec spec;
  std::string_view base_text = text;
  if (text == "coombs") {
    spec.combinator = Combinator::Coombs;
    spec.validate();
    return spec;
  }
  constexpr std::string_view kEliminate = "eliminate:";
  constexpr std::string_view kDivide = "divide:";
  constexpr std::string_view kSequential = "sequential:";
  if (text.starts_with(kEliminate)) {
    spec.combinator = Combinator::Eliminate;
    base_text = text.substr(kEliminate.size());
  } else if (text.starts_with(kDivide)) {
    spec.combinator = Combinator::Divide;
    base_text = text.substr(kDivide.size());
  } else if (text.starts_with(kSequential)) {
    spec.combinator = Combinator::Sequential;
    base_text = text.substr(kSequential.size());
  }
  if (auto demo = parse_demo_id(base_text)) {
    spec.demo = *demo;
  } else {
    spec.base = RuleFamily::parse(base_text);
  }
  spec.validate();
  return spec;
}

std::string RuleSpec::label() const {
  if (combinator == Combinator::Coombs) return "coombs";
  std::string base_text = demo ? std::string(demo_id(*demo)) : base->label();
  switch (combinator) {
    case Combinator::None: return base_text;
    case Combinator::Eliminate: return "eliminate:" + base_text;
    case Combinator::Divide: return "divide:" + base_text;
    case Combinator::Sequential: return "sequential:" + base_text;
    case Combinator::Coombs: break;
  }
  throw std::logic_error("unreachable");
}

void RuleSpec::validate() const {
  if (base && demo) throw std::invalid_argument("rule has two bases");
  if (combinator == Combinator::Coombs) {
    if (base || demo) throw std::invalid_argument("coombs takes no base");
    return;
  }
  if (!base && !demo) throw std::invalid_argument("rule needs a base");
  if (combinator == Combinator::Sequential && demo) {
    throw std::invalid_argument("sequential takes a scoring base");
  }
}

std::string_view stop_reason_label(StopReason reason) {
  switch (reason) {
    case StopReason::LoserEliminated: return "loser-eliminated";
    case StopReason::MajorityReached: return "majority-reached";
    case StopReason::OneLeft: return "one-left";
    case StopReason::AllAtMean: return "all-at-mean";
  }
  throw std::logic_error("unreachable");
}

LoserDirection base_direction(const RuleFamily& family) {
  return family.kind == ScoringKind::Veto ? LoserDirection::MaxScoreLoses
                                          : LoserDirection::MinScoreLoses;
}

std::vector<Weight> base_scores_among(const Profile& profile,
                                      const CandidateMask& remaining,
                                      const RuleFamily& family) {
  if (family.kind == ScoringKind::Veto) return veto_scores_among(profile, remaining);
  return positional_scores_among(profile, remaining,
                                 instantiate(family, mask_count(remaining)));
}

PositionalResult run_positional(const Profile& profile, const RuleFamily& family,
                                const TieBreakPolicy& policy) {
  profile.validate();
  policy.validate(profile);
  std::vector<Weight> scores =
      positional_scores(profile, instantiate(family, profile.num_candidates()));
  PositionalResult result;
  result.scores = make_score_table(1, full_mask(profile), scores);
  result.ranking.resize(profile.roster.size());
  for (std::size_t i = 0; i < result.ranking.size(); ++i) {
    result.ranking[i] = static_cast<CandidateId>(i);
  }
  std::vector<int> protection(profile.roster.size(), 0);
  for (std::size_t i = 0; i < policy.priority.size(); ++i) {
    // Later priority entries die later under eliminate-earliest, so they
    // rank higher on ties; the other convention protects early entries.
    int rank = policy.convention == TieConvention::EliminateEarliest
                   ? static_cast<int>(i)
                   : static_cast<int>(policy.priority.size() - i);
    protection[static_cast<std::size_t>(policy.priority[i])] = rank;
  }
  std::stable_sort(result.ranking.begin(), result.ranking.end(),
                   [&](CandidateId x, CandidateId y) {
                     if (scores[static_cast<std::size_t>(x)] !=
                         scores[static_cast<std::size_t>(y)]) {
                       return scores[static_cast<std::size_t>(x)] >
                              scores[static_cast<std::size_t>(y)];
                     }
                     return protection[static_cast<std::size_t>(x)] >
                            protection[static_cast<std::size_t>(y)];
                   });
  return result;
}

EliminationTrace run_eliminate(const RuleFamily& base, const Profile& profile,
                               const TieBreakPolicy& policy) {
  profile.validate();
  policy.validate(profile);
  const bool veto_kind = base.kind == ScoringKind::Veto;
  EliminationTrace trace = make_trace(profile, "eliminate:" + base.label(),
                                      veto_kind ? "veto" : "positional");
  CandidateMask mask = full_mask(profile);
  if (profile.num_candidates() == 1) {
    trace.winner = 0;
    return trace;
  }
  int round = 1;
  while (mask_count(mask) > 1) {
    std::vector<Weight> scores = base_scores_among(profile, mask, base);
    TraceRound r;
    r.round = round;
    r.remaining = remaining_ids(mask);
    r.scores = make_score_table(round, mask, scores);
    r.eliminated = {select_loser(r.scores, policy, base_direction(base))};
    r.reason = StopReason::LoserEliminated;
    mask[static_cast<std::size_t>(r.eliminated.front())] = 0;
    trace.rounds.push_back(std::move(r));
    ++round;
  }
  TraceRound last;
  last.round = round;
  last.remaining = remaining_ids(mask);
  last.scores = make_score_table(round, mask, base_scores_among(profile, mask, base));
  last.reason = StopReason::OneLeft;
  trace.rounds.push_back(std::move(last));
  trace.winner = remaining_ids(mask).front();
  return trace;
}

EliminationTrace run_eliminate(DemoRule base, const Profile& profile,
                               const TieBreakPolicy& policy) {
  return demo_trace(Combinator::Eliminate, base, profile, policy);
}

EliminationTrace run_divide(const RuleFamily& base, const Profile& profile,
                            const TieBreakPolicy& policy) {
  profile.validate();
  policy.validate(profile);
  EliminationTrace trace = make_trace(profile, "divide:" + base.label(), "positional");
  CandidateMask mask = full_mask(profile);
  if (profile.num_candidates() == 1) {
    trace.winner = 0;
    return trace;
  }
  int round = 1;
  while (mask_count(mask) > 1) {
    const int count = mask_count(mask);
    std::vector<Weight> scores =
        positional_scores_among(profile, mask, instantiate(base, count));
    Weight sum = 0;
    for (std::size_t i = 0; i < mask.size(); ++i) {
      if (mask[i]) sum += scores[i];
    }
    TraceRound r;
    r.round = round;
    r.remaining = remaining_ids(mask);
    r.scores = make_score_table(round, mask, scores);
    // Mean-or-below cut, compared without fractions.
    std::vector<CandidateId> cut;
    for (CandidateId c : r.remaining) {
      if (static_cast<Weight>(count) * scores[static_cast<std::size_t>(c)] <= sum) {
        cut.push_back(c);
      }
    }
    if (static_cast<int>(cut.size()) == count) {
      r.reason = StopReason::AllAtMean;
      trace.winner = most_protected(mask, policy);
      trace.rounds.push_back(std::move(r));
      return trace;
    }
    r.eliminated = std::move(cut);
    r.reason = StopReason::LoserEliminated;
    for (CandidateId c : r.eliminated) mask[static_cast<std::size_t>(c)] = 0;
    trace.rounds.push_back(std::move(r));
    ++round;
  }
  TraceRound last;
  last.round = round;
  last.remaining = remaining_ids(mask);
  last.scores = make_score_table(round, mask,
                                 positional_scores_among(profile, mask, instantiate(base, 1)));
  last.reason = StopReason::OneLeft;
  trace.rounds.push_back(std::move(last));
  trace.winner = remaining_ids(mask).front();
  return trace;
}

EliminationTrace run_divide(DemoRule base, const Profile& profile,
                            const TieBreakPolicy& policy) {
  return demo_trace(Combinator::Divide, base, profile, policy);
}

EliminationTrace run_coombs(const Profile& profile, const TieBreakPolicy& policy) {
  profile.validate();
  policy.validate(profile);
  EliminationTrace trace = make_trace(profile, "coombs", "veto");
  const Weight total = profile.total_weight();
  CandidateMask mask = full_mask(profile);
  int round = 1;
  while (true) {
    std::optional<CandidateId> majority = majority_winner_among(profile, mask, total);
    TraceRound r;
    r.round = round;
    r.remaining = remaining_ids(mask);
    r.scores = make_score_table(round, mask, veto_scores_among(profile, mask));
    if (majority) {
      r.reason = StopReason::MajorityReached;
      trace.rounds.push_back(std::move(r));
      trace.winner = *majority;
      return trace;
    }
    r.eliminated = {select_loser(r.scores, policy, LoserDirection::MaxScoreLoses)};
    r.reason = StopReason::LoserEliminated;
    mask[static_cast<std::size_t>(r.eliminated.front())] = 0;
    trace.rounds.push_back(std::move(r));
    ++round;
  }
}

EliminationTrace run_sequential(const RuleFamily& base, const Profile& profile,
                                const TieBreakPolicy& policy,
                                SequentialStrategy strategy) {
  profile.validate();
  policy.validate(profile);
  const bool veto_kind = base.kind == ScoringKind::Veto;
  EliminationTrace trace = make_trace(profile, "sequential:" + base.label(),
                                      veto_kind ? "veto" : "positional");
  CandidateMask mask = full_mask(profile);
  if (profile.num_candidates() == 1) {
    trace.winner = 0;
    return trace;
  }
  int round = 1;
  while (mask_count(mask) > 1) {
    std::vector<Weight> scores = base_scores_among(profile, mask, base);
    if (strategy) {
      std::vector<CandidateId> ballot = strategy(mask, trace);
      const int count = mask_count(mask);
      if (static_cast<int>(ballot.size()) != count) {
        throw std::invalid_argument("strategy ballot must rank the remaining candidates");
      }
      std::vector<std::uint8_t> seen(mask.size(), 0);
      for (CandidateId c : ballot) {
        if (c < 0 || static_cast<std::size_t>(c) >= mask.size() ||
            !mask[static_cast<std::size_t>(c)] || seen[static_cast<std::size_t>(c)]) {
          throw std::invalid_argument("strategy ballot must rank the remaining candidates");
        }
        seen[static_cast<std::size_t>(c)] = 1;
      }
      if (veto_kind) {
        scores[static_cast<std::size_t>(ballot.back())] += 1;
      } else {
        ScoringVector vec = instantiate(base, count);
        for (std::size_t i = 0; i < ballot.size(); ++i) {
          scores[static_cast<std::size_t>(ballot[i])] += vec[i];
        }
      }
    }
    TraceRound r;
    r.round = round;
    r.remaining = remaining_ids(mask);
    r.scores = make_score_table(round, mask, scores);
    r.eliminated = {select_loser(r.scores, policy, base_direction(base))};
    r.reason = StopReason::LoserEliminated;
    mask[static_cast<std::size_t>(r.eliminated.front())] = 0;
    trace.rounds.push_back(std::move(r));
    ++round;
  }
  TraceRound last;
  last.round = round;
  last.remaining = remaining_ids(mask);
  last.scores = make_score_table(round, mask, base_scores_among(profile, mask, base));
  last.reason = StopReason::OneLeft;
  trace.rounds.push_back(std::move(last));
  trace.winner = remaining_ids(mask).front();
  return trace;
}

std::vector<CandidateId> run_demo(DemoRule rule, const Profile& profile) {
  profile.validate();
  demo_validate(rule, profile);
  return demo_ranking(rule, profile);
}

EliminationTrace run_rule(const RuleSpec& spec, const Profile& profile,
                          const TieBreakPolicy& policy, SequentialStrategy strategy) {
  spec.validate();
  if (strategy && spec.combinator != Combinator::Sequential) {
    throw std::invalid_argument("strategy requires a sequential rule");
  }
  switch (spec.combinator) {
    case Combinator::None:
      throw std::invalid_argument("bare base rule has no elimination trace");
    case Combinator::Eliminate:
      return spec.demo ? run_eliminate(*spec.demo, profile, policy)
                       : run_eliminate(*spec.base, profile, policy);
    case Combinator::Divide:
      return spec.demo ? run_divide(*spec.demo, profile, policy)
                       : run_divide(*spec.base, profile, policy);
    case Combinator::Sequential:
      return run_sequential(*spec.base, profile, policy, std::move(strategy));
    case Combinator::Coombs:
      return run_coombs(profile, policy);
  }
  throw std::logic_error("unreachable");
}

std::string trace_to_text(const EliminationTrace& trace) {
  std::ostringstream out;
  out << "rule: " << trace.rule_label << "\n";
  auto name = [&](CandidateId c) -> const std::string& {
    return trace.roster[static_cast<std::size_t>(c)];
  };
  for (const TraceRound& r : trace.rounds) {
    out << "round " << r.round << " | remaining: ";
    for (std::size_t i = 0; i < r.remaining.size(); ++i) {
      if (i) out << ",";
      out << name(r.remaining[i]);
    }
    out << " | " << trace.score_kind << ":";
    for (const ScoreEntry& e : r.scores.entries) {
      out << " " << name(e.candidate) << "=" << e.score;
    }
    if (!r.eliminated.empty()) {
      out << " | eliminated: ";
      for (std::size_t i = 0; i < r.eliminated.size(); ++i) {
        if (i) out << ",";
        out << name(r.eliminated[i]);
      }
    }
    out << " | " << stop_reason_label(r.reason) << "\n";
  }
  out << "winner: " << name(trace.winner) << "\n";
  return out.str();
}

std::string trace_to_json_string(const EliminationTrace& trace) {
  nlohmann::ordered_json doc;
  doc["rule"] = trace.rule_label;
  doc["score_kind"] = trace.score_kind;
  auto name = [&](CandidateId c) -> const std::string& {
    return trace.roster[static_cast<std::size_t>(c)];
  };
  doc["rounds"] = nlohmann::ordered_json::array();
  for (const TraceRound& r : trace.rounds) {
    nlohmann::ordered_json jr;
    jr["round"] = r.round;
    jr["remaining"] = nlohmann::ordered_json::array();
    for (CandidateId c : r.remaining) jr["remaining"].push_back(name(c));
    jr["scores"] = nlohmann::ordered_json::object();
    for (const ScoreEntry& e : r.scores.entries) jr["scores"][name(e.candidate)] = e.score;
    jr["eliminated"] = nlohmann::ordered_json::array();
    for (CandidateId c : r.eliminated) jr["eliminated"].push_back(name(c));
    jr["reason"] = std::string(stop_reason_label(r.reason));
    doc["rounds"].push_back(std::move(jr));
  }
  doc["winner"] = name(trace.winner);
  return doc.dump(2);
}

}  // namespace elimvote
