#include "elimvote/manipulation.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <unordered_map>

namespace elimvote {

namespace {

struct SearchContext {
  std::uint64_t limit;
  SearchStats* stats;
  void charge(std::uint64_t rounds = 1) {
    stats->nodes += rounds;
    if (stats->nodes > limit) throw BudgetExceeded(limit, stats->nodes);
  }
};

std::uint64_t eliminations_in(const EliminationTrace& trace) {
  std::uint64_t count = 0;
  for (const TraceRound& r : trace.rounds) {
    if (r.reason == StopReason::LoserEliminated) ++count;
  }
  return count;
}

std::string mask_key(const CandidateMask& mask, CandidateId active) {
  std::string key(mask.begin(), mask.end());
  key.push_back(static_cast<char>(active & 0xff));
  key.push_back(static_cast<char>((active >> 8) & 0xff));
  return key;
}

CandidateId sole_remaining(const CandidateMask& mask) {
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) return static_cast<CandidateId>(i);
  }
  throw std::logic_error("empty mask");
}

CandidateId deterministic_winner(const RuleSpec& rule, const Profile& profile,
                                 const TieBreakPolicy& policy, SearchContext& ctx) {
  switch (rule.combinator) {
    case Combinator::None: {
      ctx.charge();
      if (rule.demo) return run_demo(*rule.demo, profile).front();
      return run_positional(profile, *rule.base, policy).ranking.front();
    }
    case Combinator::Eliminate:
    case Combinator::Sequential: {
      if (rule.demo) {
        EliminationTrace trace = run_eliminate(*rule.demo, profile, policy);
        ctx.charge(eliminations_in(trace));
        return trace.winner;
      }
      const RuleFamily& base = *rule.base;
      const LoserDirection dir = base_direction(base);
      CandidateMask mask = full_mask(profile);
      int count = profile.num_candidates();
      while (count > 1) {
        ctx.charge();
        ScoreTable table = make_score_table(0, mask, base_scores_among(profile, mask, base));
        CandidateId loser = select_loser(table, policy, dir);
        mask[static_cast<std::size_t>(loser)] = 0;
        --count;
      }
      return sole_remaining(mask);
    }
    case Combinator::Divide: {
      EliminationTrace trace = rule.demo ? run_divide(*rule.demo, profile, policy)
                                         : run_divide(*rule.base, profile, policy);
      ctx.charge(eliminations_in(trace));
      return trace.winner;
    }
    case Combinator::Coombs: {
      const Weight total = profile.total_weight();
      CandidateMask mask = full_mask(profile);
      while (true) {
        if (std::optional<CandidateId> majority = majority_winner_among(profile, mask, total)) {
          return *majority;
        }
        ctx.charge();
        ScoreTable table = make_score_table(0, mask, veto_scores_among(profile, mask));
        CandidateId loser = select_loser(table, policy, LoserDirection::MaxScoreLoses);
        mask[static_cast<std::size_t>(loser)] = 0;
      }
    }
  }
  throw std::logic_error("unreachable");
}

// Branches over every tied loser; any branch electing preferred counts.
struct OptimisticSearch {
  const RuleSpec& rule;
  const Profile& profile;
  const TieBreakPolicy& policy;
  CandidateId preferred;
  SearchContext& ctx;
  Weight total = 0;
  std::unordered_map<std::string, bool> memo;

  bool eliminate_like(CandidateMask mask) {
    if (rule.combinator == Combinator::Coombs) {
      if (std::optional<CandidateId> majority = majority_winner_among(profile, mask, total)) {
        return *majority == preferred;
      }
    } else if (mask_count(mask) == 1) {
      return sole_remaining(mask) == preferred;
    }
    std::string key = mask_key(mask, 0);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    ctx.charge();
    std::vector<Weight> scores;
    LoserDirection dir;
    if (rule.combinator == Combinator::Coombs) {
      scores = veto_scores_among(profile, mask);
      dir = LoserDirection::MaxScoreLoses;
    } else {
      scores = base_scores_among(profile, mask, *rule.base);
      dir = base_direction(*rule.base);
    }
    bool result = false;
    for (CandidateId t : tied_losers(make_score_table(0, mask, scores), dir)) {
      if (t == preferred) continue;
      CandidateMask next = mask;
      next[static_cast<std::size_t>(t)] = 0;
      if (eliminate_like(std::move(next))) {
        result = true;
        break;
      }
    }
    memo.emplace(std::move(key), result);
    return result;
  }

  bool divide_scoring() {
    CandidateMask mask = full_mask(profile);
    int count = profile.num_candidates();
    while (count > 1) {
      ctx.charge();
      std::vector<Weight> scores =
          positional_scores_among(profile, mask, instantiate(*rule.base, count));
      Weight sum = 0;
      for (std::size_t i = 0; i < mask.size(); ++i) {
        if (mask[i]) sum += scores[i];
      }
      std::vector<CandidateId> cut;
      for (std::size_t i = 0; i < mask.size(); ++i) {
        if (mask[i] && static_cast<Weight>(count) * scores[i] <= sum) {
          cut.push_back(static_cast<CandidateId>(i));
        }
      }
      // All tied at the mean: the favored candidate takes any remaining slot.
      if (static_cast<int>(cut.size()) == count) {
        return mask[static_cast<std::size_t>(preferred)] != 0;
      }
      for (CandidateId c : cut) {
        if (c == preferred) return false;
        mask[static_cast<std::size_t>(c)] = 0;
        --count;
      }
    }
    return sole_remaining(mask) == preferred;
  }

  bool run() {
    switch (rule.combinator) {
      case Combinator::None:
        return deterministic_winner(rule, profile, policy, ctx) == preferred;
      case Combinator::Eliminate:
      case Combinator::Sequential:
        if (rule.demo) {
          // Demo rankings are strict, so no tie branch exists.
          return deterministic_winner(rule, profile, policy, ctx) == preferred;
        }
        return eliminate_like(full_mask(profile));
      case Combinator::Divide:
        if (rule.demo) {
          return deterministic_winner(rule, profile, policy, ctx) == preferred;
        }
        return divide_scoring();
      case Combinator::Coombs:
        total = profile.total_weight();
        return eliminate_like(full_mask(profile));
    }
    throw std::logic_error("unreachable");
  }
};

bool preferred_wins_impl(const RuleSpec& rule, const Profile& profile,
                         const TieBreakPolicy& policy, CandidateId preferred,
                         SearchContext& ctx) {
  if (!policy.optimistic_for) {
    return deterministic_winner(rule, profile, policy, ctx) == preferred;
  }
  OptimisticSearch search{rule, profile, policy, preferred, ctx};
  return search.run();
}

ManipulationResult brute_impl(const ManipulationQuery& query, SearchContext& ctx) {
  ManipulationResult result;
  const int k = query.manipulators;
  if (k == 0) {
    result.decision =
        preferred_wins_impl(query.rule, query.profile, query.policy, query.preferred, ctx);
    return result;
  }
  const int m = query.profile.num_candidates();
  std::vector<CandidateId> identity(static_cast<std::size_t>(m));
  std::iota(identity.begin(), identity.end(), 0);
  // Non-decreasing tuples of rankings enumerate ballot multisets in
  // lexicographic order, so the first hit is the canonical witness.
  std::vector<std::vector<CandidateId>> current(static_cast<std::size_t>(k), identity);
  Profile trial = query.profile;
  const std::size_t base_count = trial.ballots.size();
  while (true) {
    trial.ballots.resize(base_count);
    for (const std::vector<CandidateId>& ranking : current) {
      trial.ballots.push_back({ranking, 1});
    }
    ctx.stats->ballots_tried += 1;
    if (preferred_wins_impl(query.rule, trial, query.policy, query.preferred, ctx)) {
      // Soundness gate: replay the witnessed profile outside the budget.
      SearchStats replay_stats;
      SearchContext replay{std::numeric_limits<std::uint64_t>::max(), &replay_stats};
      if (!preferred_wins_impl(query.rule, trial, query.policy, query.preferred, replay)) {
        throw std::logic_error("witness failed engine verification");
      }
      result.decision = true;
      for (const std::vector<CandidateId>& ranking : current) {
        result.witness.push_back({ranking, 1});
      }
      return result;
    }
    int j = k - 1;
    while (j >= 0 && !std::next_permutation(current[static_cast<std::size_t>(j)].begin(),
                                            current[static_cast<std::size_t>(j)].end())) {
      --j;
    }
    if (j < 0) break;
    for (int t = j + 1; t < k; ++t) {
      current[static_cast<std::size_t>(t)] = current[static_cast<std::size_t>(j)];
    }
  }
  result.decision = false;
  return result;
}

// Target-sequence search shared by the veto and stv frontier variants.
struct FrontierSearch {
  const Profile& profile;
  const TieBreakPolicy& policy;
  CandidateId preferred;
  FrontierVariant variant;
  SearchContext& ctx;
  std::unordered_map<std::string, bool> memo;

  bool target_allowed(CandidateId t) const {
    return variant == FrontierVariant::Stv || t != preferred;
  }

  // Simulates one round with the manipulator acting through active; returns
  // the loser.
  CandidateId round_loser(const CandidateMask& mask, CandidateId active) {
    ctx.charge();
    std::vector<Weight> scores = variant == FrontierVariant::EliminateVeto
                                     ? veto_scores_among(profile, mask)
                                     : top_counts_among(profile, mask);
    scores[static_cast<std::size_t>(active)] += 1;
    LoserDirection dir = variant == FrontierVariant::EliminateVeto
                             ? LoserDirection::MaxScoreLoses
                             : LoserDirection::MinScoreLoses;
    return select_loser(make_score_table(0, mask, scores), policy, dir);
  }

  bool solve(const CandidateMask& mask, CandidateId active) {
    std::string key = mask_key(mask, active);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    CandidateId loser = round_loser(mask, active);
    bool result;
    if (loser == preferred) {
      result = false;
    } else {
      CandidateMask next = mask;
      next[static_cast<std::size_t>(loser)] = 0;
      if (mask_count(next) == 1) {
        result = true;
      } else if (loser != active) {
        result = solve(next, active);
      } else {
        result = false;
        for (std::size_t t = 0; t < next.size(); ++t) {
          if (next[t] && target_allowed(static_cast<CandidateId>(t)) &&
              solve(next, static_cast<CandidateId>(t))) {
            result = true;
            break;
          }
        }
      }
    }
    memo.emplace(std::move(key), result);
    return result;
  }

  // Lexicographically smallest accepting target sequence, memo guided.
  std::vector<CandidateId> rewalk() {
    CandidateMask mask = full_mask(profile);
    std::vector<CandidateId> targets;
    CandidateId active = -1;
    for (std::size_t t = 0; t < mask.size(); ++t) {
      if (mask[t] && target_allowed(static_cast<CandidateId>(t)) &&
          solve(mask, static_cast<CandidateId>(t))) {
        active = static_cast<CandidateId>(t);
        break;
      }
    }
    if (active < 0) throw std::logic_error("accepted search lost its witness");
    targets.push_back(active);
    while (true) {
      CandidateId loser = round_loser(mask, active);
      mask[static_cast<std::size_t>(loser)] = 0;
      if (mask_count(mask) == 1) return targets;
      if (loser != active) continue;
      active = -1;
      for (std::size_t t = 0; t < mask.size(); ++t) {
        if (mask[t] && target_allowed(static_cast<CandidateId>(t)) &&
            solve(mask, static_cast<CandidateId>(t))) {
          active = static_cast<CandidateId>(t);
          break;
        }
      }
      if (active < 0) throw std::logic_error("accepted search lost its witness");
      targets.push_back(active);
    }
  }

  // Ballot realizing the target sequence: each target is hit exactly while
  // it is the deepest survivor (veto) or the highest survivor (stv).
  Ballot rebuild(const std::vector<CandidateId>& targets) const {
    std::vector<std::uint8_t> is_target(profile.roster.size(), 0);
    for (CandidateId t : targets) is_target[static_cast<std::size_t>(t)] = 1;
    std::vector<CandidateId> others;
    for (CandidateId c : policy.priority) {
      if (c != preferred && !is_target[static_cast<std::size_t>(c)]) others.push_back(c);
    }
    Ballot ballot;
    ballot.multiplicity = 1;
    if (variant == FrontierVariant::EliminateVeto) {
      ballot.ranking.push_back(preferred);
      ballot.ranking.insert(ballot.ranking.end(), others.begin(), others.end());
      for (auto it = targets.rbegin(); it != targets.rend(); ++it) {
        ballot.ranking.push_back(*it);
      }
    } else {
      ballot.ranking = targets;
      if (!is_target[static_cast<std::size_t>(preferred)]) {
        ballot.ranking.push_back(preferred);
      }
      ballot.ranking.insert(ballot.ranking.end(), others.begin(), others.end());
    }
    return ballot;
  }
};

std::vector<std::vector<CandidateId>> round_ballots(const RuleFamily& base,
                                                    const CandidateMask& mask) {
  std::vector<CandidateId> remaining;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) remaining.push_back(static_cast<CandidateId>(i));
  }
  std::vector<std::vector<CandidateId>> options;
  if (base.kind == ScoringKind::Plurality) {
    // Only the top slot matters.
    for (CandidateId top : remaining) {
      std::vector<CandidateId> ballot{top};
      for (CandidateId c : remaining) {
        if (c != top) ballot.push_back(c);
      }
      options.push_back(std::move(ballot));
    }
  } else if (base.kind == ScoringKind::Veto) {
    // Only the bottom slot matters.
    for (CandidateId bottom : remaining) {
      std::vector<CandidateId> ballot;
      for (CandidateId c : remaining) {
        if (c != bottom) ballot.push_back(c);
      }
      ballot.push_back(bottom);
      options.push_back(std::move(ballot));
    }
  } else {
    std::vector<CandidateId> perm = remaining;
    do {
      options.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return options;
}

struct SequentialSearch {
  const Profile& profile;
  const RuleFamily& base;
  const TieBreakPolicy& policy;
  CandidateId preferred;
  SearchContext& ctx;
  LoserDirection dir;
  std::unordered_map<std::string, bool> memo;

  CandidateId round_loser(const CandidateMask& mask, const std::vector<CandidateId>& ballot) {
    ctx.charge();
    std::vector<Weight> scores = base_scores_among(profile, mask, base);
    if (base.kind == ScoringKind::Veto) {
      scores[static_cast<std::size_t>(ballot.back())] += 1;
    } else {
      ScoringVector vec = instantiate(base, mask_count(mask));
      for (std::size_t i = 0; i < ballot.size(); ++i) {
        scores[static_cast<std::size_t>(ballot[i])] += vec[i];
      }
    }
    return select_loser(make_score_table(0, mask, scores), policy, dir);
  }

  bool solve(const CandidateMask& mask) {
    if (mask_count(mask) == 1) return sole_remaining(mask) == preferred;
    std::string key = mask_key(mask, 0);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    bool result = false;
    for (const std::vector<CandidateId>& ballot : round_ballots(base, mask)) {
      CandidateId loser = round_loser(mask, ballot);
      if (loser == preferred) continue;
      CandidateMask next = mask;
      next[static_cast<std::size_t>(loser)] = 0;
      if (solve(next)) {
        result = true;
        break;
      }
    }
    memo.emplace(std::move(key), result);
    return result;
  }

  std::vector<Ballot> rewalk() {
    std::vector<Ballot> plan;
    CandidateMask mask = full_mask(profile);
    while (mask_count(mask) > 1) {
      bool advanced = false;
      for (const std::vector<CandidateId>& ballot : round_ballots(base, mask)) {
        CandidateId loser = round_loser(mask, ballot);
        if (loser == preferred) continue;
        CandidateMask next = mask;
        next[static_cast<std::size_t>(loser)] = 0;
        if (solve(next)) {
          plan.push_back({ballot, 1});
          mask = std::move(next);
          advanced = true;
          break;
        }
      }
      if (!advanced) throw std::logic_error("accepted search lost its witness");
    }
    return plan;
  }
};

}  // namespace

BudgetExceeded::BudgetExceeded(std::uint64_t limit, std::uint64_t used)
    : std::runtime_error("search budget exceeded: " + std::to_string(used) + " of " +
                         std::to_string(limit) + " nodes"),
      limit_(limit),
      used_(used) {}

void ManipulationQuery::validate() const {
  rule.validate();
  profile.validate();
  policy.validate(profile);
  if (preferred < 0 || preferred >= profile.num_candidates()) {
    throw std::invalid_argument("preferred candidate not in roster");
  }
  if (manipulators < 0) throw std::invalid_argument("manipulator count must be nonnegative");
}

bool preferred_wins(const RuleSpec& rule, const Profile& profile,
                    const TieBreakPolicy& policy, CandidateId preferred,
                    const SearchBudget& budget, SearchStats* stats) {
  rule.validate();
  profile.validate();
  policy.validate(profile);
  if (preferred < 0 || preferred >= profile.num_candidates()) {
    throw std::invalid_argument("preferred candidate not in roster");
  }
  SearchStats local;
  SearchContext ctx{budget.max_nodes, stats ? stats : &local};
  return preferred_wins_impl(rule, profile, policy, preferred, ctx);
}

ManipulationResult find_manipulation_brute(const ManipulationQuery& query,
                                           const SearchBudget& budget) {
  query.validate();
  SearchStats stats;
  SearchContext ctx{budget.max_nodes, &stats};
  ManipulationResult result = brute_impl(query, ctx);
  result.stats = stats;
  return result;
}

ManipulationResult find_manipulation_frontier(FrontierVariant variant,
                                              const Profile& profile,
                                              CandidateId preferred,
                                              const TieBreakPolicy& policy,
                                              const SearchBudget& budget) {
  profile.validate();
  policy.validate(profile);
  if (policy.optimistic_for) {
    throw std::invalid_argument("frontier search needs a deterministic policy");
  }
  if (preferred < 0 || preferred >= profile.num_candidates()) {
    throw std::invalid_argument("preferred candidate not in roster");
  }
  SearchStats stats;
  SearchContext ctx{budget.max_nodes, &stats};
  ManipulationResult result;
  if (profile.num_candidates() == 1) {
    result.decision = true;
    result.witness.push_back({{preferred}, 1});
    result.stats = stats;
    return result;
  }
  FrontierSearch search{profile, policy, preferred, variant, ctx};
  CandidateMask mask = full_mask(profile);
  bool found = false;
  for (std::size_t t = 0; t < mask.size() && !found; ++t) {
    if (search.target_allowed(static_cast<CandidateId>(t))) {
      found = search.solve(mask, static_cast<CandidateId>(t));
    }
  }
  if (found) {
    Ballot ballot = search.rebuild(search.rewalk());
    Profile check = profile;
    check.ballots.push_back(ballot);
    const RuleFamily base = variant == FrontierVariant::EliminateVeto ? RuleFamily::veto()
                                                                      : RuleFamily::plurality();
    if (run_eliminate(base, check, policy).winner != preferred) {
      throw std::logic_error("witness failed engine verification");
    }
    result.decision = true;
    result.witness.push_back(std::move(ballot));
    result.stats.ballots_tried = 1;
  }
  result.stats.nodes = stats.nodes;
  return result;
}

std::optional<int> min_coalition(const RuleSpec& rule, const Profile& profile,
                                 CandidateId preferred, int k_max,
                                 const TieBreakPolicy& policy,
                                 const SearchBudget& budget) {
  if (k_max < 0) throw std::invalid_argument("coalition bound must be nonnegative");
  SearchStats stats;
  SearchContext ctx{budget.max_nodes, &stats};
  for (int k = 0; k <= k_max; ++k) {
    ManipulationQuery query{rule, profile, preferred, k, policy};
    query.validate();
    try {
      if (brute_impl(query, ctx).decision) return k;
    } catch (BudgetExceeded& e) {
      e.completed_k = k - 1;
      throw;
    }
  }
  return std::nullopt;
}

ManipulationResult sequential_manipulate(const RuleFamily& base, const Profile& profile,
                                         CandidateId preferred,
                                         const TieBreakPolicy& policy,
                                         const SearchBudget& budget) {
  profile.validate();
  policy.validate(profile);
  if (policy.optimistic_for) {
    throw std::invalid_argument("sequential search needs a deterministic policy");
  }
  if (preferred < 0 || preferred >= profile.num_candidates()) {
    throw std::invalid_argument("preferred candidate not in roster");
  }
  SearchStats stats;
  SearchContext ctx{budget.max_nodes, &stats};
  ManipulationResult result;
  result.witness_is_per_round = true;
  if (profile.num_candidates() == 1) {
    result.decision = preferred == 0;
    result.stats = stats;
    return result;
  }
  SequentialSearch search{profile, base, policy, preferred, ctx, base_direction(base)};
  if (search.solve(full_mask(profile))) {
    result.witness = search.rewalk();
    const std::vector<Ballot>& plan = result.witness;
    SequentialStrategy scripted = [&plan](const CandidateMask&, const EliminationTrace& so_far) {
      return plan.at(so_far.rounds.size()).ranking;
    };
    if (run_sequential(base, profile, policy, scripted).winner != preferred) {
      throw std::logic_error("witness failed engine verification");
    }
    result.decision = true;
    result.stats.ballots_tried = static_cast<std::uint64_t>(result.witness.size());
  }
  result.stats.nodes = stats.nodes;
  return result;
}

}  // namespace elimvote
