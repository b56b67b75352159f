#include "elimvote/election.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace elimvote {

Weight Profile::total_weight() const {
  Weight total = 0;
  for (const Ballot& b : ballots) total += b.multiplicity;
  return total;
}

std::optional<CandidateId> Profile::find_candidate(std::string_view name) const {
  for (std::size_t i = 0; i < roster.size(); ++i) {
    if (roster[i] == name) return static_cast<CandidateId>(i);
  }
  return std::nullopt;
}

void Profile::validate() const {
  if (roster.empty()) throw std::invalid_argument("profile has no candidates");
  for (std::size_t i = 0; i < roster.size(); ++i) {
    if (roster[i].empty()) throw std::invalid_argument("empty candidate name");
    for (std::size_t j = i + 1; j < roster.size(); ++j) {
      if (roster[i] == roster[j]) {
        throw std::invalid_argument("duplicate candidate name: " + roster[i]);
      }
    }
  }
  const int c = num_candidates();
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(c));
  for (const Ballot& b : ballots) {
    if (b.multiplicity <= 0) {
      throw std::invalid_argument("ballot multiplicity must be positive");
    }
    if (static_cast<int>(b.ranking.size()) != c) {
      throw std::invalid_argument("ballot does not rank the full roster");
    }
    std::fill(seen.begin(), seen.end(), 0);
    for (CandidateId id : b.ranking) {
      if (id < 0 || id >= c) throw std::invalid_argument("ballot candidate id out of range");
      if (seen[static_cast<std::size_t>(id)]) {
        throw std::invalid_argument("duplicate candidate in ballot: " +
                                    roster[static_cast<std::size_t>(id)]);
      }
      seen[static_cast<std::size_t>(id)] = 1;
    }
  }
  if (total_weight() <= 0) throw std::invalid_argument("profile has no votes");
}

ParseError::ParseError(int line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message),
      line_(line) {}

TieBreakPolicy TieBreakPolicy::roster_order(const Profile& profile,
                                            TieConvention convention) {
  TieBreakPolicy policy;
  policy.priority.resize(profile.roster.size());
  for (std::size_t i = 0; i < profile.roster.size(); ++i) {
    policy.priority[i] = static_cast<CandidateId>(i);
  }
  policy.convention = convention;
  return policy;
}

void TieBreakPolicy::validate(const Profile& profile) const {
  const std::size_t c = profile.roster.size();
  if (priority.size() != c) {
    throw std::invalid_argument("tie-break priority must cover the roster");
  }
  std::vector<std::uint8_t> seen(c);
  for (CandidateId id : priority) {
    if (id < 0 || static_cast<std::size_t>(id) >= c || seen[static_cast<std::size_t>(id)]) {
      throw std::invalid_argument("tie-break priority is not a roster permutation");
    }
    seen[static_cast<std::size_t>(id)] = 1;
  }
  if (optimistic_for && (*optimistic_for < 0 || static_cast<std::size_t>(*optimistic_for) >= c)) {
    throw std::invalid_argument("optimistic candidate not in roster");
  }
}

bool ScoreTable::contains(CandidateId c) const {
  for (const ScoreEntry& e : entries) {
    if (e.candidate == c) return true;
  }
  return false;
}

Weight ScoreTable::score_of(CandidateId c) const {
  for (const ScoreEntry& e : entries) {
    if (e.candidate == c) return e.score;
  }
  throw std::out_of_range("candidate not in score table");
}

CandidateMask full_mask(const Profile& profile) {
  return CandidateMask(profile.roster.size(), 1);
}

int mask_count(const CandidateMask& mask) {
  int count = 0;
  for (std::uint8_t bit : mask) count += bit ? 1 : 0;
  return count;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

Profile parse_profile(const std::string& text) {
  Profile profile;
  bool have_header = false;
  int line_no = 0;
  std::istringstream in(text);
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (std::size_t hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    if (!have_header) {
      constexpr std::string_view kPrefix = "candidates:";
      if (!line.starts_with(kPrefix)) {
        throw ParseError(line_no, "expected 'candidates:' header");
      }
      for (std::string_view part : split(line.substr(kPrefix.size()), ',')) {
        std::string_view name = trim(part);
        if (name.empty()) throw ParseError(line_no, "empty candidate name");
        if (name.find_first_of(" \t>,:") != std::string_view::npos) {
          throw ParseError(line_no, "candidate name contains a reserved character: " +
                                        std::string(name));
        }
        if (profile.find_candidate(name)) {
          throw ParseError(line_no, "duplicate candidate name: " + std::string(name));
        }
        profile.roster.emplace_back(name);
      }
      if (profile.roster.empty()) throw ParseError(line_no, "empty candidate roster");
      have_header = true;
      continue;
    }

    std::size_t colon = line.find(':');
    if (colon == std::string_view::npos) {
      throw ParseError(line_no, "expected '<multiplicity>: ranking'");
    }
    std::string_view mult_text = trim(line.substr(0, colon));
    Weight multiplicity = 0;
    auto [ptr, ec] = std::from_chars(mult_text.data(), mult_text.data() + mult_text.size(),
                                     multiplicity);
    if (ec != std::errc() || ptr != mult_text.data() + mult_text.size()) {
      throw ParseError(line_no, "bad multiplicity: " + std::string(mult_text));
    }
    if (multiplicity <= 0) {
      throw ParseError(line_no, "multiplicity must be positive");
    }

    Ballot ballot;
    ballot.multiplicity = multiplicity;
    std::vector<std::uint8_t> seen(profile.roster.size());
    for (std::string_view part : split(line.substr(colon + 1), '>')) {
      std::string_view name = trim(part);
      if (name.empty()) throw ParseError(line_no, "empty candidate in ranking");
      std::optional<CandidateId> id = profile.find_candidate(name);
      if (!id) throw ParseError(line_no, "unknown candidate: " + std::string(name));
      if (seen[static_cast<std::size_t>(*id)]) {
        throw ParseError(line_no, "duplicate candidate in ranking: " + std::string(name));
      }
      seen[static_cast<std::size_t>(*id)] = 1;
      ballot.ranking.push_back(*id);
    }
    if (ballot.ranking.size() != profile.roster.size()) {
      for (std::size_t i = 0; i < seen.size(); ++i) {
        if (!seen[i]) {
          throw ParseError(line_no, "ranking omits candidate: " + profile.roster[i]);
        }
      }
    }
    profile.ballots.push_back(std::move(ballot));
  }
  if (!have_header) throw ParseError(line_no, "missing 'candidates:' header");
  if (profile.ballots.empty()) throw ParseError(line_no, "profile has no ballots");
  return profile;
}

std::string serialize_profile(const Profile& profile) {
  std::ostringstream out;
  out << "candidates: ";
  for (std::size_t i = 0; i < profile.roster.size(); ++i) {
    if (i) out << ",";
    out << profile.roster[i];
  }
  out << "\n";
  for (const Ballot& b : profile.ballots) {
    out << b.multiplicity << ": ";
    for (std::size_t i = 0; i < b.ranking.size(); ++i) {
      if (i) out << " > ";
      out << profile.roster[static_cast<std::size_t>(b.ranking[i])];
    }
    out << "\n";
  }
  return out.str();
}

Profile restrict_profile(const Profile& profile,
                         const std::vector<CandidateId>& removed) {
  const std::size_t c = profile.roster.size();
  std::vector<std::uint8_t> drop(c);
  for (CandidateId id : removed) {
    if (id < 0 || static_cast<std::size_t>(id) >= c) {
      throw std::invalid_argument("restrict: candidate id out of range");
    }
    drop[static_cast<std::size_t>(id)] = 1;
  }
  std::vector<CandidateId> new_id(c, -1);
  Profile result;
  for (std::size_t i = 0; i < c; ++i) {
    if (!drop[i]) {
      new_id[i] = static_cast<CandidateId>(result.roster.size());
      result.roster.push_back(profile.roster[i]);
    }
  }
  if (result.roster.empty()) {
    throw std::invalid_argument("restrict: cannot remove every candidate");
  }
  for (const Ballot& b : profile.ballots) {
    Ballot nb;
    nb.multiplicity = b.multiplicity;
    for (CandidateId id : b.ranking) {
      if (new_id[static_cast<std::size_t>(id)] >= 0) {
        nb.ranking.push_back(new_id[static_cast<std::size_t>(id)]);
      }
    }
    result.ballots.push_back(std::move(nb));
  }
  return result;
}

std::vector<Weight> positional_scores(const Profile& profile,
                                      const std::vector<Weight>& vector) {
  if (vector.size() != profile.roster.size()) {
    throw std::invalid_argument("scoring vector length must match roster size");
  }
  return positional_scores_among(profile, full_mask(profile), vector);
}

std::vector<Weight> positional_scores_among(const Profile& profile,
                                            const CandidateMask& remaining,
                                            const std::vector<Weight>& vector) {
  if (remaining.size() != profile.roster.size()) {
    throw std::invalid_argument("mask length must match roster size");
  }
  if (static_cast<int>(vector.size()) != mask_count(remaining)) {
    throw std::invalid_argument("scoring vector length must match remaining count");
  }
  std::vector<Weight> scores(profile.roster.size(), 0);
  for (const Ballot& b : profile.ballots) {
    std::size_t pos = 0;
    for (CandidateId id : b.ranking) {
      if (!remaining[static_cast<std::size_t>(id)]) continue;
      scores[static_cast<std::size_t>(id)] += b.multiplicity * vector[pos];
      ++pos;
    }
  }
  return scores;
}

std::vector<Weight> veto_scores_among(const Profile& profile,
                                      const CandidateMask& remaining) {
  if (remaining.size() != profile.roster.size()) {
    throw std::invalid_argument("mask length must match roster size");
  }
  std::vector<Weight> scores(profile.roster.size(), 0);
  for (const Ballot& b : profile.ballots) {
    for (auto it = b.ranking.rbegin(); it != b.ranking.rend(); ++it) {
      if (remaining[static_cast<std::size_t>(*it)]) {
        scores[static_cast<std::size_t>(*it)] += b.multiplicity;
        break;
      }
    }
  }
  return scores;
}

std::vector<Weight> top_counts_among(const Profile& profile,
                                     const CandidateMask& remaining) {
  if (remaining.size() != profile.roster.size()) {
    throw std::invalid_argument("mask length must match roster size");
  }
  std::vector<Weight> scores(profile.roster.size(), 0);
  for (const Ballot& b : profile.ballots) {
    for (CandidateId id : b.ranking) {
      if (remaining[static_cast<std::size_t>(id)]) {
        scores[static_cast<std::size_t>(id)] += b.multiplicity;
        break;
      }
    }
  }
  return scores;
}

ScoreTable make_score_table(int round, const CandidateMask& remaining,
                            const std::vector<Weight>& scores_by_id) {
  ScoreTable table;
  table.round = round;
  for (std::size_t i = 0; i < remaining.size(); ++i) {
    if (remaining[i]) {
      table.entries.push_back({static_cast<CandidateId>(i), scores_by_id[i]});
    }
  }
  return table;
}

std::optional<CandidateId> majority_winner(const Profile& profile) {
  return majority_winner_among(profile, full_mask(profile), profile.total_weight());
}

std::optional<CandidateId> majority_winner_among(const Profile& profile,
                                                 const CandidateMask& remaining,
                                                 Weight total_weight) {
  std::vector<Weight> tops = top_counts_among(profile, remaining);
  for (std::size_t i = 0; i < tops.size(); ++i) {
    if (remaining[i] && 2 * tops[i] > total_weight) {
      return static_cast<CandidateId>(i);
    }
  }
  return std::nullopt;
}

std::optional<CandidateId> condorcet_winner(const Profile& profile) {
  const std::size_t c = profile.roster.size();
  // beats[x][y] = weight preferring x to y.
  std::vector<std::vector<Weight>> beats(c, std::vector<Weight>(c, 0));
  std::vector<std::size_t> pos(c);
  for (const Ballot& b : profile.ballots) {
    for (std::size_t i = 0; i < b.ranking.size(); ++i) {
      pos[static_cast<std::size_t>(b.ranking[i])] = i;
    }
    for (std::size_t x = 0; x < c; ++x) {
      for (std::size_t y = x + 1; y < c; ++y) {
        if (pos[x] < pos[y]) {
          beats[x][y] += b.multiplicity;
        } else {
          beats[y][x] += b.multiplicity;
        }
      }
    }
  }
  for (std::size_t x = 0; x < c; ++x) {
    bool wins_all = true;
    for (std::size_t y = 0; y < c; ++y) {
      if (y != x && beats[x][y] <= beats[y][x]) {
        wins_all = false;
        break;
      }
    }
    if (wins_all) return static_cast<CandidateId>(x);
  }
  return std::nullopt;
}

std::vector<CandidateId> tied_losers(const ScoreTable& scores,
                                     LoserDirection direction) {
  if (scores.entries.empty()) {
    throw std::invalid_argument("empty score table");
  }
  Weight worst = scores.entries.front().score;
  for (const ScoreEntry& e : scores.entries) {
    if (direction == LoserDirection::MinScoreLoses) {
      worst = std::min(worst, e.score);
    } else {
      worst = std::max(worst, e.score);
    }
  }
  std::vector<CandidateId> tied;
  for (const ScoreEntry& e : scores.entries) {
    if (e.score == worst) tied.push_back(e.candidate);
  }
  return tied;
}

CandidateId select_loser(const ScoreTable& scores, const TieBreakPolicy& policy,
                         LoserDirection direction) {
  std::vector<CandidateId> tied = tied_losers(scores, direction);
  if (tied.size() == 1) return tied.front();
  std::vector<std::uint8_t> in_tie;
  for (CandidateId c : tied) {
    if (static_cast<std::size_t>(c) >= in_tie.size()) {
      in_tie.resize(static_cast<std::size_t>(c) + 1);
    }
    in_tie[static_cast<std::size_t>(c)] = 1;
  }
  if (policy.convention == TieConvention::EliminateEarliest) {
    for (CandidateId c : policy.priority) {
      if (static_cast<std::size_t>(c) < in_tie.size() && in_tie[static_cast<std::size_t>(c)]) {
        return c;
      }
    }
  } else {
    for (auto it = policy.priority.rbegin(); it != policy.priority.rend(); ++it) {
      if (static_cast<std::size_t>(*it) < in_tie.size() && in_tie[static_cast<std::size_t>(*it)]) {
        return *it;
      }
    }
  }
  throw std::invalid_argument("tie-break priority does not cover the tied candidates");
}

}  // namespace elimvote
