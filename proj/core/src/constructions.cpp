#include "elimvote/constructions.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "json.hpp"

namespace elimvote {

namespace {

using nlohmann::ordered_json;

// Weight of the lines that put pump i last among lines 1..35: five vote
// blocks per later pair plus the standing blocks listed with the pump rows.
Weight pump_front_weight(const ReductionConstants& k, int m, int n, int i) {
  Weight total = 10 * k.f2 * (m - i) + 2 * k.f2 * (4 + n);
  if (i == m) total += k.f1;
  return total;
}

// Weight of the lines that put the first switch last among lines 1..35.
Weight switch_front_weight(const ReductionConstants& k, int n) {
  return (3 + n) * (4 * k.f2 + k.f1);
}

enum class SuffixKind {
  PThenPrime,  // ... arb ..., p, fresh prime on top
  PrimeOnly,   // p sits in the prefix; fresh prime on top
  POnly,       // no fresh pair; p on top
};

struct LineSpec {
  std::string tag;
  Weight multiplicity = 0;
  std::vector<CandidateId> prefix;  // bottom up, fresh garbage excluded
  SuffixKind suffix = SuffixKind::PThenPrime;
};

std::string line_tag(int line, int a = 0, int b = 0) {
  std::string tag = "L";
  if (line < 10) tag += '0';
  tag += std::to_string(line);
  if (a > 0) tag += "_" + std::to_string(a);
  if (b > 0) tag += "_" + std::to_string(b);
  return tag;
}

CoverInstance normalized(const CoverInstance& instance) {
  CoverInstance out = instance;
  for (auto& set : out.sets) std::sort(set.begin(), set.end());
  return out;
}

bool covers_exactly(const CoverInstance& instance, const std::vector<int>& indices) {
  std::vector<char> hit(instance.n + 1, 0);
  int covered = 0;
  for (int index : indices) {
    for (int element : instance.sets[index - 1]) {
      if (!hit[element]) {
        hit[element] = 1;
        ++covered;
      }
    }
  }
  return covered == instance.n;
}

// Shared ballot template. Chosen pairs put their lower member on the very
// bottom, so the manipulator's veto walks the pairs in group order.
Ballot ballot_from_pattern(const ReductionOutput& red, const std::vector<char>& pick_lower_a) {
  const int m = red.instance.num_sets();
  const int count = red.profile.num_candidates();
  std::vector<char> placed(count, 0);
  std::vector<CandidateId> ranking;
  ranking.reserve(count);

  ranking.push_back(red.preferred);
  placed[red.preferred] = 1;
  placed[red.item(0)] = 1;
  placed[red.switch2()] = 1;
  for (int i = 1; i <= m; ++i) {
    placed[red.second_line(i, false)] = 1;
    placed[red.second_line(i, true)] = 1;
  }
  for (CandidateId c = 0; c < count; ++c) {
    if (!placed[c]) ranking.push_back(c);
  }
  ranking.push_back(red.switch2());
  ranking.push_back(red.item(0));
  for (int i = m; i >= 1; --i) {
    // pick_lower_a selects a_i as the lower member, its partner as the upper
    const bool choose_a = static_cast<bool>(pick_lower_a[i - 1]);
    ranking.push_back(red.second_line(i, choose_a));
    ranking.push_back(red.second_line(i, !choose_a));
  }
  return Ballot{ranking, 1};
}

}  // namespace

void CoverInstance::validate() const {
  if (n <= 0 || n % 3 != 0) {
    throw std::invalid_argument("ground set size must be a positive multiple of 3");
  }
  for (const auto& set : sets) {
    for (int element : set) {
      if (element < 1 || element > n) {
        throw std::invalid_argument("set element outside the ground set");
      }
    }
    if (set[0] == set[1] || set[0] == set[2] || set[1] == set[2]) {
      throw std::invalid_argument("every set needs 3 distinct elements");
    }
  }
}

CoverInstance parse_cover_instance(const std::string& text) {
  CoverInstance instance;
  try {
    ordered_json doc = ordered_json::parse(text);
    if (!doc.is_object() || !doc.contains("n") || !doc.contains("sets")) {
      throw std::invalid_argument("cover instance needs fields n and sets");
    }
    instance.n = doc.at("n").get<int>();
    for (const auto& entry : doc.at("sets")) {
      if (!entry.is_array() || entry.size() != 3) {
        throw std::invalid_argument("every set needs exactly 3 elements");
      }
      std::array<int, 3> set{};
      for (int t = 0; t < 3; ++t) set[t] = entry.at(t).get<int>();
      instance.sets.push_back(set);
    }
  } catch (const ordered_json::exception& e) {
    throw std::invalid_argument(std::string("bad cover instance: ") + e.what());
  }
  instance.validate();
  return instance;
}

std::string serialize_cover_instance(const CoverInstance& instance) {
  ordered_json doc;
  doc["n"] = instance.n;
  doc["sets"] = ordered_json::array();
  for (const auto& set : instance.sets) {
    doc["sets"].push_back({set[0], set[1], set[2]});
  }
  return doc.dump(2) + "\n";
}

std::optional<CoverSolution> cover_oracle(const CoverInstance& instance) {
  instance.validate();
  const int m = instance.num_sets();
  const int k = instance.n / 3;
  if (m < k) return std::nullopt;

  std::vector<int> indices(k);
  std::iota(indices.begin(), indices.end(), 1);
  while (true) {
    if (covers_exactly(instance, indices)) return CoverSolution{indices};
    int j = k - 1;
    while (j >= 0 && indices[j] == m - (k - 1 - j)) --j;
    if (j < 0) break;
    ++indices[j];
    for (int t = j + 1; t < k; ++t) indices[t] = indices[t - 1] + 1;
  }
  return std::nullopt;
}

ReductionConstants ReductionConstants::for_instance(int m, int n) {
  if (m < 1 || n < 3 || n % 3 != 0) {
    throw std::invalid_argument("constants need m >= 1 and n a positive multiple of 3");
  }
  ReductionConstants k;
  const Weight unit = 2 * static_cast<Weight>(m) + 3;
  k.f1 = 11 * unit;
  k.f2 = 8 * unit;
  k.f3 = 3 + unit;
  k.f4 = 2 * static_cast<Weight>(m) - 2 * (static_cast<Weight>(n) / 3) + 3;
  k.f12 = k.f1 + k.f2;
  k.f123 = k.f1 + k.f2 + k.f3;

  Weight largest_subtraction = static_cast<Weight>(n) + 3;
  largest_subtraction = std::max(largest_subtraction, k.f123);
  largest_subtraction = std::max(largest_subtraction, k.f4);
  largest_subtraction = std::max(largest_subtraction, switch_front_weight(k, n));
  for (int i = 1; i <= m; ++i) {
    largest_subtraction = std::max(largest_subtraction, pump_front_weight(k, m, n, i));
  }
  const Weight mm = static_cast<Weight>(m);
  const Weight floor16m5 = 16 * mm * mm * mm * mm * mm;
  k.X = std::max(floor16m5, largest_subtraction) + 1;
  return k;
}

void ReductionConstants::validate(int m, int n) const {
  const ReductionConstants expected = for_instance(m, n);
  const bool formulas_match = f1 == expected.f1 && f2 == expected.f2 &&
                              f3 == expected.f3 && f4 == expected.f4 &&
                              f12 == f1 + f2 && f123 == f1 + f2 + f3 &&
                              X == expected.X;
  if (!formulas_match) {
    throw std::invalid_argument("reduction constants do not follow their formulas");
  }
  bool inequalities = 2 * f2 >= f1 + 2 && 2 * f2 >= f3 + 2 && f1 >= f3 + 2 &&
                      f4 >= 1 && X > 16 * static_cast<Weight>(m) * m * m * m * m;
  // The strong spacing bound only holds from m = 3 on; small m fall back to
  // the bound that drives the first-loser round.
  if (m >= 3) {
    inequalities = inequalities && f1 >= f2 + 2 * f3 + 2;
  } else {
    inequalities = inequalities && f1 >= 3 + f2 + f3 + 2;
  }
  if (!inequalities) {
    throw std::invalid_argument("reduction constants violate their spacing bounds");
  }
}

std::string role_label(Role role) {
  switch (role) {
    case Role::Preferred: return "preferred";
    case Role::Item: return "item";
    case Role::FirstLoser: return "first-loser";
    case Role::SecondLine: return "second-line";
    case Role::Pump: return "pump";
    case Role::Switch: return "switch";
    case Role::Garbage: return "garbage";
    case Role::GarbagePrime: return "garbage-prime";
  }
  throw std::logic_error("unknown role");
}

CandidateId ReductionOutput::item(int k) const {
  if (k < 0 || k > instance.n) throw std::out_of_range("item index out of range");
  return 1 + k;
}

CandidateId ReductionOutput::second_line(int i, bool bar) const {
  if (i < 1 || i > instance.num_sets()) throw std::out_of_range("set index out of range");
  return instance.n + 2 + 2 * (i - 1) + (bar ? 1 : 0);
}

CandidateId ReductionOutput::first_loser(int i, bool bar) const {
  if (i < 1 || i > instance.num_sets()) throw std::out_of_range("set index out of range");
  return instance.n + 2 + 2 * instance.num_sets() + 2 * (i - 1) + (bar ? 1 : 0);
}

CandidateId ReductionOutput::pump(int i) const {
  if (i < 1 || i > instance.num_sets()) throw std::out_of_range("set index out of range");
  return instance.n + 2 + 4 * instance.num_sets() + (i - 1);
}

CandidateId ReductionOutput::switch1() const {
  return instance.n + 2 + 5 * instance.num_sets();
}

CandidateId ReductionOutput::switch2() const { return switch1() + 1; }

ReductionOutput build_veto_reduction(const CoverInstance& instance) {
  instance.validate();
  const int m = instance.num_sets();
  const int n = instance.n;
  if (m < n / 3) {
    throw std::invalid_argument("reduction needs at least n/3 sets");
  }

  ReductionOutput red;
  red.instance = normalized(instance);
  red.constants = ReductionConstants::for_instance(m, n);
  red.constants.validate(m, n);
  const ReductionConstants& K = red.constants;
  const Weight X = K.X;

  const CandidateId p = 0;
  red.preferred = p;
  auto d = [&](int k) { return red.item(k); };
  auto a = [&](int i) { return red.second_line(i, false); };
  auto abar = [&](int i) { return red.second_line(i, true); };
  auto b = [&](int i) { return red.first_loser(i, false); };
  auto bbar = [&](int i) { return red.first_loser(i, true); };
  auto pu = [&](int i) { return red.pump(i); };
  const CandidateId s1 = red.switch1();
  const CandidateId s2 = red.switch2();

  std::vector<LineSpec> lines;
  auto add = [&](std::string tag, Weight mult, std::vector<CandidateId> prefix,
                 SuffixKind kind = SuffixKind::PThenPrime) {
    if (mult <= 0) throw std::logic_error("vote multiplicity must stay positive");
    lines.push_back(LineSpec{std::move(tag), mult, std::move(prefix), kind});
  };

  add(line_tag(1), X - 1, {p}, SuffixKind::PrimeOnly);
  add(line_tag(2), X - K.f4, {d(0)});
  for (int k = 1; k <= n; ++k) add(line_tag(3, k), X - 3, {d(k)});
  for (int i = 1; i <= m; ++i) add(line_tag(4, i), X - 6, {b(i)});
  for (int i = 1; i <= m; ++i) {
    for (int element : red.instance.sets[i - 1]) {
      add(line_tag(5, i, element), 2, {b(i), d(element)});
    }
  }
  for (int i = 1; i <= m; ++i) add(line_tag(6, i), X - 2, {bbar(i)});
  for (int i = 1; i <= m; ++i) add(line_tag(7, i), 2, {bbar(i), d(0)});
  for (int i = 1; i <= m; ++i) {
    add(line_tag(8, i), i < m ? X - K.f123 : X - K.f12, {a(i)});
  }
  for (int i = 1; i <= m; ++i) add(line_tag(9, i), K.f1, {a(i), b(i)});
  for (int i = 1; i <= m; ++i) add(line_tag(10, i), K.f2, {a(i), abar(i), pu(i)});
  for (int i = 1; i < m; ++i) add(line_tag(11, i), K.f3, {a(i), abar(i), a(i + 1)});
  add(line_tag(12), 3, {a(1)});
  for (int i = 1; i <= m; ++i) {
    add(line_tag(13, i), i < m ? X - K.f123 : X - K.f12, {abar(i)});
  }
  for (int i = 1; i <= m; ++i) add(line_tag(14, i), K.f1, {abar(i), bbar(i)});
  for (int i = 1; i <= m; ++i) add(line_tag(15, i), K.f2, {abar(i), a(i), pu(i)});
  for (int i = 1; i < m; ++i) add(line_tag(16, i), K.f3, {abar(i), a(i), abar(i + 1)});
  add(line_tag(17), 3, {abar(1)});
  for (int i = 1; i < m; ++i) {
    for (int j = i + 1; j <= m; ++j) add(line_tag(18, i, j), 2 * K.f2, {pu(i), a(j)});
  }
  for (int i = 1; i < m; ++i) {
    for (int j = i + 1; j <= m; ++j) add(line_tag(19, i, j), 2 * K.f2, {pu(i), abar(j)});
  }
  for (int i = 1; i < m; ++i) {
    for (int j = i + 1; j <= m; ++j) add(line_tag(20, i, j), 2 * K.f2, {pu(i), b(j)});
  }
  for (int i = 1; i < m; ++i) {
    for (int j = i + 1; j <= m; ++j) add(line_tag(21, i, j), 2 * K.f2, {pu(i), bbar(j)});
  }
  for (int i = 1; i < m; ++i) {
    for (int j = i + 1; j <= m; ++j) add(line_tag(22, i, j), 2 * K.f2, {pu(i), pu(j)});
  }
  for (int i = 1; i <= m; ++i) {
    add(line_tag(23, i), 2 * K.f2, {pu(i), p}, SuffixKind::PrimeOnly);
  }
  for (int i = 1; i <= m; ++i) add(line_tag(24, i), 2 * K.f2, {pu(i), d(0)});
  for (int i = 1; i <= m; ++i) {
    for (int k = 1; k <= n; ++k) add(line_tag(25, i, k), 2 * K.f2, {pu(i), d(k)});
  }
  for (int i = 1; i <= m; ++i) add(line_tag(26, i), 2 * K.f2, {pu(i), s1});
  add(line_tag(27), K.f1, {pu(m), s1});
  for (int i = 1; i <= m; ++i) add(line_tag(28, i), 2 * K.f2, {pu(i), s2});
  add(line_tag(29), 4 * K.f2 + K.f1, {s1, p}, SuffixKind::PrimeOnly);
  add(line_tag(30), 4 * K.f2 + K.f1, {s1, d(0)});
  for (int k = 1; k <= n; ++k) add(line_tag(31, k), 4 * K.f2 + K.f1, {s1, d(k)});
  add(line_tag(32), 4 * K.f2 + K.f1, {s1, s2});
  add(line_tag(33), 1, {d(0), s2});
  for (int k = 1; k <= n; ++k) add(line_tag(34, k), 1, {d(k), s2});
  add(line_tag(35), X - n - 3, {s2}, SuffixKind::POnly);

  // The standing blocks must absorb exactly the weight the earlier lines put
  // on each pump and on the first switch; tally the built lines to be sure.
  for (int i = 1; i <= m; ++i) {
    Weight tallied = 0;
    for (const LineSpec& line : lines) {
      if (line.prefix.front() == pu(i)) tallied += line.multiplicity;
    }
    if (tallied != pump_front_weight(K, m, n, i)) {
      throw std::logic_error("pump front weight does not match its closed form");
    }
  }
  {
    Weight tallied = 0;
    for (const LineSpec& line : lines) {
      if (line.prefix.front() == s1) tallied += line.multiplicity;
    }
    if (tallied != switch_front_weight(K, n)) {
      throw std::logic_error("switch front weight does not match its closed form");
    }
  }
  for (int i = 1; i <= m; ++i) {
    add(line_tag(36, i), X - pump_front_weight(K, m, n, i), {pu(i)});
  }
  add(line_tag(37), X - switch_front_weight(K, n), {s1});

  int garbage_lines = 0;
  for (const LineSpec& line : lines) {
    if (line.suffix != SuffixKind::POnly) ++garbage_lines;
  }
  const int named = n + 5 * m + 4;
  const int count = named + 2 * garbage_lines;

  std::vector<std::string> roster(count);
  red.roles.assign(count, Role::Garbage);
  roster[p] = "p";
  red.roles[p] = Role::Preferred;
  for (int k = 0; k <= n; ++k) {
    roster[d(k)] = "d" + std::to_string(k);
    red.roles[d(k)] = Role::Item;
  }
  for (int i = 1; i <= m; ++i) {
    roster[a(i)] = "a" + std::to_string(i);
    roster[abar(i)] = "abar" + std::to_string(i);
    red.roles[a(i)] = red.roles[abar(i)] = Role::SecondLine;
    roster[b(i)] = "b" + std::to_string(i);
    roster[bbar(i)] = "bbar" + std::to_string(i);
    red.roles[b(i)] = red.roles[bbar(i)] = Role::FirstLoser;
    roster[pu(i)] = "p" + std::to_string(i);
    red.roles[pu(i)] = Role::Pump;
  }
  roster[s1] = "s1";
  roster[s2] = "s2";
  red.roles[s1] = red.roles[s2] = Role::Switch;

  std::vector<CandidateId> garbage_of(lines.size(), -1);
  std::vector<CandidateId> prime_of(lines.size(), -1);
  int next = 0;
  for (std::size_t index = 0; index < lines.size(); ++index) {
    if (lines[index].suffix == SuffixKind::POnly) continue;
    garbage_of[index] = named + next;
    prime_of[index] = named + garbage_lines + next;
    roster[garbage_of[index]] = "g_" + lines[index].tag;
    roster[prime_of[index]] = "gp_" + lines[index].tag;
    red.roles[garbage_of[index]] = Role::Garbage;
    red.roles[prime_of[index]] = Role::GarbagePrime;
    ++next;
  }

  // Filler order shared by every ballot: the item garbage first, so the
  // collection cascade starts from the switch line, then everyone else by id.
  std::vector<CandidateId> filler;
  filler.reserve(count);
  std::vector<char> in_front(count, 0);
  for (std::size_t index = 0; index < lines.size(); ++index) {
    const std::string& tag = lines[index].tag;
    if (tag == "L02" || tag.rfind("L03_", 0) == 0) {
      filler.push_back(garbage_of[index]);
      in_front[garbage_of[index]] = 1;
    }
  }
  for (CandidateId c = 0; c < count; ++c) {
    if (!in_front[c]) filler.push_back(c);
  }

  red.profile.roster = roster;
  for (std::size_t index = 0; index < lines.size(); ++index) {
    const LineSpec& line = lines[index];
    std::vector<char> placed(count, 0);
    std::vector<CandidateId> bottom_up;
    bottom_up.reserve(count);
    for (CandidateId c : line.prefix) {
      bottom_up.push_back(c);
      placed[c] = 1;
    }
    if (line.suffix != SuffixKind::POnly) {
      bottom_up.push_back(garbage_of[index]);
      placed[garbage_of[index]] = 1;
      placed[prime_of[index]] = 1;
    }
    placed[p] = 1;
    for (CandidateId c : filler) {
      if (!placed[c]) bottom_up.push_back(c);
    }
    switch (line.suffix) {
      case SuffixKind::PThenPrime:
        bottom_up.push_back(p);
        bottom_up.push_back(prime_of[index]);
        break;
      case SuffixKind::PrimeOnly:
        bottom_up.push_back(prime_of[index]);
        break;
      case SuffixKind::POnly:
        bottom_up.push_back(p);
        break;
    }
    std::reverse(bottom_up.begin(), bottom_up.end());
    red.profile.ballots.push_back(Ballot{std::move(bottom_up), line.multiplicity});
  }
  red.profile.validate();

  // Ties fall on the second switch first, then d_0, then p, then the items.
  red.policy.convention = TieConvention::EliminateEarliest;
  red.policy.priority = {s2, d(0), p};
  std::vector<char> prioritized(count, 0);
  prioritized[s2] = prioritized[d(0)] = prioritized[p] = 1;
  for (int k = 1; k <= n; ++k) {
    red.policy.priority.push_back(d(k));
    prioritized[d(k)] = 1;
  }
  for (CandidateId c = 0; c < count; ++c) {
    if (!prioritized[c]) red.policy.priority.push_back(c);
  }
  red.policy.validate(red.profile);
  return red;
}

Ballot cover_to_ballot(const ReductionOutput& reduction, const CoverSolution& cover) {
  const int m = reduction.instance.num_sets();
  const int n = reduction.instance.n;
  bool shaped = static_cast<int>(cover.indices.size()) == n / 3;
  for (std::size_t t = 0; shaped && t < cover.indices.size(); ++t) {
    shaped = cover.indices[t] >= 1 && cover.indices[t] <= m &&
             (t == 0 || cover.indices[t - 1] < cover.indices[t]);
  }
  if (!shaped || !covers_exactly(reduction.instance, cover.indices)) {
    throw std::invalid_argument("invalid cover");
  }
  std::vector<char> pick(m, 0);
  for (int index : cover.indices) pick[index - 1] = 1;
  return ballot_from_pattern(reduction, pick);
}

std::vector<Ballot> canonical_ballots(const ReductionOutput& reduction) {
  const int m = reduction.instance.num_sets();
  if (m > 20) throw std::invalid_argument("too many selection patterns to enumerate");
  std::vector<Ballot> out;
  out.reserve(std::size_t{1} << m);
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << m); ++mask) {
    std::vector<char> pick(m, 0);
    for (int i = 0; i < m; ++i) pick[i] = (mask >> i) & 1;
    out.push_back(ballot_from_pattern(reduction, pick));
  }
  return out;
}

PhaseReport check_phase_invariants(const EliminationTrace& trace,
                                   const ReductionOutput& reduction) {
  if (trace.roster != reduction.profile.roster || trace.score_kind != "veto") {
    throw std::invalid_argument("trace does not match the reduction");
  }
  const int m = reduction.instance.num_sets();
  const int n = reduction.instance.n;
  const int count = reduction.profile.num_candidates();

  PhaseReport report;
  auto fail = [&report](int round, std::string message) {
    report.ok = false;
    report.failed_round = round;
    report.message = std::move(message);
    return report;
  };
  if (static_cast<int>(trace.rounds.size()) < 4 * m + 2) {
    return fail(static_cast<int>(trace.rounds.size()),
                "trace ends before the counting round");
  }
  auto table = [&trace](int round) -> const ScoreTable& {
    return trace.rounds[round - 1].scores;
  };
  auto fell = [&trace](int round) -> const std::vector<CandidateId>& {
    return trace.rounds[round - 1].eliminated;
  };

  Weight first_total = 0;
  for (const ScoreEntry& entry : table(1).entries) first_total += entry.score;
  report.delta = first_total - reduction.sincere_weight();
  if (report.delta < 0 || report.delta > 1) {
    return fail(1, "first round carries more than one extra ballot");
  }

  const ReductionConstants& K = reduction.constants;
  std::vector<Weight> expected(count, 0);
  expected[reduction.preferred] = K.X - 1;
  expected[reduction.item(0)] = K.X - K.f4 + 1;
  for (int k = 1; k <= n; ++k) expected[reduction.item(k)] = K.X - 2;
  for (int i = 1; i <= m; ++i) {
    const Weight pair = i == 1 ? K.X + 3 : K.X;
    expected[reduction.second_line(i, false)] = pair;
    expected[reduction.second_line(i, true)] = pair;
    expected[reduction.first_loser(i, false)] = K.X;
    expected[reduction.first_loser(i, true)] = K.X;
    expected[reduction.pump(i)] = K.X;
  }
  expected[reduction.switch1()] = K.X;
  expected[reduction.switch2()] = K.X - n - 3;
  Weight slack = 0;
  for (const ScoreEntry& entry : table(1).entries) {
    const Weight diff = entry.score - expected[entry.candidate];
    if (diff < 0 || diff > 1) {
      return fail(1, "initial veto-score of " + trace.roster[entry.candidate] +
                         " is off its closed form");
    }
    slack += diff;
  }
  if (slack != report.delta) {
    return fail(1, "initial veto-scores do not absorb the extra ballot");
  }

  std::vector<char> selected_flag(m + 1, 0);
  for (int i = 0; i < m; ++i) {
    const int group = i + 1;
    const int r1 = 4 * i + 1;
    const CandidateId low = reduction.second_line(group, false);
    const CandidateId high = reduction.second_line(group, true);
    if (!table(r1).contains(low) || !table(r1).contains(high)) {
      return fail(r1, "selection pair missing at its round");
    }
    const Weight wl = table(r1).score_of(low);
    const Weight wh = table(r1).score_of(high);
    if (wl - wh > report.delta || wh - wl > report.delta) {
      return fail(r1, "selection pair is out of balance");
    }
    std::vector<char> excluded(count, 0);
    for (int j = 1; j <= group; ++j) {
      excluded[reduction.second_line(j, false)] = 1;
      excluded[reduction.second_line(j, true)] = 1;
    }
    for (int j = 1; j < group; ++j) {
      excluded[reduction.first_loser(j, false)] = 1;
      excluded[reduction.first_loser(j, true)] = 1;
    }
    const Weight floor = std::min(wl, wh);
    for (const ScoreEntry& entry : table(r1).entries) {
      if (excluded[entry.candidate]) continue;
      if (floor < entry.score + 3) {
        return fail(r1, "selection pair is not three clear of " +
                            trace.roster[entry.candidate]);
      }
    }
    if (fell(r1).size() != 1 || (fell(r1)[0] != low && fell(r1)[0] != high)) {
      return fail(r1, "selection round removed a non-pair candidate");
    }
    const bool chose_low = fell(r1)[0] == low;
    if (chose_low) {
      selected_flag[group] = 1;
      report.selected.push_back(group);
    }
    const CandidateId loser = reduction.first_loser(group, !chose_low);
    const CandidateId partner = chose_low ? high : low;
    if (fell(4 * i + 2) != std::vector<CandidateId>{loser}) {
      return fail(4 * i + 2, "first loser does not mirror the selection");
    }
    if (fell(4 * i + 3) != std::vector<CandidateId>{partner}) {
      return fail(4 * i + 3, "surviving pair member did not fall next");
    }
    if (fell(4 * i + 4) != std::vector<CandidateId>{reduction.pump(group)}) {
      return fail(4 * i + 4, "pump did not close its group");
    }
  }

  if (fell(4 * m + 1) != std::vector<CandidateId>{reduction.switch1()}) {
    return fail(4 * m + 1, "first switch did not fall after the groups");
  }

  const int counting = 4 * m + 2;
  const CandidateId p = reduction.preferred;
  const CandidateId s2 = reduction.switch2();
  if (!table(counting).contains(p) || !table(counting).contains(s2)) {
    return fail(counting, "preferred or second switch missing at the count");
  }
  for (int k = 0; k <= n; ++k) {
    if (!table(counting).contains(reduction.item(k))) {
      return fail(counting, "an item fell before the count");
    }
  }
  if (table(counting).score_of(p) - table(counting).score_of(s2) != n + 2) {
    return fail(counting, "preferred is not exactly n+2 ahead of the second switch");
  }
  const Weight p_gain = table(counting).score_of(p) - table(1).score_of(p);
  for (int k = 1; k <= n; ++k) {
    const CandidateId item = reduction.item(k);
    const Weight gain =
        table(counting).score_of(item) - table(1).score_of(item) - p_gain;
    Weight hits = 0;
    for (int i = 1; i <= m; ++i) {
      if (!selected_flag[i]) continue;
      const auto& set = reduction.instance.sets[i - 1];
      if (std::find(set.begin(), set.end(), k) != set.end()) ++hits;
    }
    const Weight off = gain - 2 * hits;
    if (off < -report.delta || off > report.delta) {
      return fail(counting, "item " + trace.roster[item] +
                                " gained off its selection count");
    }
  }
  const CandidateId d0 = reduction.item(0);
  const Weight d0_gain =
      table(counting).score_of(d0) - table(1).score_of(d0) - p_gain;
  const Weight unselected =
      static_cast<Weight>(m) - static_cast<Weight>(report.selected.size());
  const Weight d0_off = d0_gain - 2 * unselected;
  if (d0_off < 0 || d0_off > report.delta) {
    return fail(counting, "d0 gained off the unselected count");
  }
  return report;
}

std::string reduction_sidecar_json(const ReductionOutput& reduction) {
  ordered_json doc;
  doc["instance"] = ordered_json::object();
  doc["instance"]["n"] = reduction.instance.n;
  doc["instance"]["sets"] = ordered_json::array();
  for (const auto& set : reduction.instance.sets) {
    doc["instance"]["sets"].push_back({set[0], set[1], set[2]});
  }
  doc["constants"] = ordered_json::object();
  doc["constants"]["f1"] = reduction.constants.f1;
  doc["constants"]["f2"] = reduction.constants.f2;
  doc["constants"]["f3"] = reduction.constants.f3;
  doc["constants"]["f4"] = reduction.constants.f4;
  doc["constants"]["f12"] = reduction.constants.f12;
  doc["constants"]["f123"] = reduction.constants.f123;
  doc["constants"]["X"] = reduction.constants.X;
  doc["preferred"] = reduction.profile.roster[reduction.preferred];
  doc["policy"] = ordered_json::object();
  doc["policy"]["convention"] = "eliminate-earliest";
  doc["policy"]["priority"] = ordered_json::array();
  for (CandidateId c : reduction.policy.priority) {
    doc["policy"]["priority"].push_back(reduction.profile.roster[c]);
  }
  doc["roles"] = ordered_json::object();
  for (CandidateId c = 0; c < reduction.profile.num_candidates(); ++c) {
    doc["roles"][reduction.profile.roster[c]] = role_label(reduction.roles[c]);
  }
  return doc.dump(2) + "\n";
}

FamilyOutput build_thm4_family(int n) {
  if (n < 2) throw std::invalid_argument("family needs n at least 2");
  FamilyOutput out;
  out.profile.roster = {"a", "b", "c"};
  for (int k = 1; k <= n; ++k) out.profile.roster.push_back("d" + std::to_string(k));
  auto rotation = [n](int shift) {
    std::vector<CandidateId> ids;
    ids.reserve(n);
    for (int t = 0; t < n; ++t) ids.push_back(3 + (shift + t) % n);
    return ids;
  };
  for (int shift = 0; shift < n; ++shift) {
    std::vector<CandidateId> ranking{0};
    const auto mid = rotation(shift);
    ranking.insert(ranking.end(), mid.begin(), mid.end());
    ranking.push_back(1);
    ranking.push_back(2);
    out.profile.ballots.push_back(Ballot{std::move(ranking), 1});
  }
  for (int shift = 0; shift < n; ++shift) {
    std::vector<CandidateId> ranking{1, 0};
    const auto mid = rotation(shift);
    ranking.insert(ranking.end(), mid.begin(), mid.end());
    ranking.push_back(2);
    out.profile.ballots.push_back(Ballot{std::move(ranking), 1});
  }
  for (int shift = 0; shift < n; ++shift) {
    std::vector<CandidateId> ranking{2, 1, 0};
    const auto mid = rotation(shift);
    ranking.insert(ranking.end(), mid.begin(), mid.end());
    out.profile.ballots.push_back(Ballot{std::move(ranking), 1});
  }
  out.profile.validate();
  out.preferred = 0;
  out.policy = TieBreakPolicy::roster_order(out.profile);
  return out;
}

FamilyOutput build_thm5_family(int n) {
  if (n < 2) throw std::invalid_argument("family needs n at least 2");
  FamilyOutput out;
  out.profile.roster = {"a", "b"};
  for (int k = 1; k <= n; ++k) out.profile.roster.push_back("d" + std::to_string(k));
  auto rotation = [n](int shift) {
    std::vector<CandidateId> ids;
    ids.reserve(n);
    for (int t = 0; t < n; ++t) ids.push_back(2 + (shift + t) % n);
    return ids;
  };
  for (int shift = 0; shift < n; ++shift) {
    std::vector<CandidateId> ranking{0, 1};
    const auto mid = rotation(shift);
    ranking.insert(ranking.end(), mid.begin(), mid.end());
    out.profile.ballots.push_back(Ballot{std::move(ranking), 1});
  }
  for (int shift = 0; shift < n; ++shift) {
    std::vector<CandidateId> ranking{1};
    const auto mid = rotation(shift);
    ranking.insert(ranking.end(), mid.begin(), mid.end());
    ranking.push_back(0);
    out.profile.ballots.push_back(Ballot{std::move(ranking), 1});
  }
  out.profile.validate();
  out.preferred = 0;
  out.policy = TieBreakPolicy::roster_order(out.profile);
  return out;
}

FamilyOutput build_example2() {
  static const char* kVotes =
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
  FamilyOutput out;
  out.profile = parse_profile(kVotes);
  const std::vector<std::string> order = {"p", "g", "c", "d", "a",
                                          "e", "f", "b", "h"};
  out.policy.convention = TieConvention::EliminateLatest;
  for (const std::string& name : order) {
    out.policy.priority.push_back(*out.profile.find_candidate(name));
  }
  out.policy.validate(out.profile);
  out.preferred = *out.profile.find_candidate("p");
  return out;
}

Profile reverse_profile(const Profile& profile) {
  Profile out = profile;
  for (Ballot& ballot : out.ballots) {
    std::reverse(ballot.ranking.begin(), ballot.ranking.end());
  }
  return out;
}

Profile build_adjoint_padding(const Profile& sincere, int manipulators,
                              const ScoringVector& vec) {
  sincere.validate();
  const int m = sincere.num_candidates();
  if (m < 3) throw std::invalid_argument("padding needs at least 3 candidates");
  if (manipulators < 0) {
    throw std::invalid_argument("manipulator count must be nonnegative");
  }
  if (static_cast<int>(vec.size()) != m) {
    throw std::invalid_argument("scoring vector length must match the roster");
  }
  if (vec.front() <= 0 || vec.back() < 0 ||
      !std::is_sorted(vec.rbegin(), vec.rend())) {
    throw std::invalid_argument("scoring vector must be nonincreasing and award points");
  }
  const Weight copies =
      vec.front() * (sincere.total_weight() + manipulators + 1);
  Profile out = reverse_profile(sincere);
  for (int r = 0; r < m; ++r) {
    std::vector<CandidateId> ranking;
    ranking.reserve(m);
    for (int t = 0; t < m; ++t) ranking.push_back((r + t) % m);
    out.ballots.push_back(Ballot{std::move(ranking), copies});
  }
  out.validate();
  return out;
}

}  // namespace elimvote
