#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "elimvote/constructions.hpp"
#include "elimvote/manipulation.hpp"
#include "elimvote/random.hpp"

namespace {

using namespace elimvote;
using ordered_json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitNo = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

// Raised for bad flag combinations and malformed inputs; maps to exit 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  if (!in.good() && !in.eof()) throw UsageError("cannot read " + path);
  return out.str();
}

// Writes via a temporary so a failure never leaves a partial file behind.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out << content;
    out.flush();
    if (!out.good()) {
      out.close();
      std::filesystem::remove(tmp);
      throw std::runtime_error("cannot write " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

Profile load_profile(const std::string& path) {
  return parse_profile(read_file(path));
}

CoverInstance load_instance(const std::string& path) {
  return parse_cover_instance(read_file(path));
}

CandidateId resolve_candidate(const Profile& profile, const std::string& name) {
  const auto id = profile.find_candidate(name);
  if (!id.has_value()) throw UsageError("no candidate named '" + name + "'");
  return *id;
}

// Grammar: earliest | latest | <convention>:<name1,name2,...> (full roster).
TieBreakPolicy policy_from_flags(const Profile& profile,
                                 const std::string& tiebreak,
                                 const std::string& optimistic) {
  TieBreakPolicy policy;
  if (tiebreak.empty()) {
    policy = TieBreakPolicy::roster_order(profile);
  } else {
    const std::size_t colon = tiebreak.find(':');
    const std::string convention = tiebreak.substr(0, colon);
    TieConvention parsed;
    if (convention == "earliest") {
      parsed = TieConvention::EliminateEarliest;
    } else if (convention == "latest") {
      parsed = TieConvention::EliminateLatest;
    } else {
      throw UsageError("tiebreak convention must be earliest or latest");
    }
    if (colon == std::string::npos) {
      policy = TieBreakPolicy::roster_order(profile, parsed);
    } else {
      policy.convention = parsed;
      std::stringstream names(tiebreak.substr(colon + 1));
      std::string name;
      while (std::getline(names, name, ',')) {
        const std::size_t first = name.find_first_not_of(" \t");
        const std::size_t last = name.find_last_not_of(" \t");
        if (first == std::string::npos) throw UsageError("empty tiebreak name");
        policy.priority.push_back(
            resolve_candidate(profile, name.substr(first, last - first + 1)));
      }
      policy.validate(profile);
    }
  }
  if (!optimistic.empty()) {
    policy.optimistic_for = resolve_candidate(profile, optimistic);
  }
  return policy;
}

SearchBudget resolve_budget(std::optional<std::uint64_t> flag) {
  SearchBudget budget;
  if (flag.has_value()) {
    budget.max_nodes = *flag;
    return budget;
  }
  if (const char* env = std::getenv("ELIMVOTE_BUDGET")) {
    char* end = nullptr;
    const unsigned long long parsed = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0') {
      throw UsageError("ELIMVOTE_BUDGET must be a nonnegative integer");
    }
    budget.max_nodes = parsed;
  }
  return budget;
}

void emit(const ordered_json& doc) { std::cout << doc.dump(2) << "\n"; }

std::string ballot_line(const Profile& profile, const Ballot& ballot) {
  std::string out = std::to_string(ballot.multiplicity) + ":";
  for (std::size_t at = 0; at < ballot.ranking.size(); ++at) {
    out += at == 0 ? " " : " > ";
    out += profile.roster[ballot.ranking[at]];
  }
  return out;
}

std::string witness_profile_text(const Profile& profile,
                                 const std::vector<Ballot>& witness) {
  Profile carrier;
  carrier.roster = profile.roster;
  carrier.ballots = witness;
  return serialize_profile(carrier);
}

// ---------------------------------------------------------------------------
// run

struct RunOptions {
  std::string rule;
  std::string profile_path;
  std::string tiebreak;
  std::string format = "json";
};

int do_run(const RunOptions& opt) {
  const RuleSpec spec = RuleSpec::parse(opt.rule);
  const Profile profile = load_profile(opt.profile_path);
  const TieBreakPolicy policy = policy_from_flags(profile, opt.tiebreak, "");
  const EliminationTrace trace = run_rule(spec, profile, policy);
  if (opt.format == "text") {
    std::cout << trace_to_text(trace);
  } else {
    std::cout << trace_to_json_string(trace);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// manipulate

struct ManipulateOptions {
  std::string rule;
  std::string profile_path;
  std::string prefer;
  int k = 1;
  std::string solver = "brute";
  std::optional<std::uint64_t> budget;
  std::string tiebreak;
  std::string optimistic;
  std::string format = "json";
};

int do_manipulate(const ManipulateOptions& opt) {
  const RuleSpec spec = RuleSpec::parse(opt.rule);
  const Profile profile = load_profile(opt.profile_path);
  const TieBreakPolicy policy =
      policy_from_flags(profile, opt.tiebreak, opt.optimistic);
  const CandidateId preferred = resolve_candidate(profile, opt.prefer);
  const SearchBudget budget = resolve_budget(opt.budget);

  ordered_json doc;
  doc["rule"] = spec.label();
  doc["preferred"] = profile.roster[preferred];
  doc["manipulators"] = opt.k;
  doc["solver"] = opt.solver;
  doc["budget"] = budget.max_nodes;

  ManipulationResult result;
  try {
    if (opt.solver == "brute") {
      ManipulationQuery query;
      query.rule = spec;
      query.profile = profile;
      query.preferred = preferred;
      query.manipulators = opt.k;
      query.policy = policy;
      result = find_manipulation_brute(query, budget);
    } else if (opt.solver == "frontier") {
      if (opt.k != 1) throw UsageError("the frontier solver handles exactly k=1");
      FrontierVariant variant;
      if (spec == RuleSpec::parse("eliminate:veto")) {
        variant = FrontierVariant::EliminateVeto;
      } else if (spec == RuleSpec::parse("eliminate:plurality")) {
        variant = FrontierVariant::Stv;
      } else {
        throw UsageError(
            "the frontier solver handles eliminate:veto and eliminate:plurality");
      }
      result = find_manipulation_frontier(variant, profile, preferred, policy,
                                          budget);
    } else {
      if (opt.k != 1) throw UsageError("the sequential solver handles exactly k=1");
      if (spec.combinator != Combinator::Sequential || !spec.base.has_value()) {
        throw UsageError("the sequential solver needs a sequential:<base> rule");
      }
      result = sequential_manipulate(*spec.base, profile, preferred, policy,
                                     budget);
    }
  } catch (const BudgetExceeded& e) {
    doc["error"] = "budget exceeded";
    doc["nodes"] = e.used();
    doc["limit"] = e.limit();
    if (e.completed_k >= 0) doc["completed_k"] = e.completed_k;
    emit(doc);
    return kExitBudget;
  }

  doc["decision"] = result.decision;
  doc["witness_is_per_round"] = result.witness_is_per_round;
  if (result.decision) {
    ordered_json lines = ordered_json::array();
    for (const Ballot& ballot : result.witness) {
      lines.push_back(ballot_line(profile, ballot));
    }
    doc["witness"] = lines;
    const std::string text = witness_profile_text(profile, result.witness);
    doc["witness_profile"] = text;
    // Printed witnesses must survive a parse and an engine replay.
    const Profile reread = parse_profile(text);
    if (!result.witness_is_per_round) {
      Profile swayed = profile;
      for (const Ballot& ballot : reread.ballots) swayed.ballots.push_back(ballot);
      SearchBudget replay;
      if (!preferred_wins(spec, swayed, policy, preferred, replay)) {
        throw std::logic_error("witness failed its replay");
      }
    }
  }
  doc["stats"] = {{"nodes", result.stats.nodes},
                  {"ballots_tried", result.stats.ballots_tried}};

  if (opt.format == "text") {
    std::cout << "rule: " << doc["rule"].get<std::string>() << "\n"
              << "decision: " << (result.decision ? "yes" : "no") << "\n";
    if (result.decision) {
      std::cout << (result.witness_is_per_round ? "witness (one ballot per round):"
                                                : "witness:")
                << "\n";
      for (const Ballot& ballot : result.witness) {
        std::cout << "  " << ballot_line(profile, ballot) << "\n";
      }
    }
    std::cout << "nodes: " << result.stats.nodes << "\n"
              << "ballots tried: " << result.stats.ballots_tried << "\n";
  } else {
    emit(doc);
  }
  return result.decision ? kExitOk : kExitNo;
}

// ---------------------------------------------------------------------------
// reduce / oracle / gen

struct ReduceOptions {
  std::string instance_path;
  std::string out_dir;
};

int do_reduce(const ReduceOptions& opt) {
  const CoverInstance instance = load_instance(opt.instance_path);
  const ReductionOutput red = build_veto_reduction(instance);
  const std::string votes = serialize_profile(red.profile);
  const std::string sidecar = reduction_sidecar_json(red);

  const std::filesystem::path dir(opt.out_dir);
  std::filesystem::create_directories(dir);
  write_file_atomic(dir / "election.votes", votes);
  write_file_atomic(dir / "reduction.json", sidecar);

  ordered_json doc;
  doc["out"] = opt.out_dir;
  doc["files"] = {"election.votes", "reduction.json"};
  doc["candidates"] = red.profile.num_candidates();
  doc["ballots"] = red.profile.ballots.size();
  doc["total_weight"] = red.profile.total_weight();
  doc["preferred"] = red.profile.roster[red.preferred];
  emit(doc);
  return kExitOk;
}

int do_oracle(const std::string& instance_path) {
  const CoverInstance instance = load_instance(instance_path);
  const auto cover = cover_oracle(instance);
  ordered_json doc;
  doc["n"] = instance.n;
  doc["num_sets"] = instance.num_sets();
  if (cover.has_value()) {
    doc["cover"] = cover->indices;
  } else {
    doc["cover"] = nullptr;
  }
  emit(doc);
  return kExitOk;
}

struct GenOptions {
  int m = 0;
  Weight voters = 0;
  std::uint64_t seed = 0;
  std::string names = "letters";
};

int do_gen(const GenOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  const RosterNaming naming =
      opt.names == "numerals" ? RosterNaming::Numerals : RosterNaming::Letters;
  const Profile profile = random_profile(rng, opt.m, opt.voters, naming);
  std::cout << "# seed: " << opt.seed << "\n" << serialize_profile(profile);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyOptions {
  std::string suite;
  int m = 0;       // 0 means suite default
  int n = 0;       // 0 means suite default
  int trials = 50;
  std::optional<std::uint64_t> budget;
  std::string format = "json";
};

struct Report {
  std::string suite;
  ordered_json params = ordered_json::object();
  struct Line {
    std::string name;
    bool pass;
    std::string detail;
  };
  std::vector<Line> lines;

  void add(std::string name, bool pass, std::string detail = "") {
    lines.push_back({std::move(name), pass, std::move(detail)});
  }
  bool ok() const {
    return std::all_of(lines.begin(), lines.end(),
                       [](const Line& line) { return line.pass; });
  }
  int emit_and_code(const std::string& format) const {
    if (format == "text") {
      std::cout << "suite: " << suite << "\n";
      for (const Line& line : lines) {
        std::cout << (line.pass ? "PASS" : "FAIL") << " " << line.name;
        if (!line.detail.empty()) std::cout << " (" << line.detail << ")";
        std::cout << "\n";
      }
      std::cout << (ok() ? "ok" : "FAILED") << "\n";
    } else {
      ordered_json doc;
      doc["suite"] = suite;
      doc["params"] = params;
      ordered_json rows = ordered_json::array();
      for (const Line& line : lines) {
        ordered_json row;
        row["name"] = line.name;
        row["pass"] = line.pass;
        if (!line.detail.empty()) row["detail"] = line.detail;
        rows.push_back(row);
      }
      doc["assertions"] = rows;
      doc["ok"] = ok();
      emit(doc);
    }
    return ok() ? kExitOk : kExitNo;
  }
};

CoverInstance preset_yes_instance(int m) {
  CoverInstance instance;
  if (m == 1) {
    instance.n = 3;
    instance.sets = {{{1, 2, 3}}};
  } else {
    instance.n = 6;
    instance.sets = {{{1, 2, 3}, {4, 5, 6}}};
  }
  return instance;
}

CoverInstance preset_no_instance() {
  CoverInstance instance;
  instance.n = 6;
  instance.sets = {{{1, 2, 3}, {1, 2, 4}}};
  return instance;
}

void check_reduction_sizes(const VerifyOptions& opt, int* m, int* n) {
  *m = opt.m == 0 ? 1 : opt.m;
  *n = opt.n == 0 ? 3 * *m : opt.n;
  const bool small = *m == 1 && *n == 3;
  const bool large = *m == 2 && *n == 6;
  if (!small && !large) {
    throw UsageError("supported sizes are --m 1 --n 3 and --m 2 --n 6");
  }
}

int verify_thm3(const VerifyOptions& opt) {
  int m = 0, n = 0;
  check_reduction_sizes(opt, &m, &n);
  Report report;
  report.suite = opt.suite;
  report.params["m"] = m;
  report.params["n"] = n;

  const ReductionOutput red = build_veto_reduction(preset_yes_instance(m));
  bool constants_ok = true;
  std::string constants_detail;
  try {
    red.constants.validate(m, n);
    constants_detail = "X=" + std::to_string(red.constants.X);
  } catch (const std::invalid_argument& e) {
    constants_ok = false;
    constants_detail = e.what();
  }
  report.add("scoring constants satisfy their closed forms and bounds",
             constants_ok, constants_detail);

  const auto cover = cover_oracle(red.instance);
  report.add("cover oracle finds the planted cover", cover.has_value());
  if (cover.has_value()) {
    Profile swayed = red.profile;
    swayed.ballots.push_back(cover_to_ballot(red, *cover));
    const EliminationTrace led =
        run_eliminate(RuleFamily::veto(), swayed, red.policy);
    report.add("cover ballot elects the preferred candidate",
               led.winner == red.preferred);
    const PhaseReport phases = check_phase_invariants(led, red);
    report.add("phase invariants hold on the manipulated trace", phases.ok,
               phases.ok ? "delta=1" : phases.message);
  }

  const EliminationTrace sincere =
      run_eliminate(RuleFamily::veto(), red.profile, red.policy);
  report.add("sincere election defeats the preferred candidate",
             sincere.winner != red.preferred);
  const PhaseReport quiet = check_phase_invariants(sincere, red);
  report.add("phase invariants hold on the sincere trace", quiet.ok,
             quiet.ok ? "delta=0" : quiet.message);

  if (m == 2) {
    const ReductionOutput blocked = build_veto_reduction(preset_no_instance());
    bool all_lose = !cover_oracle(blocked.instance).has_value();
    for (const Ballot& ballot : canonical_ballots(blocked)) {
      Profile swayed = blocked.profile;
      swayed.ballots.push_back(ballot);
      all_lose = all_lose &&
                 run_eliminate(RuleFamily::veto(), swayed, blocked.policy)
                         .winner != blocked.preferred;
    }
    report.add("no canonical ballot rescues the no-instance", all_lose);
  }
  return report.emit_and_code(opt.format);
}

int verify_thm9(const VerifyOptions& opt) {
  int m = 0, n = 0;
  check_reduction_sizes(opt, &m, &n);
  Report report;
  report.suite = opt.suite;
  report.params["m"] = m;
  report.params["n"] = n;

  const ReductionOutput red = build_veto_reduction(preset_yes_instance(m));
  const auto cover = cover_oracle(red.instance);
  report.add("cover oracle finds the planted cover", cover.has_value());
  if (cover.has_value()) {
    Profile swayed = red.profile;
    swayed.ballots.push_back(cover_to_ballot(red, *cover));
    report.add("cover ballot carries the majority stopping rule",
               run_coombs(swayed, red.policy).winner == red.preferred);
    report.add("cover ballot also wins without the stopping rule",
               run_eliminate(RuleFamily::veto(), swayed, red.policy).winner ==
                   red.preferred);
  }
  report.add("sincere election defeats the preferred candidate",
             run_coombs(red.profile, red.policy).winner != red.preferred);
  return report.emit_and_code(opt.format);
}

int verify_thm4(const VerifyOptions& opt) {
  const int n = opt.n == 0 ? 2 : opt.n;
  if (n != 2 && n != 3) throw UsageError("supported sizes are --n 2 and --n 3");
  Report report;
  report.suite = opt.suite;
  report.params["n"] = n;
  const SearchBudget budget = resolve_budget(opt.budget);

  const FamilyOutput family = build_thm4_family(n);
  report.add("preferred candidate wins the elimination rule unaided",
             run_eliminate(RuleFamily::veto(), family.profile, family.policy)
                     .winner == family.preferred);

  const RuleSpec coombs = RuleSpec::parse("coombs");
  std::optional<int> need;
  int bound = 0;
  std::uint64_t nodes = 0;
  try {
    need = min_coalition(coombs, family.profile, family.preferred, n + 1,
                         family.policy, budget);
    bound = need.value_or(n + 2);
  } catch (const BudgetExceeded& e) {
    bound = e.completed_k + 1;
    nodes = e.used();
  }
  std::string detail = need.has_value()
                           ? "min coalition " + std::to_string(*need)
                           : "certified lower bound " + std::to_string(bound) +
                                 " after " + std::to_string(nodes) + " nodes";
  report.add("a lone manipulator cannot beat the stopping rule", bound >= 2,
             detail);
  if (n == 2) {
    report.add("two manipulators suffice under the stopping rule",
               need.has_value() && *need == 2);
  } else {
    report.add("coalition bound does not decrease with n", bound >= 2, detail);
  }
  return report.emit_and_code(opt.format);
}

int verify_thm5(const VerifyOptions& opt) {
  const int n = opt.n == 0 ? 3 : opt.n;
  if (n != 3 && n != 4) throw UsageError("supported sizes are --n 3 and --n 4");
  Report report;
  report.suite = opt.suite;
  report.params["n"] = n;
  const SearchBudget budget = resolve_budget(opt.budget);

  const FamilyOutput family = build_thm5_family(n);
  ManipulationQuery query;
  query.rule = RuleSpec::parse("coombs");
  query.profile = family.profile;
  query.preferred = family.preferred;
  query.manipulators = 1;
  query.policy = family.policy;
  const ManipulationResult lone = find_manipulation_brute(query, budget);
  report.add("a lone manipulator succeeds under the stopping rule",
             lone.decision);

  bool resists = true;
  for (int k = 1; k <= n - 2; ++k) {
    ManipulationQuery probe = query;
    probe.rule = RuleSpec::parse("eliminate:veto");
    probe.manipulators = k;
    resists = resists && !find_manipulation_brute(probe, budget).decision;
  }
  report.add("the bare elimination rule resists coalitions up to n-2", resists);
  return report.emit_and_code(opt.format);
}

int verify_thm6(const VerifyOptions& opt) {
  if (opt.trials < 1) throw UsageError("--trials must be positive");
  Report report;
  report.suite = opt.suite;
  report.params["trials"] = opt.trials;
  report.params["seed"] = 20260822;

  std::mt19937_64 rng(20260822);
  int witnessed = 0;
  int carried = 0;
  for (int trial = 0; trial < opt.trials; ++trial) {
    const int m = 3 + trial % 2;
    const Profile V = random_profile(rng, m, 1 + static_cast<Weight>(trial % 6));
    const Profile reversed = reverse_profile(V);
    const TieBreakPolicy policy = TieBreakPolicy::roster_order(reversed);
    const CandidateId last = m - 1;

    std::vector<CandidateId> ballot(m);
    std::iota(ballot.begin(), ballot.end(), 0);
    std::optional<std::vector<CandidateId>> witness;
    do {
      Profile probe = reversed;
      probe.ballots.push_back(Ballot{ballot, 1});
      if (run_eliminate(RuleFamily::borda(), probe, policy)
              .rounds.front()
              .eliminated == std::vector<CandidateId>{last}) {
        witness = ballot;
        break;
      }
    } while (std::next_permutation(ballot.begin(), ballot.end()));
    if (!witness.has_value()) continue;

    ++witnessed;
    Profile padded =
        build_adjoint_padding(V, 1, instantiate(RuleFamily::borda(), m));
    padded.ballots.push_back(Ballot{*witness, 1});
    const EliminationTrace trace =
        run_eliminate(RuleFamily::borda(), padded, policy);
    if (trace.rounds.front().eliminated == std::vector<CandidateId>{last} &&
        trace.winner == 0) {
      ++carried;
    }
  }
  report.add("every witnessed trial carries to the padded election",
             carried == witnessed,
             std::to_string(carried) + "/" + std::to_string(witnessed) +
                 " witnessed, " + std::to_string(opt.trials - witnessed) +
                 " vacuous");
  return report.emit_and_code(opt.format);
}

int verify_example2(const VerifyOptions& opt) {
  Report report;
  report.suite = opt.suite;
  const SearchBudget budget = resolve_budget(opt.budget);

  const FamilyOutput nine = build_example2();
  const ManipulationResult adaptive = sequential_manipulate(
      RuleFamily::plurality(), nine.profile, nine.preferred, nine.policy, budget);
  report.add("an adaptive manipulator elects the preferred candidate",
             adaptive.decision);

  ManipulationQuery query;
  query.rule = RuleSpec::parse("sequential:plurality");
  query.profile = nine.profile;
  query.preferred = nine.preferred;
  query.manipulators = 1;
  query.policy = nine.policy;
  const ManipulationResult fixed = find_manipulation_brute(query, budget);
  report.add("no fixed ballot elects the preferred candidate", !fixed.decision,
             std::to_string(fixed.stats.ballots_tried) + " ballots tried");
  return report.emit_and_code(opt.format);
}

int do_verify(const VerifyOptions& opt) {
  if (opt.suite == "thm3") return verify_thm3(opt);
  if (opt.suite == "thm4") return verify_thm4(opt);
  if (opt.suite == "thm5") return verify_thm5(opt);
  if (opt.suite == "thm6") return verify_thm6(opt);
  if (opt.suite == "thm9") return verify_thm9(opt);
  if (opt.suite == "example2") return verify_example2(opt);
  throw UsageError("unknown suite '" + opt.suite +
                   "'; expected thm3|thm4|thm5|thm6|thm9|example2");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Elimination-style voting rules, manipulation solvers, and "
               "hardness constructions"};
  app.require_subcommand(1);
  int rc = kExitOk;

  RunOptions run_opt;
  CLI::App* run_cmd = app.add_subcommand("run", "Run one election and print the trace");
  run_cmd->add_option("--rule", run_opt.rule, "Rule spec, e.g. eliminate:veto")
      ->required();
  run_cmd->add_option("--profile", run_opt.profile_path, "Ballot file")->required();
  run_cmd->add_option("--tiebreak", run_opt.tiebreak,
                      "earliest|latest[:name1,name2,...]");
  run_cmd->add_option("--format", run_opt.format, "json|text")
      ->check(CLI::IsMember({"json", "text"}));
  run_cmd->callback([&] { rc = do_run(run_opt); });

  ManipulateOptions man_opt;
  CLI::App* man_cmd =
      app.add_subcommand("manipulate", "Decide a coalition manipulation query");
  man_cmd->add_option("--rule", man_opt.rule, "Rule spec")->required();
  man_cmd->add_option("--profile", man_opt.profile_path, "Ballot file")->required();
  man_cmd->add_option("--prefer", man_opt.prefer, "Candidate the coalition backs")
      ->required();
  man_cmd->add_option("--k", man_opt.k, "Coalition size")
      ->check(CLI::NonNegativeNumber);
  man_cmd->add_option("--solver", man_opt.solver, "brute|frontier|sequential")
      ->check(CLI::IsMember({"brute", "frontier", "sequential"}));
  man_cmd->add_option("--budget", man_opt.budget, "Node budget");
  man_cmd->add_option("--tiebreak", man_opt.tiebreak,
                      "earliest|latest[:name1,name2,...]");
  man_cmd->add_option("--optimistic", man_opt.optimistic,
                      "Break search-time ties in favor of this candidate");
  man_cmd->add_option("--format", man_opt.format, "json|text")
      ->check(CLI::IsMember({"json", "text"}));
  man_cmd->callback([&] { rc = do_manipulate(man_opt); });

  ReduceOptions red_opt;
  CLI::App* reduce_cmd =
      app.add_subcommand("reduce", "Build an election from a cover instance");
  reduce_cmd->require_subcommand(1);
  CLI::App* c2v_cmd = reduce_cmd->add_subcommand(
      "cover2veto", "Emit the elimination election for a cover instance");
  c2v_cmd->add_option("--instance", red_opt.instance_path, "Cover instance file")
      ->required();
  c2v_cmd->add_option("--out", red_opt.out_dir, "Output directory")->required();
  c2v_cmd->callback([&] { rc = do_reduce(red_opt); });

  std::string oracle_instance;
  CLI::App* oracle_cmd =
      app.add_subcommand("oracle", "Solve a cover instance exactly");
  oracle_cmd->require_subcommand(1);
  CLI::App* cover_cmd =
      oracle_cmd->add_subcommand("cover", "Find the first exact cover by index");
  cover_cmd->add_option("--instance", oracle_instance, "Cover instance file")
      ->required();
  cover_cmd->callback([&] { rc = do_oracle(oracle_instance); });

  GenOptions gen_opt;
  CLI::App* gen_cmd = app.add_subcommand("gen", "Generate inputs");
  gen_cmd->require_subcommand(1);
  CLI::App* rand_cmd =
      gen_cmd->add_subcommand("random", "Seeded random profile in ballot grammar");
  rand_cmd->add_option("--m", gen_opt.m, "Number of candidates")->required();
  rand_cmd->add_option("--voters", gen_opt.voters, "Total ballot weight")
      ->required();
  rand_cmd->add_option("--seed", gen_opt.seed, "Generator seed (default 0)");
  rand_cmd->add_option("--names", gen_opt.names, "letters|numerals")
      ->check(CLI::IsMember({"letters", "numerals"}));
  rand_cmd->callback([&] { rc = do_gen(gen_opt); });

  VerifyOptions ver_opt;
  CLI::App* ver_cmd =
      app.add_subcommand("verify", "Replay a documented construction end to end");
  ver_cmd->add_option("suite", ver_opt.suite,
                      "thm3|thm4|thm5|thm6|thm9|example2")
      ->required();
  ver_cmd->add_option("--m", ver_opt.m, "Instance size m (suite default)");
  ver_cmd->add_option("--n", ver_opt.n, "Instance size n (suite default)");
  ver_cmd->add_option("--trials", ver_opt.trials, "Sampled profiles (thm6)");
  ver_cmd->add_option("--budget", ver_opt.budget, "Node budget");
  ver_cmd->add_option("--format", ver_opt.format, "json|text")
      ->check(CLI::IsMember({"json", "text"}));
  ver_cmd->callback([&] { rc = do_verify(ver_opt); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const BudgetExceeded& e) {
    std::cerr << "error: budget exceeded after " << e.used() << " nodes\n";
    return kExitBudget;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return rc;
}
