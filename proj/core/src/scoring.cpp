#include "elimvote/scoring.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <stdexcept>

namespace elimvote {

namespace {

void check_rule_entries(const ScoringVector& entries, bool forbid_constant) {
  if (entries.empty()) throw std::invalid_argument("scoring vector is empty");
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i] < 0) throw std::invalid_argument("scoring vector entry is negative");
    if (i + 1 < entries.size() && entries[i] < entries[i + 1]) {
      throw std::invalid_argument("scoring vector is not nonincreasing");
    }
  }
  if (forbid_constant && entries.front() == entries.back()) {
    throw std::invalid_argument("scoring vector is constant");
  }
}

ScoringVector plurality_vector(int m) {
  ScoringVector v(static_cast<std::size_t>(m), 0);
  v[0] = 1;
  return v;
}

// Length-m prefix of the canonical vector (zero padded); constant prefixes
// degrade every round to a no-op, so they fall back to plurality.
ScoringVector truncated_prefix(const ScoringVector& canonical, int m) {
  ScoringVector v(static_cast<std::size_t>(m), 0);
  for (int i = 0; i < m && i < static_cast<int>(canonical.size()); ++i) {
    v[static_cast<std::size_t>(i)] = canonical[static_cast<std::size_t>(i)];
  }
  if (v.front() == v.back()) return plurality_vector(m);
  return v;
}

ScoringVector parse_entries(std::string_view text) {
  ScoringVector entries;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    std::string_view part = text.substr(
        start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    Weight value = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
    if (ec != std::errc() || ptr != part.data() + part.size()) {
      throw std::invalid_argument("bad scoring vector entry: " + std::string(part));
    }
    entries.push_back(value);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return entries;
}

}  // namespace

RuleFamily RuleFamily::plurality() { return {ScoringKind::Plurality, 0, {}}; }
RuleFamily RuleFamily::veto() { return {ScoringKind::Veto, 0, {}}; }
RuleFamily RuleFamily::borda() { return {ScoringKind::Borda, 0, {}}; }

RuleFamily RuleFamily::kapproval(int k) {
  if (k < 1) throw std::invalid_argument("k-approval needs k >= 1");
  return {ScoringKind::KApproval, k, {}};
}

RuleFamily RuleFamily::heisman() { return {ScoringKind::Heisman, 0, {}}; }
RuleFamily RuleFamily::eurovision() { return {ScoringKind::Eurovision, 0, {}}; }

RuleFamily RuleFamily::custom(ScoringVector entries) {
  check_rule_entries(entries, true);
  return {ScoringKind::Custom, 0, std::move(entries)};
}

RuleFamily RuleFamily::truncated(ScoringVector entries) {
  check_rule_entries(entries, false);
  if (entries.front() == 0) throw std::invalid_argument("truncated rule scores nothing");
  return {ScoringKind::Truncated, 0, std::move(entries)};
}

RuleFamily RuleFamily::parse(std::string_view text) {
  if (text == "plurality") return plurality();
  if (text == "veto") return veto();
  if (text == "borda") return borda();
  if (text == "heisman") return heisman();
  if (text == "eurovision") return eurovision();
  constexpr std::string_view kApprovalPrefix = "kapproval:";
  constexpr std::string_view kCustomPrefix = "custom:";
  constexpr std::string_view kTruncPrefix = "trunc:";
  if (text.starts_with(kApprovalPrefix)) {
    std::string_view arg = text.substr(kApprovalPrefix.size());
    int k = 0;
    auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), k);
    if (ec != std::errc() || ptr != arg.data() + arg.size()) {
      throw std::invalid_argument("bad k-approval parameter: " + std::string(arg));
    }
    return kapproval(k);
  }
  if (text.starts_with(kCustomPrefix)) {
    return custom(parse_entries(text.substr(kCustomPrefix.size())));
  }
  if (text.starts_with(kTruncPrefix)) {
    return truncated(parse_entries(text.substr(kTruncPrefix.size())));
  }
  throw std::invalid_argument("unknown scoring rule: " + std::string(text));
}

std::string RuleFamily::label() const {
  auto join = [](const ScoringVector& entries) {
    std::ostringstream out;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (i) out << ",";
      out << entries[i];
    }
    return out.str();
  };
  switch (kind) {
    case ScoringKind::Plurality: return "plurality";
    case ScoringKind::Veto: return "veto";
    case ScoringKind::Borda: return "borda";
    case ScoringKind::KApproval: return "kapproval:" + std::to_string(approval_k);
    case ScoringKind::Heisman: return "heisman";
    case ScoringKind::Eurovision: return "eurovision";
    case ScoringKind::Custom: return "custom:" + join(entries);
    case ScoringKind::Truncated: return "trunc:" + join(entries);
  }
  throw std::logic_error("unreachable");
}

ScoringVector instantiate(const RuleFamily& family, int m) {
  if (m < 1) throw std::invalid_argument("candidate count must be positive");
  const auto n = static_cast<std::size_t>(m);
  switch (family.kind) {
    case ScoringKind::Plurality:
      return plurality_vector(m);
    case ScoringKind::Veto: {
      ScoringVector v(n, 1);
      v[n - 1] = 0;
      return v;
    }
    case ScoringKind::Borda: {
      ScoringVector v(n);
      for (int i = 0; i < m; ++i) v[static_cast<std::size_t>(i)] = m - 1 - i;
      return v;
    }
    case ScoringKind::KApproval:
      return truncated_prefix(ScoringVector(static_cast<std::size_t>(family.approval_k), 1), m);
    case ScoringKind::Heisman:
      return truncated_prefix({3, 2, 1}, m);
    case ScoringKind::Eurovision:
      return truncated_prefix({12, 10, 8, 7, 6, 5, 4, 3, 2, 1}, m);
    case ScoringKind::Truncated:
      return truncated_prefix(family.entries, m);
    case ScoringKind::Custom: {
      ScoringVector v(n, 0);
      for (int i = 0; i < m && i < static_cast<int>(family.entries.size()); ++i) {
        v[static_cast<std::size_t>(i)] = family.entries[static_cast<std::size_t>(i)];
      }
      return v;
    }
  }
  throw std::logic_error("unreachable");
}

ScoringVector adjoint(const ScoringVector& v) {
  ScoringVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = v.front() - v[v.size() - 1 - i];
  }
  return out;
}

}  // namespace elimvote
