#include "elimvote/random.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace elimvote {

Profile random_profile(std::mt19937_64& rng, int num_candidates, Weight total_weight,
                       RosterNaming naming) {
  if (num_candidates < 1) throw std::invalid_argument("candidate count must be positive");
  if (total_weight < 1) throw std::invalid_argument("total weight must be positive");
  Profile profile;
  for (int i = 0; i < num_candidates; ++i) {
    if (naming == RosterNaming::Numerals) {
      profile.roster.push_back(std::to_string(i));
    } else if (i < 26) {
      profile.roster.push_back(std::string(1, static_cast<char>('a' + i)));
    } else {
      profile.roster.push_back("c" + std::to_string(i + 1));
    }
  }
  std::vector<CandidateId> ranking(static_cast<std::size_t>(num_candidates));
  std::iota(ranking.begin(), ranking.end(), 0);
  for (Weight v = 0; v < total_weight; ++v) {
    std::shuffle(ranking.begin(), ranking.end(), rng);
    auto match = std::find_if(profile.ballots.begin(), profile.ballots.end(),
                              [&](const Ballot& b) { return b.ranking == ranking; });
    if (match != profile.ballots.end()) {
      match->multiplicity += 1;
    } else {
      profile.ballots.push_back({ranking, 1});
    }
  }
  return profile;
}

}  // namespace elimvote
