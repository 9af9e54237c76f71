#include "ilsuite/ilrewards/provider.hpp"

#include "ilsuite/error.hpp"
#include "ilsuite/ilrewards/adversarial.hpp"
#include "ilsuite/ilrewards/dril.hpp"
#include "ilsuite/ilrewards/gmmil.hpp"
#include "ilsuite/ilrewards/red.hpp"

namespace ilsuite {

Algorithm parse_algorithm(const std::string& name) {
  for (Algorithm a : all_algorithms())
    if (to_string(a) == name) return a;
  throw ConfigError("unknown algorithm '" + name + "'");
}

std::string to_string(Algorithm algo) {
  switch (algo) {
    case Algorithm::bc: return "bc";
    case Algorithm::gail: return "gail";
    case Algorithm::airl: return "airl";
    case Algorithm::fairl: return "fairl";
    case Algorithm::gmmil: return "gmmil";
    case Algorithm::red: return "red";
    case Algorithm::dril: return "dril";
    case Algorithm::ppo: return "ppo";
  }
  return "?";
}

std::vector<Algorithm> all_algorithms() {
  return {Algorithm::bc, Algorithm::gail, Algorithm::airl, Algorithm::fairl,
          Algorithm::gmmil, Algorithm::red, Algorithm::dril, Algorithm::ppo};
}

Capabilities capabilities(Algorithm algo, bool gmmil_self_similarity) {
  Capabilities c;
  switch (algo) {
    case Algorithm::bc:
      c.requires_pretraining = true;
      c.interacts = false;
      break;
    case Algorithm::gail:
    case Algorithm::airl:
    case Algorithm::fairl:
      c.updates_online = true;
      c.penalises_self = true;
      break;
    case Algorithm::gmmil:
      c.penalises_self = gmmil_self_similarity;
      break;
    case Algorithm::red:
    case Algorithm::dril:
      c.requires_pretraining = true;
      break;
    case Algorithm::ppo:
      c.uses_dataset = false;
      break;
  }
  return c;
}

std::unique_ptr<RewardProvider> make_provider(Algorithm algo, const ExpertView& expert, const ProviderConfig& config) {
  if (expert.size() == 0) throw ConfigError("reward provider needs a non-empty expert dataset");
  switch (algo) {
    case Algorithm::gail: return make_adversarial_provider(AdversarialKind::gail, expert, config);
    case Algorithm::airl: return make_adversarial_provider(AdversarialKind::airl, expert, config);
    case Algorithm::fairl: return make_adversarial_provider(AdversarialKind::fairl, expert, config);
    case Algorithm::gmmil: return make_gmmil_provider(expert, config);
    case Algorithm::red: return make_red_provider(expert, config);
    case Algorithm::dril: return make_dril_provider(expert, config);
    case Algorithm::bc:
    case Algorithm::ppo: break;
  }
  throw ConfigError(to_string(algo) + " does not use a learned reward");
}

}  // namespace ilsuite
