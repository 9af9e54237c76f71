// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero when any criterion fails. Optional arguments select criteria
// by number, e.g. `acceptance 1 2 3`.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ilsuite/dataset/ilds.hpp"
#include "ilsuite/error.hpp"
#include "ilsuite/harness/evaluate.hpp"
#include "ilsuite/harness/expert.hpp"
#include "ilsuite/harness/training.hpp"
#include "ilsuite/ilrewards/adversarial.hpp"
#include "ilsuite/ilrewards/dril.hpp"
#include "ilsuite/ilrewards/gmmil.hpp"
#include "ilsuite/ilrewards/red.hpp"
#include "ilsuite/rlcore/gae.hpp"
#include "ilsuite/rlcore/ppo.hpp"
#include "oracles.hpp"

using namespace ilsuite;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int precision = 3) {
  std::ostringstream s;
  s << std::setprecision(precision) << v;
  return s.str();
}

Matrix gaussian(int rows, int cols, Rng& rng, double mean = 0.0, double sd = 1.0) {
  std::normal_distribution<double> n(mean, sd);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = n(rng);
  return m;
}

// ---------------------------------------------------------------- 1

Outcome gradient_oracle() {
  int instances = 0;
  double worst = 0.0;
  const auto check = [&](const ParamViews& analytic, const std::vector<double>& numeric) {
    worst = std::max(worst, oracle::relative_error(oracle::flatten(analytic), numeric));
    ++instances;
  };

  for (std::uint64_t seed = 0; seed < 15; ++seed) {  // policy NLL
    Rng rng(1000 + seed);
    PolicyInit init;
    init.hidden = {6, 5};
    init.final_layer_scale = 1.0;
    init.log_std = -0.4;
    const GaussianPolicy p = make_policy(3, 2, init, rng);
    const Matrix s = gaussian(3, 9, rng), a = gaussian(2, 9, rng);
    PolicyGradients g = zeros_like(p);
    nll_and_gradient(p, s, a, g);
    GaussianPolicy probe = p;
    PolicyGradients scratch = zeros_like(p);
    check(param_views(g), oracle::numeric_gradient(param_views(probe),
                                                   [&] { return nll_and_gradient(probe, s, a, scratch); }));
  }

  for (std::uint64_t seed = 0; seed < 15; ++seed) {  // PPO surrogate + value + entropy
    Rng rng(2000 + seed);
    PolicyInit init;
    init.hidden = {6, 5};
    init.final_layer_scale = 1.0;
    init.log_std = -0.5;
    GaussianPolicy policy = make_policy(3, 2, init, rng);
    MlpParams value = make_mlp(3, 1, {6, 5}, rng, std::sqrt(2.0), 1.0);
    const int n = 12;
    PpoBatch batch;
    batch.states = gaussian(3, n, rng);
    batch.actions = gaussian(2, n, rng);
    batch.advantages = gaussian(n, 1, rng).col(0);
    batch.returns = gaussian(n, 1, rng).col(0);
    batch.old_log_probs = policy_log_prob_batch(policy, batch.states, batch.actions).log_probs +
                          0.2 * gaussian(n, 1, rng).col(0);
    PpoConfig cfg;
    cfg.entropy_coef = 0.01;
    PolicyGradients pg = zeros_like(policy);
    MlpParams vg = zeros_like(value);
    ppo_objective(policy, value, batch, cfg, &pg, &vg);
    ParamViews params = param_views(policy);
    append_views(params, param_views(value));
    ParamViews grads = param_views(pg);
    append_views(grads, param_views(vg));
    check(grads, oracle::numeric_gradient(
                     params, [&] { return ppo_objective(policy, value, batch, cfg, nullptr, nullptr); }));
  }

  for (AdversarialKind kind : {AdversarialKind::gail, AdversarialKind::airl}) {  // cross-entropy + R1
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      Rng rng(3000 + seed + (kind == AdversarialKind::airl ? 100 : 0));
      Discriminator d = make_discriminator(kind, 2, 1, {6, 5}, 0.99, rng);
      const auto batch = [&](int n) {
        DiscBatch b;
        b.states = gaussian(2, n, rng);
        b.actions = gaussian(1, n, rng);
        b.next_states = gaussian(2, n, rng);
        b.terminals = Vector::Zero(n);
        b.terminals[0] = 1.0;
        b.log_pi = gaussian(n, 1, rng).col(0);
        return b;
      };
      const DiscBatch e = batch(7), a = batch(5);
      Discriminator g = zeros_like(d);
      disc_loss(d, e, a, 0.5, &g);
      check(param_views(g), oracle::numeric_gradient(param_views(d), [&] { return disc_loss(d, e, a, 0.5).total; }));
    }
  }

  for (std::uint64_t seed = 0; seed < 10; ++seed) {  // RED predictor MSE
    Rng rng(4000 + seed);
    RndPair pair = make_rnd_pair(4, 6, {7, 5}, rng);
    const Matrix x = gaussian(4, 9, rng);
    MlpParams g = zeros_like(pair.predictor);
    rnd_mse(pair, x, &g);
    check(param_views(g), oracle::numeric_gradient(param_views(pair.predictor), [&] { return rnd_mse(pair, x); }));
  }

  return {instances >= 50 && worst < 1e-4,
          std::to_string(instances) + " instances (nll, ppo, gail, airl, red), max relative error " + fmt(worst)};
}

// ---------------------------------------------------------------- 2

Outcome gae_oracle() {
  Rng rng(77);
  std::uniform_int_distribution<int> length(1, 64);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> g(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = length(rng);
    std::vector<double> r(n), v(n), d(n);
    for (int t = 0; t < n; ++t) {
      r[t] = g(rng);
      v[t] = g(rng);
      d[t] = unit(rng) < 0.15 ? 1.0 : 0.0;
    }
    const double bootstrap = g(rng), gamma = 0.9 + 0.1 * unit(rng), lambda = unit(rng);
    const auto expected = oracle::brute_force_gae(r, v, d, bootstrap, gamma, lambda);
    const auto est = compute_gae(Eigen::Map<Vector>(r.data(), n), Eigen::Map<Vector>(v.data(), n),
                                 Eigen::Map<Vector>(d.data(), n), bootstrap, gamma, lambda);
    for (int t = 0; t < n; ++t) worst = std::max(worst, std::abs(est.advantages[t] - expected[t]));
  }
  return {worst <= 1e-8, "100 sequences, max abs difference " + fmt(worst)};
}

// ---------------------------------------------------------------- 3

Outcome mmd_oracle() {
  Rng rng(88);
  std::uniform_int_distribution<int> size(2, 64);
  double worst = 0.0, worst_self = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix p = gaussian(4, size(rng), rng), q = gaussian(4, size(rng), rng, 0.4, 1.3);
    const KernelConfig cfg{0.5 + 0.1 * trial, 0.3 + 0.05 * trial, true};
    const double via_rewards = gmmil_rewards(p, p, q, cfg).mean() - gmmil_rewards(q, p, q, cfg).mean();
    const double naive = oracle::naive_mmd_squared(p, q, cfg.sigma1, cfg.sigma2);
    worst = std::max(worst, std::abs(via_rewards - naive));
    worst_self = std::max(worst_self, std::abs(mmd_squared(p, p, cfg)));
  }
  return {worst <= 1e-10 && worst_self <= 1e-12,
          "50 set pairs, reward aggregate vs naive " + fmt(worst) + ", MMD(P,P) " + fmt(worst_self)};
}

// ---------------------------------------------------------------- 4

Outcome table_one_grid() {
  const int points = 10000;
  const double lo = 1e-6, hi = 1.0 - 1e-6;
  bool log_negative = true, sign_ok = true, fairl_bounded = true, fairl_negative = true;
  double min_logit = 0.0, max_logit = 0.0, best = -std::numeric_limits<double>::infinity(), best_h = 0.0, spacing = 0.0;
  for (int i = 0; i < points; ++i) {
    const double d = lo + (hi - lo) * i / (points - 1);
    log_negative &= gail_log_reward(d) < 0.0;
    const double r = logit_reward(d);
    if (d < 0.5) sign_ok &= r < 0.0;
    if (d > 0.5) sign_ok &= r > 0.0;
    min_logit = std::min(min_logit, r);
    max_logit = std::max(max_logit, r);
    const double h = std::log(d) - std::log1p(-d);
    const double f = fairl_reward(h);
    fairl_bounded &= f <= std::exp(-1.0) + 1e-15;
    if (h > 0.0) fairl_negative &= f < 0.0;
    if (f > best) {
      best = f;
      best_h = h;
      const double next = lo + (hi - lo) * (i + 1) / (points - 1);
      spacing = std::abs((std::log(next) - std::log1p(-next)) - h);
    }
  }
  sign_ok &= logit_reward(0.5) == 0.0;
  const bool edges = min_logit < -10.0 && max_logit > 10.0;
  const bool peak = std::abs(best_h + 1.0) <= spacing;
  return {log_negative && sign_ok && edges && fairl_bounded && fairl_negative && peak,
          "logit range [" + fmt(min_logit) + ", " + fmt(max_logit) + "], FAIRL max " + fmt(best, 6) + " at h=" +
              fmt(best_h, 5) + " (spacing " + fmt(spacing) + ")"};
}

// ---------------------------------------------------------------- 5

Outcome red_dril_contracts() {
  Rng rng(99);
  RndPair pair = make_rnd_pair(5, 16, {8}, rng);
  pair.predictor = pair.target;
  pair.sigma = 0.7;
  const Vector same = red_rewards(pair, gaussian(5, 40, rng));
  const bool exact_one = (same.array() == 1.0).all();

  bool decreasing = true;
  double prev = red_reward_from_error(0.7, 0.0);
  for (int i = 1; i <= 2000; ++i) {
    const double r = red_reward_from_error(0.7, i * 0.005);
    decreasing &= r < prev;
    prev = r;
  }

  ExpertView e;
  e.states = gaussian(4, 250, rng);
  e.actions = 0.5 * e.states.topRows(2) - 0.3 * e.states.bottomRows(2);
  e.next_states = e.states;
  e.terminals = Vector::Zero(250);
  DropoutEnsemble ens{make_policy(4, 2, PolicyInit{{32, 32}, -2.0, std::sqrt(2.0), 0.01, 0.1}, rng)};
  DrilTrainConfig cfg;
  cfg.epochs = 5;
  cfg.mask_seed = 5;
  dril_pretrain(ens, e, cfg, rng);
  const double fraction = (dril_rewards(ens, e.states, e.actions, cfg.mask_seed).array() > 0).count() / 250.0;
  const bool quantile_ok = std::abs(fraction - ens.quantile) <= 1.0 / 250.0;

  DropoutEnsemble plain{make_policy(4, 2, PolicyInit{{16}, -2.0, std::sqrt(2.0), 0.01, 0.0}, rng)};
  dril_pretrain(plain, e, cfg, rng);
  const Vector r0 = dril_rewards(plain, gaussian(4, 100, rng, 0.0, 5.0), gaussian(2, 100, rng), 3);
  const bool all_positive = (r0.array() == 1.0).all();

  return {exact_one && decreasing && quantile_ok && all_positive,
          std::string("red identical=1 ") + (exact_one ? "yes" : "no") + ", decreasing " + (decreasing ? "yes" : "no") +
              ", dril expert positive fraction " + fmt(fraction) + " (q=" + fmt(ens.quantile) + "), no-dropout all +1 " +
              (all_positive ? "yes" : "no")};
}

// ---------------------------------------------------------------- 6

struct MethodScore {
  std::vector<double> scores;
  double mean() const {
    double s = 0.0;
    for (double x : scores) s += x;
    return s / static_cast<double>(scores.size());
  }
  std::string text() const {
    std::string out = fmt(mean()) + " [";
    for (std::size_t i = 0; i < scores.size(); ++i) out += (i ? " " : "") + fmt(scores[i]);
    return out + "]";
  }
};

Outcome end_to_end() {
  const EnvSpec env = make_env("pointmass");
  const std::vector<std::uint64_t> seeds{0, 1, 2};
  RunConfig base;
  base.env = "pointmass";
  base.steps = 300000;

  const auto t0 = std::chrono::steady_clock::now();
  RunConfig expert_cfg = base;
  expert_cfg.seed = seeds[0];
  const ExpertResult expert = generate_expert(expert_cfg, 25);
  const TrajectoryDataset data = subsample(expert.dataset, base.subsample);
  std::cout << "  expert checkpoint at step " << expert.checkpoint_step << ", return "
            << fmt(expert.checkpoint_return, 5) << "; dataset " << data.size() << " transitions" << std::endl;

  // Per seed: zero-action baseline and reference (expert) return on that seed's evaluation starts.
  std::map<std::uint64_t, std::pair<double, double>> anchors;
  std::map<std::uint64_t, double> lqr;
  for (std::uint64_t s : seeds) {
    const std::uint64_t es = evaluation_seed(s);
    anchors[s] = {evaluate_zero_action(env, base.eval_episodes, es).mean,
                  evaluate(expert.expert, env, base.eval_episodes, es).mean};
    lqr[s] = oracle::lqr_reference_return(env, base.eval_episodes, es);
  }
  const auto score = [&](std::uint64_t s, double r) {
    return normalized_score(r, anchors[s].first, anchors[s].second);
  };

  const auto run = [&](Algorithm algo) {
    MethodScore m;
    for (std::uint64_t s : seeds) {
      RunConfig c = base;
      c.algo = algo;
      c.seed = s;
      if (algo != Algorithm::ppo) c.dataset = "expert";
      const double r = (algo == Algorithm::ppo && s == seeds[0])
                           ? expert.ppo.evaluations.back().mean_return
                           : run_training(c, algo == Algorithm::ppo ? nullptr : &data).evaluations.back().mean_return;
      m.scores.push_back(score(s, r));
      if (algo == Algorithm::ppo)
        std::cout << "  ppo seed " << s << ": return " << fmt(r, 5) << ", score vs LQR "
                  << fmt(normalized_score(r, anchors[s].first, lqr[s])) << std::endl;
    }
    std::cout << "  " << to_string(algo) << ": score " << m.text() << std::endl;
    return m;
  };

  const MethodScore ppo = run(Algorithm::ppo);
  const MethodScore bc = run(Algorithm::bc);
  const MethodScore gmmil = run(Algorithm::gmmil);
  std::string adversarial = "none";
  MethodScore adv;
  for (Algorithm a : {Algorithm::gail, Algorithm::airl, Algorithm::fairl}) {
    adv = run(a);
    if (adv.mean() >= 0.75) {
      adversarial = to_string(a);
      break;
    }
  }
  const double minutes = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / 60.0;

  const bool pass = ppo.mean() >= 1.0 && bc.mean() >= 0.9 && gmmil.mean() >= 0.75 && adversarial != "none";
  return {pass, "scores (0 = zero action, 1 = expert return): ppo " + fmt(ppo.mean()) + ", bc " + fmt(bc.mean()) +
                    ", gmmil " + fmt(gmmil.mean()) + ", adversarial " + adversarial + " " + fmt(adv.mean()) + " (" +
                    fmt(minutes) + " min)"};
}

// ---------------------------------------------------------------- CLI helpers

int shell(const std::string& command) {
  const int status = std::system((command + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

const std::string kCli = ILSUITE_CLI;

// ---------------------------------------------------------------- 7

std::map<std::string, std::vector<std::string>> read_profile_csv(const fs::path& path) {
  std::map<std::string, std::vector<std::string>> rows;
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream s(line);
    for (std::string cell; std::getline(s, cell, ',');) cells.push_back(cell);
    if (!cells.empty()) rows[cells[0]] = cells;
  }
  return rows;
}

Outcome complexity_echo(const fs::path& work) {
  const fs::path dir = work / "profile";
  fs::create_directories(dir);
  const auto t0 = std::chrono::steady_clock::now();
  // A small expert set recorded by an LQR-free random policy is enough for timing.
  Rng rng(5);
  PolicyInit init;
  init.final_layer_scale = 1.0;
  const GaussianPolicy p = make_policy(4, 2, init, rng);
  Rng rec(6);
  save_dataset(record_expert(p, make_env("pointmass"), 25, rec), dir / "expert.ilds");

  const int code = shell(kCli + " profile --env pointmass --dataset " + (dir / "expert.ilds").string() +
                         " --steps 20480 --repeats 3 --scaling-batch 2048 --out-dir " + (dir / "out").string());
  if (code != 0) return {false, "profile exited with " + std::to_string(code)};

  const auto rows = read_profile_csv(dir / "out" / "profile.csv");
  const auto num = [&](const std::string& algo, std::size_t col) { return std::stod(rows.at(algo).at(col)); };
  const double gmmil_peak = num("gmmil", 5);
  bool memory = true;
  double runner_up = 0.0;
  for (const auto& [algo, row] : rows) {
    if (algo == "gmmil") continue;
    runner_up = std::max(runner_up, num(algo, 5));
    memory &= gmmil_peak > num(algo, 5);
  }
  double slowest_fixed = 0.0, fastest_adv = std::numeric_limits<double>::infinity();
  for (const char* a : {"red", "dril"}) slowest_fixed = std::max(slowest_fixed, num(a, 3));
  for (const char* a : {"gail", "airl", "fairl"}) fastest_adv = std::min(fastest_adv, num(a, 3));

  std::ifstream scaling(dir / "out" / "scaling.txt");
  double ratio = 0.0;
  for (std::string line; std::getline(scaling, line);)
    if (line.rfind("ratio ", 0) == 0) ratio = std::stod(line.substr(6));
  const double minutes = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / 60.0;

  return {ratio >= 1.7 && memory && slowest_fixed < fastest_adv,
          "kernel time ratio 2N/N " + fmt(ratio) + ", gmmil peak " + fmt(gmmil_peak, 4) + " MB vs next " +
              fmt(runner_up, 4) + " MB, red/dril train <= " + fmt(slowest_fixed) + " s vs adversarial >= " +
              fmt(fastest_adv) + " s (" + fmt(minutes) + " min)"};
}

// ---------------------------------------------------------------- 8

Outcome determinism(const fs::path& work) {
  std::vector<std::string> failures;
  int compared = 0;
  const std::string small = " --env pointmass --steps 4096 --eval-interval 2048 --eval-episodes 5 --set rollout_length=1024";
  for (int pass = 0; pass < 2; ++pass) {
    const fs::path dir = work / "determinism" / std::to_string(pass);
    fs::remove_all(dir);
    fs::create_directories(dir);
    const std::string d = dir.string();
    const int gen = shell(kCli + " generate-expert --env pointmass --steps 61440 --eval-interval 6144 --eval-episodes 5"
                          " --seed 3 --episodes 5 --out " + d + "/data.ilds --runs-dir " + d + "/gen_runs --policy-out " +
                          d + "/policy.json");
    if (gen != 0) return {false, "generate-expert exited with " + std::to_string(gen)};
    const std::string data = " --dataset " + d + "/data.ilds";
    for (const char* algo : {"bc", "gail", "airl", "fairl", "gmmil", "red", "dril", "ppo"})
      shell(kCli + " train --algo " + algo + small + (std::string(algo) == "ppo" ? "" : data) +
            " --seeds 0,1 --out-dir " + d + "/runs");
    shell(kCli + " evaluate --policy " + d + "/policy.json --env pointmass --episodes 7 --seed 4 --csv " + d +
          "/eval.csv");
    shell(kCli + " search --algo gail" + small + data + " --budget 2 --out-dir " + d + "/search");
    shell(kCli + " report --runs " + d + "/runs --dataset " + d + "/data.ilds --out-dir " + d + "/report");
  }
  const fs::path a = work / "determinism" / "0", b = work / "determinism" / "1";
  for (const auto& entry : fs::recursive_directory_iterator(a)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".csv") continue;
    const fs::path rel = fs::relative(entry.path(), a);
    ++compared;
    if (!fs::exists(b / rel) || slurp(entry.path()) != slurp(b / rel)) failures.push_back(rel.string());
  }
  // Every subcommand must have produced at least one CSV.
  for (const char* expected : {"gen_runs", "runs", "eval.csv", "search/trials.csv", "report/runs.csv"})
    if (!fs::exists(a / expected)) failures.push_back(std::string("missing ") + expected);
  std::string detail = std::to_string(compared) + " CSV files compared across two executions";
  if (!failures.empty()) {
    detail += "; differing or missing:";
    for (const auto& f : failures) detail += " " + f;
  }
  return {failures.empty() && compared > 0, detail};
}

// ---------------------------------------------------------------- 9

Outcome dataset_round_trip() {
  Rng rng(123);
  int identical = 0;
  for (int i = 0; i < 100; ++i) {
    const auto ds = oracle::random_dataset(rng);
    const std::string bytes = encode_ilds(ds);
    const auto back = decode_ilds(bytes);
    identical += back == ds && encode_ilds(back) == bytes;
  }
  const auto good = encode_ilds(oracle::random_dataset(rng, false));
  const auto rejects = [](const std::string& bytes) {
    try {
      decode_ilds(bytes);
    } catch (const FormatError&) {
      return true;
    }
    return false;
  };
  int rejected = 0, cases = 0;
  for (std::size_t offset : {0, 1, 2, 3, 4, 5, 9, 13, 21, 29}) {  // magic, version, dims, counts, end offsets
    std::string bad = good;
    bad[offset] = static_cast<char>(bad[offset] ^ 0x5a);
    rejected += rejects(bad);
    ++cases;
  }
  rejected += rejects(good.substr(0, good.size() / 2)) + rejects(good.substr(0, 3)) + rejects(good + "x");
  cases += 3;
  return {identical == 100 && rejected == cases, std::to_string(identical) + "/100 identical round trips, " +
                                                      std::to_string(rejected) + "/" + std::to_string(cases) +
                                                      " corrupted headers rejected"};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  const fs::path work = fs::temp_directory_path() / "ilsuite_acceptance";
  fs::create_directories(work);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"gradient oracle", gradient_oracle},
      {"GAE oracle", gae_oracle},
      {"MMD/GMMIL oracle", mmd_oracle},
      {"reward-function property grid", table_one_grid},
      {"RED/DRIL contracts", red_dril_contracts},
      {"end-to-end point mass", end_to_end},
      {"complexity ordering", [&] { return complexity_echo(work); }},
      {"determinism", [&] { return determinism(work); }},
      {"dataset round trip", dataset_round_trip},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int number = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.count(number)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !o.pass;
    std::cout << "criterion " << number << " " << criteria[i].first << ": " << (o.pass ? "PASS" : "FAIL") << " ("
              << o.detail << ") [" << fmt(s) << " s]" << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
