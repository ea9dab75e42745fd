#include <benchmark/benchmark.h>

#include <random>

#include "lia2c/agents/actor_critic.hpp"
#include "lia2c/harness/experiment.hpp"
#include "lia2c/latent/encoder_decoder.hpp"
#include "lia2c/nn/mlp.hpp"
#include "lia2c/org/org.hpp"
#include "lia2c/population/configuration.hpp"
#include "lia2c/population/rectify.hpp"

using namespace lia2c;

namespace {

void BM_CriticForwardBatch(benchmark::State& state) {
  std::mt19937_64 rng(1);
  nn::Mlp net({25, 64, 64, 1}, nn::Activation::kTanh, nn::Head::kLinear);
  net.initialize(rng);
  const nn::Matrix x = nn::Matrix::Random(25, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(net.forward_batch(x));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CriticForwardBatch)->Arg(1)->Arg(50);

void BM_CriticGrad(benchmark::State& state) {
  std::mt19937_64 rng(2);
  nn::Mlp net({25, 64, 64, 1}, nn::Activation::kTanh, nn::Head::kLinear);
  net.initialize(rng);
  const std::vector<double> x(25, 0.3), u = {1.0};
  for (auto _ : state) benchmark::DoNotOptimize(net.grad(x, u));
}
BENCHMARK(BM_CriticGrad);

void BM_ConfigDistribution(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  std::vector<pop::ActionDistribution> agents(static_cast<std::size_t>(n),
                                              pop::ActionDistribution({0.1, 0.2, 0.3, 0.4}));
  for (auto _ : state) benchmark::DoNotOptimize(pop::config_distribution(agents));
}
BENCHMARK(BM_ConfigDistribution)->Arg(6)->Arg(30);

void BM_Rectify(benchmark::State& state) {
  const pop::PrivateObservation obs{pop::Configuration({12, 9, 8}), 0.1};
  for (auto _ : state) benchmark::DoNotOptimize(pop::rectify_observation(obs, 3));
}
BENCHMARK(BM_Rectify);

void BM_EncoderDecoderStep(benchmark::State& state) {
  std::mt19937_64 rng(3);
  latent::EncoderDecoder ed(latent::LatentDims{}, rng);
  latent::EdBatch batch;
  for (int t = 0; t < 50; ++t) {
    latent::EdStep s;
    s.input = {t % 3, {0.5, 0.25, 0.25}, t % 3, pop::ActionDistribution::uniform(3)};
    s.next_public_obs = (t + 1) % 3;
    s.rectified = pop::Configuration({2, 1, 1});
    s.prior = pop::DirichletParams({1.0 + t, 2.0, 1.0});
    batch.push_back(std::move(s));
  }
  for (auto _ : state) benchmark::DoNotOptimize(ed.train_step(batch, true, rng));
}
BENCHMARK(BM_EncoderDecoderStep);

void BM_OrgTick(benchmark::State& state) {
  std::mt19937_64 rng(4);
  org::OrgConfig cfg;
  cfg.n_employees = static_cast<int>(state.range(0));
  const auto start = org::reset(cfg, rng).state;
  org::JointAction joint;
  for (int i = 0; i < cfg.n_employees; ++i) joint.push_back(static_cast<org::Action>(i % 3));
  for (auto _ : state) {
    benchmark::DoNotOptimize(org::rewards(cfg.rewards, start, joint));
    benchmark::DoNotOptimize(org::transition(start, joint));
    for (const auto& m : start.roster) {
      benchmark::DoNotOptimize(org::private_obs(start, joint, m.id, cfg.delta, false, rng));
    }
  }
}
BENCHMARK(BM_OrgTick)->Arg(5)->Arg(30);

void BM_TrainingEpisodes(benchmark::State& state) {
  harness::ExperimentConfig cfg;
  cfg.variant = static_cast<agents::Variant>(state.range(0));
  cfg.total_steps = 10 * cfg.env.horizon;
  for (auto _ : state) benchmark::DoNotOptimize(harness::run_training(cfg, 1));
  state.SetItemsProcessed(state.iterations() * cfg.total_steps);
}
BENCHMARK(BM_TrainingEpisodes)
    ->Arg(static_cast<int>(agents::Variant::kLia2c))
    ->Arg(static_cast<int>(agents::Variant::kIa2cdm))
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
