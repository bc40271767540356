// Copyright 2026 The vecforecast Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "vf/kernels.hpp"
#include "vf/metrics.hpp"
#include "vf/synth.hpp"

namespace {

std::vector<double> random_buffer(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

template <auto Gemm>
void BM_Gemm(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_buffer(n * n, 1);
  const auto b = random_buffer(n * n, 2);
  std::vector<double> c(n * n);
  for (auto _ : state) {
    Gemm(a, b, c, n, n, n);
    benchmark::DoNotOptimize(c.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n * n * n));
}

BENCHMARK(BM_Gemm<vf::kernels::serial::gemm>)->Name("gemm/serial")->Arg(64)->Arg(128)->Arg(256);
BENCHMARK(BM_Gemm<vf::kernels::parallel::gemm>)->Name("gemm/parallel")->Arg(64)->Arg(128)->Arg(256);
BENCHMARK(BM_Gemm<vf::kernels::serial::gemm_tn>)->Name("gemm_tn/serial")->Arg(128);
BENCHMARK(BM_Gemm<vf::kernels::parallel::gemm_tn>)->Name("gemm_tn/parallel")->Arg(128);
BENCHMARK(BM_Gemm<vf::kernels::serial::gemm_nt>)->Name("gemm_nt/serial")->Arg(128);
BENCHMARK(BM_Gemm<vf::kernels::parallel::gemm_nt>)->Name("gemm_nt/parallel")->Arg(128);

// Metric evaluation on synthetic scenes whose predictions are the ground
// truth shifted sideways.
std::vector<vf::EvaluationCase> metric_batch(std::size_t n) {
  vf::SynthConfig cfg;
  std::vector<vf::EvaluationCase> batch;
  for (std::size_t i = 0; i < n; ++i) {
    const vf::Scene s = vf::generate_scene(cfg, i, "bench");
    vf::EvaluationCase c;
    for (int t = cfg.episode.t_obs; t < cfg.episode.t_obs + cfg.episode.t_pred; ++t) {
      c.gt.push_back(s.target.states[static_cast<std::size_t>(t)].position());
    }
    for (int k = 0; k < cfg.episode.k; ++k) {
      vf::Trajectory tr = c.gt;
      for (auto& p : tr) p.y += 0.3 * k;
      c.preds.trajectories.push_back(tr);
      c.preds.scores.push_back(1.0 / cfg.episode.k);
    }
    c.preds.frame = vf::Frame::kWorld;
    c.area = s.drivable_area;
    batch.push_back(std::move(c));
  }
  return batch;
}

template <auto Evaluate>
void BM_Metrics(benchmark::State& state) {
  const auto batch = metric_batch(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Evaluate(batch, vf::kDefaultMissThreshold));
}

BENCHMARK(BM_Metrics<vf::serial::evaluate_batch>)->Name("metrics/serial")->Arg(200);
BENCHMARK(BM_Metrics<vf::parallel::evaluate_batch>)->Name("metrics/parallel")->Arg(200);

}  // namespace

BENCHMARK_MAIN();
