/*
 * Copyright 2026 The lexv Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <benchmark/benchmark.h>

#include "lexv/data.hpp"
#include "lexv/mimic.hpp"

namespace {

void BM_ExplainEstimated(benchmark::State& state) {
  const lexv::Dataset d = lexv::gen_three_clusters(static_cast<std::size_t>(state.range(0)), 1);
  const lexv::ParzenMimic m(d.features, d.labels, 0.2);
  lexv::Vector x(2);
  x << 0.5, 0.1;
  for (auto _ : state) benchmark::DoNotOptimize(lexv::explain_estimated(m, x, 1));
  state.SetComplexityN(static_cast<benchmark::IterationCount>(d.size()));
}
BENCHMARK(BM_ExplainEstimated)->Arg(300)->Arg(1000)->Arg(3000)->Complexity();

void BM_HessianDirection(benchmark::State& state) {
  const lexv::Dataset d = lexv::gen_three_clusters(static_cast<std::size_t>(state.range(0)), 1);
  const lexv::ParzenMimic m(d.features, d.labels, 0.2);
  const lexv::Vector x = lexv::Vector::Zero(2);
  for (auto _ : state) benchmark::DoNotOptimize(lexv::hessian_direction(m, x, 1));
}
BENCHMARK(BM_HessianDirection)->Arg(300)->Arg(1000);

void BM_SelectWidthLoo(benchmark::State& state) {
  const lexv::Dataset d = lexv::gen_three_clusters(static_cast<std::size_t>(state.range(0)), 1);
  const std::vector<double> grid = lexv::default_sigma_grid(d.features);
  for (auto _ : state) benchmark::DoNotOptimize(lexv::select_width_loo(d.features, d.labels, grid));
}
BENCHMARK(BM_SelectWidthLoo)->Arg(150)->Arg(300)->Unit(benchmark::kMillisecond);

}  // namespace
