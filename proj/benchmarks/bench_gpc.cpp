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
#include "lexv/gpc.hpp"

namespace {

void BM_EpFit(benchmark::State& state) {
  const lexv::Dataset d = lexv::gen_triangle(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lexv::ep_fit(d.features, d.labels, lexv::KernelSpec::rbf(20.0)));
  }
  state.SetComplexityN(static_cast<benchmark::IterationCount>(d.size()));
}
BENCHMARK(BM_EpFit)->Arg(25)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond)->Complexity();

void BM_ExplainGpc(benchmark::State& state) {
  const lexv::Dataset d = lexv::gen_triangle(static_cast<std::size_t>(state.range(0)), 1);
  const lexv::GpcModel m = lexv::ep_fit(d.features, d.labels, lexv::KernelSpec::rbf(20.0));
  lexv::Vector x(2);
  x << 0.4, 0.3;
  for (auto _ : state) benchmark::DoNotOptimize(lexv::explain_gpc(m, x));
  state.SetComplexityN(static_cast<benchmark::IterationCount>(d.size()));
}
BENCHMARK(BM_ExplainGpc)->Arg(25)->Arg(50)->Arg(100)->Arg(200)->Complexity();

}  // namespace
