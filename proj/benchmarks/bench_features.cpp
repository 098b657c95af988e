// Copyright 2026 The mapface Authors
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


#include <benchmark/benchmark.h>

#include "mapface/extract.hpp"
#include "mapface/features.hpp"
#include "mapface/preprocess.hpp"
#include "mapface/random.hpp"

namespace {

using namespace mapface;

Plane random_plane(int n) {
  Rng rng(1);
  Plane p(n, n);
  for (auto& v : p.reshaped()) v = rng.uniform(0, 255);
  return p;
}

void BM_DctDecompose(benchmark::State& state) {
  const Plane p = random_plane(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(dct_decompose(p));
}
BENCHMARK(BM_DctDecompose)->Arg(32)->Arg(64)->Arg(128);

void BM_SelectSorted(benchmark::State& state) {
  const auto f = dct_decompose(random_plane(128));
  for (auto _ : state) benchmark::DoNotOptimize(select_features(f, 64, SelectionMode::per_image_sort));
}
BENCHMARK(BM_SelectSorted);

void BM_Extract(benchmark::State& state) {
  const Plane p = random_plane(128);
  const RgbImage img{p, p.reverse(), p.transpose()};
  ExtractionSpec spec;
  spec.color_mode = state.range(0) == 0 ? ColorMode::grayscale : ColorMode::ycbcr;
  for (auto _ : state) benchmark::DoNotOptimize(extract_features(img, spec));
  state.SetLabel(state.range(0) == 0 ? "gray" : "ycbcr");
}
BENCHMARK(BM_Extract)->Arg(0)->Arg(1);

}  // namespace
