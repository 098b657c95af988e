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


#include <vector>

#include <benchmark/benchmark.h>

#include "mapface/classify.hpp"
#include "mapface/eval.hpp"
#include "mapface/random.hpp"

namespace {

using namespace mapface;

std::vector<ClassSamples> make_classes(std::size_t c, Eigen::Index k, std::size_t n) {
  Rng rng(7);
  std::vector<ClassSamples> out;
  for (std::size_t i = 0; i < c; ++i) {
    std::vector<Eigen::VectorXd> s;
    for (std::size_t j = 0; j < n; ++j) {
      Eigen::VectorXd v(k);
      for (auto& x : v) x = rng.normal();
      s.push_back(v);
    }
    out.push_back({"c" + std::to_string(1000 + i), {s}});
  }
  return out;
}

void BM_Train(benchmark::State& state) {
  const auto classes = make_classes(static_cast<std::size_t>(state.range(0)), 64, 5);
  for (auto _ : state) benchmark::DoNotOptimize(MapModel::train(classes, ColorMode::grayscale));
}
BENCHMARK(BM_Train)->Arg(40)->Arg(200);

void BM_AddClass(benchmark::State& state) {
  const auto classes = make_classes(41, 64, 5);
  const std::vector<ClassSamples> base(classes.begin(), classes.end() - 1);
  const auto model = MapModel::train(base, ColorMode::grayscale);
  for (auto _ : state) {
    auto copy = model;
    copy.add_class(classes.back());
    benchmark::DoNotOptimize(copy);
  }
}
BENCHMARK(BM_AddClass);

void BM_ClassifyChannel(benchmark::State& state) {
  const auto classes = make_classes(static_cast<std::size_t>(state.range(0)), 64, 5);
  const auto model = MapModel::train(classes, ColorMode::grayscale);
  const Eigen::VectorXd x = classes.front().per_channel[0][0];
  for (auto _ : state) benchmark::DoNotOptimize(model.classify_channel(x, Channel::Y));
}
BENCHMARK(BM_ClassifyChannel)->Arg(40)->Arg(200);

void BM_RocEer(benchmark::State& state) {
  Rng rng(3);
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> g(n), i(n * 39);
  for (auto& v : g) v = rng.normal(1.0, 1.0);
  for (auto& v : i) v = rng.normal();
  for (auto _ : state) benchmark::DoNotOptimize(roc_eer(g, i));
}
BENCHMARK(BM_RocEer)->Arg(200)->Arg(2000);

}  // namespace
