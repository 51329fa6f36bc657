/* Copyright 2026 The delta-forge Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <fstream>
#include <sstream>

#include <benchmark/benchmark.h>

#include "delta/bounce/families.hpp"
#include "delta/mfa/dsl.hpp"
#include "delta/mfa/eval.hpp"
#include "delta/mfa/families.hpp"

namespace {

delta::mfa::Program load(const char* name) {
  std::ifstream is(std::string(DELTA_DATA_DIR) + "/" + name);
  std::ostringstream ss;
  ss << is.rdbuf();
  return delta::mfa::parse_program(ss.str());
}

struct JudgeFixture {
  delta::mfa::Program program;
  std::vector<delta::mfa::TestCase> tests;
  JudgeFixture() {
    const auto inst = delta::mfa::table_instance(delta::mfa::FamilyId::APPEND);
    program = load("append_rbr.mfa");
    for (const auto& t : delta::mfa::enumerate_tapes("RB", 12))
      tests.push_back({t, delta::mfa::spec_eval(inst, t)});
  }
};

const JudgeFixture& judge_fixture() {
  static const JudgeFixture f;
  return f;
}

void BM_JudgeSerial(benchmark::State& state) {
  const auto& f = judge_fixture();
  for (auto _ : state) benchmark::DoNotOptimize(delta::mfa::judge_all_serial(f.program, f.tests));
  state.SetItemsProcessed(state.iterations() * f.tests.size());
}

void BM_JudgeParallel(benchmark::State& state) {
  const auto& f = judge_fixture();
  for (auto _ : state) benchmark::DoNotOptimize(delta::mfa::judge_all_parallel(f.program, f.tests));
  state.SetItemsProcessed(state.iterations() * f.tests.size());
}

std::vector<delta::bounce::EntryRequest> entry_requests() {
  std::vector<delta::bounce::EntryRequest> reqs;
  for (std::size_t i = 0; i < 8; ++i)
    reqs.push_back({{delta::bounce::Axis::ROT_BOX}, 0, delta::derive(delta::Seed{7}, i), false});
  return reqs;
}

void BM_EntriesSerial(benchmark::State& state) {
  const auto reqs = entry_requests();
  for (auto _ : state) benchmark::DoNotOptimize(delta::bounce::build_entries_serial(reqs));
  state.SetItemsProcessed(state.iterations() * reqs.size());
}

void BM_EntriesParallel(benchmark::State& state) {
  const auto reqs = entry_requests();
  for (auto _ : state) benchmark::DoNotOptimize(delta::bounce::build_entries_parallel(reqs));
  state.SetItemsProcessed(state.iterations() * reqs.size());
}

}  // namespace

BENCHMARK(BM_JudgeSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_JudgeParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EntriesSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EntriesParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
