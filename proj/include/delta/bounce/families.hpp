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

#ifndef DELTA_BOUNCE_FAMILIES_HPP
#define DELTA_BOUNCE_FAMILIES_HPP

#include <array>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "delta/bounce/periodic.hpp"
#include "delta/bounce/scene.hpp"
#include "delta/bounce/sim.hpp"
#include "delta/common/rng.hpp"

namespace delta::bounce {

enum class Axis { ROT_OBJ, ROT_BOX, MOV_BOX, GRAVITY, MULTI_BOX, MULTI_OBJ };

inline constexpr std::array<Axis, 6> kAllAxes = {Axis::ROT_OBJ, Axis::ROT_BOX,   Axis::MOV_BOX,
                                                 Axis::GRAVITY, Axis::MULTI_BOX, Axis::MULTI_OBJ};

std::string_view to_string(Axis axis);
// Accepts ROT_BALL as an alias of MULTI_OBJ.
std::optional<Axis> axis_from_string(std::string_view name);

using AxisSet = std::vector<Axis>;

// Sorted, deduplicated copy. Throws std::invalid_argument when empty.
AxisSet normalize(AxisSet axes);
// "ROT_OBJ+ROT_BOX" style label of a normalized set.
std::string axes_label(const AxisSet& axes);
// Parses "ROT_BOX" or "ROT_BOX+ROT_OBJ" (also comma separated).
AxisSet parse_axes(std::string_view text);

inline constexpr int kTierCount = 5;

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};
struct IntRange {
  int lo = 0;
  int hi = 0;
};

// One cell of the family-by-difficulty table.
struct DifficultyRow {
  double f = 1.5;  // container diameter factor over the 300 m base
  IntRange outer;
  std::optional<IntRange> inner;
  std::optional<double> ball_radius;
  std::optional<Range> omega;
  bool time_varying = false;
  std::optional<Range> amplitude;
  PathKind path = PathKind::None;
  double path_frequency = 0.0;  // sin1d only
  bool chaotic_path = false;
  GravityMode gravity = GravityMode::None;
  int containers = 1;
  IntRange balls{1, 1};
  Range speed;
};

// Throws std::out_of_range for a tier outside [0, 4].
const DifficultyRow& difficulty_row(Axis axis, int tier);

// Ball radius used by rows that leave it unspecified.
double default_ball_radius(int tier);

inline constexpr double kHorizonBase = 3.0;
inline double horizon(int tier) { return kHorizonBase + tier; }

struct SampleOptions {
  int retry_budget = 50;
  double margin = 5.0;          // extra clearance inside the incircle
  double container_gap = 20.0;  // clearance between container circumcircles
  SimConfig truth = kTruthConfig;
  SimConfig baseline = kBaselineConfig;
};

class RetryBudgetExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rejection sampler; the accepted scene is feasible, has a wall impact before
// the horizon and passes sanity_check at its key timestamps (stored in the
// metadata). Pure in (axes, tier, seed).
Scene sample_scene(const AxisSet& axes, int tier, Seed seed, const SampleOptions& options = {});

// Time of the first resolved contact before `t_end`, if any.
std::optional<double> first_impact(const Scene& scene, const SimConfig& config, double t_end);

// Largest time up to horizon(tier) before which the baseline and truth
// integrators stay within a third of the sanity threshold, probed every 0.05 s.
// Only collision-dense multi-ball scenes end up below the tier horizon.
double predictable_horizon(const Scene& scene, int tier, const SimConfig& baseline = kBaselineConfig,
                           const SimConfig& truth = kTruthConfig);

// Five increasing times, one per equal bin of (first impact, end], rounded to
// 0.01 s. `end` defaults to horizon(tier).
std::vector<double> choose_timestamps(const Scene& scene, int tier, Seed seed, const SimConfig& truth = kTruthConfig,
                                      std::optional<double> end = std::nullopt);

inline constexpr double kDefaultTolerance = 50.0;

struct PositionTest {
  double t = 0.0;
  std::vector<Vec2> expected;
  friend bool operator==(const PositionTest&, const PositionTest&) = default;
};

struct DatasetEntry {
  std::string id;
  std::string prompt;
  std::vector<PositionTest> tests;
  int difficulty = 0;
  std::vector<double> timestamps;
  double tolerance = kDefaultTolerance;
  Scene scene;
  friend bool operator==(const DatasetEntry&, const DatasetEntry&) = default;
};

// Rounds to 2 decimals and maps -0.0 to 0.0.
double round2(double x);

std::string render_prompt(const Scene& scene);

// Expected positions come from the truth config.
DatasetEntry build_entry(const Scene& scene, const std::vector<double>& timestamps,
                         double tolerance = kDefaultTolerance, std::string id = {});

void to_json(nlohmann::json& j, const DatasetEntry& entry);
void from_json(const nlohmann::json& j, DatasetEntry& entry);

// One entry to synthesize: a sampled family scene, or a periodic scene.
struct EntryRequest {
  AxisSet axes;
  int tier = 0;
  Seed seed;
  bool periodic = false;
};

DatasetEntry build_requested(const EntryRequest& request, const SampleOptions& options = {});

// Same output in the same order; the parallel variant spreads requests over
// OpenMP threads.
std::vector<DatasetEntry> build_entries_serial(const std::vector<EntryRequest>& requests,
                                               const SampleOptions& options = {});
std::vector<DatasetEntry> build_entries_parallel(const std::vector<EntryRequest>& requests,
                                                 const SampleOptions& options = {});

enum class SplitKind { Explorative, Compositional, Transformative };

std::string_view to_string(SplitKind kind);
std::optional<SplitKind> split_from_string(std::string_view name);

struct SplitCounts {
  std::size_t train = 1000;
  std::size_t test = 100;
};

struct SplitFile {
  std::string name;
  std::vector<EntryRequest> requests;
};

// File layout of a split. Explorative covers `families` (all six when empty):
//   explorative_<F>_train, explorative_<F>_test_id, explorative_<F>_test_ood_<tier>
// Compositional: ROT_BOX and ROT_OBJ train files, joint ROT_OBJ+ROT_BOX test.
// Transformative: ROT_BOX Basic train, periodic test.
std::vector<SplitFile> plan_split(SplitKind kind, const std::vector<Axis>& families, SplitCounts counts, Seed seed);

struct EmittedFile {
  std::filesystem::path path;
  std::size_t lines = 0;
};

// Writes one JSONL file per planned split file into `destination`.
std::vector<EmittedFile> emit_split(SplitKind kind, const std::vector<Axis>& families, SplitCounts counts,
                                    Seed seed, const std::filesystem::path& destination,
                                    const SampleOptions& options = {});

}  // namespace delta::bounce

#endif  // DELTA_BOUNCE_FAMILIES_HPP
