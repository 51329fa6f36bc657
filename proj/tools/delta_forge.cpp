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

// delta-forge: dataset generation, scoring and the reward service.

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "delta/bounce/eval.hpp"
#include "delta/bounce/families.hpp"
#include "delta/bounce/periodic.hpp"
#include "delta/bounce/sim.hpp"
#include "delta/mfa/eval.hpp"
#include "delta/mfa/families.hpp"
#include "delta/reward/reward.hpp"
#include "delta/reward/service.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

// A JSON document, or the first line of a JSONL file.
json read_json(const std::string& path) {
  const std::string text = slurp(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error&) {
    return json::parse(text.substr(0, text.find('\n')));
  }
}

// Accepts a JSON value inline or a path to a file holding one.
json json_arg(const std::string& arg) {
  if (!arg.empty() && (arg.front() == '{' || arg.front() == '[')) return json::parse(arg);
  return read_json(arg);
}

int parse_tier(const std::string& text) {
  for (int t = 0; t < delta::bounce::kTierCount; ++t)
    if (text == delta::bounce::difficulty_name(t) || text == std::to_string(t)) return t;
  throw CLI::ValidationError("--tier", "unknown tier " + text);
}

void write_lines(const fs::path& path, const std::vector<json>& lines) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  for (const auto& j : lines) os << j.dump() << '\n';
}

void print(const json& j) { std::cout << j.dump(2) << '\n'; }

// Response status to exit code: 0 for 2xx, 1 otherwise.
int emit(const delta::reward::Response& r) {
  print(r.body);
  return r.status / 100 == 2 ? 0 : 1;
}

delta::reward::Server* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

struct MfaGen {
  std::string family = "HAS";
  std::size_t count = 742;
  std::size_t test = 100;
  std::size_t cases = 20;
  std::uint64_t seed = 0;
  std::string out = ".";
};

// Train and test instances are drawn from independent seed streams; a test
// draw is rejected when its criteria already occur in train.
int run_mfa_gen(const MfaGen& o) {
  using namespace delta::mfa;
  const auto family = family_from_string(o.family);
  if (!family) throw CLI::ValidationError("--family", "unknown family " + o.family);
  const delta::Seed root{o.seed};
  constexpr std::uint64_t kTrain = 1, kTest = 2, kCases = 3;
  constexpr std::size_t kAttempts = 1000;

  std::vector<ProblemInstance> train(o.count);
  for (std::size_t i = 0; i < o.count; ++i) train[i] = sample_instance(*family, delta::derive(root, kTrain, i));
  std::set<std::string> seen;
  for (const auto& p : train) seen.insert(p.criteria);

  std::vector<ProblemInstance> test;
  for (std::size_t j = 0; j < o.test; ++j) {
    bool placed = false;
    for (std::size_t a = 0; a < kAttempts && !placed; ++a) {
      auto p = sample_instance(*family, delta::derive(root, kTest, j, a));
      if (seen.count(p.criteria)) continue;
      test.push_back(std::move(p));
      placed = true;
    }
    if (!placed) throw std::runtime_error("no held-out criteria left for " + o.family);
  }

  const auto records = [&](const std::vector<ProblemInstance>& ps, std::uint64_t tag) {
    std::vector<json> lines(ps.size());
    std::vector<std::string> errors(ps.size());
#pragma omp parallel for schedule(dynamic, 8)
    for (std::size_t i = 0; i < ps.size(); ++i) {
      try {
        delta::reward::MfaRecord r{ps[i], generate_tests(ps[i], o.cases, delta::derive(root, kCases, tag, i))};
        lines[i] = delta::reward::mfa_record_json(r);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
    for (const auto& e : errors)
      if (!e.empty()) throw std::runtime_error(e);
    return lines;
  };
  const fs::path dir = o.out;
  write_lines(dir / (o.family + "_train.jsonl"), records(train, kTrain));
  write_lines(dir / (o.family + "_test.jsonl"), records(test, kTest));
  std::cout << (dir / (o.family + "_train.jsonl")).string() << ' ' << train.size() << '\n'
            << (dir / (o.family + "_test.jsonl")).string() << ' ' << test.size() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"delta-forge: Manufactoria and bouncing-ball dataset, scoring and reward tools"};
  app.require_subcommand(1);
  int rc = 0;

  // mfa
  auto* mfa = app.add_subcommand("mfa", "Manufactoria puzzles");
  mfa->require_subcommand(1);
  MfaGen gen;
  auto* mfa_gen = mfa->add_subcommand("gen", "Emit <family>_train.jsonl and <family>_test.jsonl");
  mfa_gen->add_option("--family", gen.family, "Family id (HAS, APPEND, ...)")->capture_default_str();
  mfa_gen->add_option("--count", gen.count, "Train instances")->capture_default_str();
  mfa_gen->add_option("--test", gen.test, "Held-out test instances")->capture_default_str();
  mfa_gen->add_option("--cases", gen.cases, "Test cases per instance")->check(CLI::Range(4, 1000))->capture_default_str();
  mfa_gen->add_option("--seed", gen.seed)->capture_default_str();
  mfa_gen->add_option("--out", gen.out, "Output directory")->capture_default_str();
  mfa_gen->callback([&] { rc = run_mfa_gen(gen); });

  std::string mfa_record_path, mfa_response_path;
  auto* mfa_score = mfa->add_subcommand("score", "Score a response against a dataset record");
  mfa_score->add_option("--record", mfa_record_path, "JSON/JSONL record from mfa gen")->required();
  mfa_score->add_option("--response", mfa_response_path, "Response text file, - for stdin")->required();
  mfa_score->callback([&] {
    const auto rec = delta::reward::mfa_record_from_json(read_json(mfa_record_path));
    print(delta::mfa::score_submission(slurp(mfa_response_path), rec.instance, rec.tests));
  });

  std::string prompt_family;
  std::uint64_t prompt_seed = 0;
  auto* mfa_prompt = mfa->add_subcommand("prompt", "Print the prompt of a sampled instance");
  mfa_prompt->add_option("--family", prompt_family)->required();
  mfa_prompt->add_option("--seed", prompt_seed);
  mfa_prompt->callback([&] {
    const auto f = delta::mfa::family_from_string(prompt_family);
    if (!f) throw CLI::ValidationError("--family", "unknown family " + prompt_family);
    std::cout << delta::mfa::render_prompt(delta::mfa::sample_instance(*f, delta::Seed{prompt_seed}));
  });

  // bounce
  auto* bounce = app.add_subcommand("bounce", "Bouncing-ball simulation scenes");
  bounce->require_subcommand(1);
  std::string axes_text = "ROT_BOX", tier_text = "basic", bounce_out;
  std::size_t bounce_count = 100;
  std::uint64_t bounce_seed = 0;
  auto* bounce_gen = bounce->add_subcommand("gen", "Emit a JSONL file of dataset entries");
  bounce_gen->add_option("--axes", axes_text, "Axes joined by + or ,")->capture_default_str();
  bounce_gen->add_option("--tier", tier_text, "basic|easy|medium|hard|extreme or 0-4")->capture_default_str();
  bounce_gen->add_option("--count", bounce_count)->capture_default_str();
  bounce_gen->add_option("--seed", bounce_seed)->capture_default_str();
  bounce_gen->add_option("--out", bounce_out, "Output JSONL path")->required();
  bounce_gen->callback([&] {
    const auto axes = delta::bounce::parse_axes(axes_text);
    const int tier = parse_tier(tier_text);
    std::vector<delta::bounce::EntryRequest> reqs;
    for (std::size_t i = 0; i < bounce_count; ++i)
      reqs.push_back({axes, tier, delta::derive(delta::Seed{bounce_seed}, i), false});
    std::vector<json> lines;
    for (auto& e : delta::bounce::build_entries_parallel(reqs)) lines.emplace_back(e);
    write_lines(bounce_out, lines);
    std::cout << bounce_out << ' ' << lines.size() << '\n';
  });

  std::size_t periodic_count = 100;
  std::uint64_t periodic_seed = 0;
  std::string periodic_out;
  auto* bounce_periodic = bounce->add_subcommand("periodic", "Emit periodic construction entries");
  bounce_periodic->add_option("--count", periodic_count)->capture_default_str();
  bounce_periodic->add_option("--seed", periodic_seed)->capture_default_str();
  bounce_periodic->add_option("--out", periodic_out, "Output JSONL path")->required();
  bounce_periodic->callback([&] {
    std::vector<delta::bounce::EntryRequest> reqs;
    for (std::size_t i = 0; i < periodic_count; ++i)
      reqs.push_back({{delta::bounce::Axis::ROT_BOX}, 0, delta::derive(delta::Seed{periodic_seed}, i), true});
    std::vector<json> lines;
    for (auto& e : delta::bounce::build_entries_parallel(reqs)) lines.emplace_back(e);
    write_lines(periodic_out, lines);
    std::cout << periodic_out << ' ' << lines.size() << '\n';
  });

  int spec_n = 4, spec_k = 1;
  double spec_ro = 200, spec_ri = 100, spec_v = 100;
  auto* bounce_spec = bounce->add_subcommand("periodic-spec", "Print derived periodic quantities");
  bounce_spec->add_option("--n", spec_n)->check(CLI::IsMember({4, 6, 8}))->capture_default_str();
  bounce_spec->add_option("--ro", spec_ro)->capture_default_str();
  bounce_spec->add_option("--ri", spec_ri)->capture_default_str();
  bounce_spec->add_option("--v", spec_v)->capture_default_str();
  bounce_spec->add_option("--k", spec_k)->capture_default_str();
  bounce_spec->callback([&] {
    const auto s = delta::bounce::make_periodic_spec(spec_n, spec_ro, spec_ri, spec_v, spec_k);
    print({{"delta", s.delta}, {"t_fly", s.t_fly}, {"omega", s.omega}, {"T_bounce", s.T_bounce},
           {"T_orient", s.T_orient}});
  });

  std::string oracle_scene;
  auto* bounce_oracle = bounce->add_subcommand(
      "guest-oracle", "Reference guest: reads timestamps from stdin, prints positions in harness format");
  bounce_oracle->add_option("scene", oracle_scene, "Scene JSON (or an entry holding one)")->required();
  bounce_oracle->callback([&] {
    json j = read_json(oracle_scene);
    const auto scene = (j.contains("scene") ? j.at("scene") : j).get<delta::bounce::Scene>();
    std::vector<double> ts;
    for (double t; std::cin >> t;) ts.push_back(t);
    for (const auto& s : delta::bounce::simulate(scene, delta::bounce::kTruthConfig, ts))
      std::cout << delta::bounce::format_positions(s.positions) << '\n';
  });

  std::string entry_path, source_path;
  double exec_timeout = 10.0;
  auto* bounce_score = bounce->add_subcommand("score", "Run and score a candidate against an entry");
  bounce_score->add_option("--entry", entry_path, "Entry JSON/JSONL")->required();
  bounce_score->add_option("--source", source_path, "Python source or response, - for stdin")->required();
  bounce_score->add_option("--timeout", exec_timeout)->capture_default_str();
  bounce_score->callback([&] {
    const auto entry = read_json(entry_path).get<delta::bounce::DatasetEntry>();
    delta::bounce::ExecPolicy policy;
    policy.wall_timeout = exec_timeout;
    print(delta::bounce::score_submission(slurp(source_path), entry, policy));
  });

  // split
  auto* split = app.add_subcommand("split", "Generalization splits");
  split->require_subcommand(1);
  std::string split_kind = "explorative", split_out = ".";
  std::vector<std::string> split_families;
  std::uint64_t split_seed = 0;
  delta::bounce::SplitCounts counts;
  auto* split_emit = split->add_subcommand("emit", "Emit a split as JSONL files");
  split_emit->add_option("--kind", split_kind, "explorative|compositional|transformative")->capture_default_str();
  split_emit->add_option("--family", split_families, "Axis to include (repeatable, default all)");
  split_emit->add_option("--seed", split_seed)->capture_default_str();
  split_emit->add_option("--train", counts.train)->capture_default_str();
  split_emit->add_option("--test", counts.test)->capture_default_str();
  split_emit->add_option("--out", split_out, "Output directory")->capture_default_str();
  split_emit->callback([&] {
    const auto kind = delta::bounce::split_from_string(split_kind);
    if (!kind) throw CLI::ValidationError("--kind", "unknown split " + split_kind);
    std::vector<delta::bounce::Axis> fams;
    for (const auto& f : split_families) {
      const auto a = delta::bounce::axis_from_string(f);
      if (!a) throw CLI::ValidationError("--family", "unknown axis " + f);
      fams.push_back(*a);
    }
    if (fams.empty()) fams.assign(delta::bounce::kAllAxes.begin(), delta::bounce::kAllAxes.end());
    for (const auto& f : delta::bounce::emit_split(*kind, fams, counts, delta::Seed{split_seed}, split_out))
      std::cout << f.path.string() << ' ' << f.lines << '\n';
  });

  // service
  std::string config_path;
  auto* serve = app.add_subcommand("serve", "Run the HTTP reward service");
  serve->add_option("--config", config_path, "JSON config file");
  serve->callback([&] {
    auto config = delta::reward::load_config(config_path.empty() ? std::nullopt
                                                                 : std::optional<fs::path>(config_path));
    delta::reward::Registry registry;
    for (const auto& d : config.datasets) registry.load_jsonl(d);
    delta::reward::ReplayStore store(config.store);
    delta::reward::Api api(config, std::move(registry), store);
    delta::reward::Server server(api);
    const int port = server.bind();
    if (port < 0) throw std::runtime_error("cannot bind " + config.host + ":" + std::to_string(config.port));
    g_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::cout << "listening on " << config.host << ':' << port << std::endl;
    server.listen_after_bind();
    g_server = nullptr;
  });

  // API mirrors
  std::size_t warmup = 100;
  long long step = 0;
  std::string score_arg;
  auto* reward = app.add_subcommand("reward", "Staged reward for a score");
  reward->add_option("--step", step)->required();
  reward->add_option("--warmup", warmup)->capture_default_str();
  reward->add_option("--score", score_arg, "Score JSON or file")->required();
  reward->callback([&] {
    delta::reward::ReplayStore none;
    delta::reward::ServiceConfig c;
    c.warmup_steps = warmup;
    delta::reward::Api api(c, {}, none);
    rc = emit(api.reward({{"step", step}, {"score", json_arg(score_arg)}}));
  });

  std::size_t cap = delta::reward::kFeedbackCap;
  auto* feedback = app.add_subcommand("feedback", "Failure feedback text for a score");
  feedback->add_option("--score", score_arg, "Score JSON or file")->required();
  feedback->add_option("--cap", cap)->capture_default_str();
  feedback->callback([&] {
    std::cout << delta::reward::format_failure_feedback(json_arg(score_arg).get<delta::Score>(), cap);
  });

  auto* replay = app.add_subcommand("replay", "Experience-replay store");
  replay->require_subcommand(1);
  std::string store_path = "delta-forge-replay.jsonl", prompt_id, trace_path;
  std::size_t k = 3;
  auto* replay_post = replay->add_subcommand("post", "Record a full-pass trace");
  replay_post->add_option("--store", store_path)->capture_default_str();
  replay_post->add_option("--prompt-id", prompt_id)->required();
  replay_post->add_option("--trace", trace_path, "Trace text file, - for stdin")->required();
  replay_post->add_option("--score", score_arg, "Score JSON or file")->required();
  replay_post->callback([&] {
    delta::reward::ReplayStore store(store_path);
    delta::reward::Api api({}, {}, store);
    rc = emit(api.replay_post(prompt_id, {{"trace", slurp(trace_path)}, {"score", json_arg(score_arg)}}));
  });
  auto* replay_get = replay->add_subcommand("get", "Most recent traces, newest first");
  replay_get->add_option("--store", store_path)->capture_default_str();
  replay_get->add_option("--prompt-id", prompt_id)->required();
  replay_get->add_option("-k", k)->check(CLI::PositiveNumber)->capture_default_str();
  replay_get->callback([&] {
    delta::reward::ReplayStore store(store_path);
    delta::reward::Api api({}, {}, store);
    rc = emit(api.replay_get(prompt_id, k));
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "delta-forge: " << e.what() << '\n';
    return 1;
  }
  return rc;
}
