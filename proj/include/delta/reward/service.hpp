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

#ifndef DELTA_REWARD_SERVICE_HPP
#define DELTA_REWARD_SERVICE_HPP

#include <filesystem>
#include <memory>
#include <optional>
#include <semaphore>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "delta/bounce/eval.hpp"
#include "delta/mfa/dsl.hpp"
#include "delta/mfa/families.hpp"
#include "delta/reward/reward.hpp"

namespace httplib {
class Server;
}

namespace delta::reward {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::filesystem::path store = "delta-forge-replay.jsonl";
  bounce::ExecPolicy exec;
  int workers = 4;  // concurrent guest executions
  std::size_t warmup_steps = 100;
  std::vector<std::filesystem::path> datasets;  // JSONL files preloaded into the registry
};

// Reads an optional JSON config file, then applies DELTA_FORGE_HOST, _PORT,
// _STORE, _GUEST (space separated argv), _TIMEOUT, _WORKERS, _WARMUP and
// _DATASETS (colon separated) from the environment.
ServiceConfig load_config(const std::optional<std::filesystem::path>& file);

struct MfaRecord {
  mfa::ProblemInstance instance;
  std::vector<mfa::TestCase> tests;
};

// Dataset entries addressable by id.
class Registry {
 public:
  void add(MfaRecord record);
  void add(bounce::DatasetEntry entry);
  // Loads `mfa gen` or bounce JSONL lines; returns the number of records.
  std::size_t load_jsonl(const std::filesystem::path& path);

  const MfaRecord* mfa(const std::string& id) const;
  const bounce::DatasetEntry* bounce(const std::string& id) const;

 private:
  std::unordered_map<std::string, MfaRecord> mfa_;
  std::unordered_map<std::string, bounce::DatasetEntry> bounce_;
};

// One dataset line as written by `mfa gen`.
nlohmann::json mfa_record_json(const MfaRecord& record);
MfaRecord mfa_record_from_json(const nlohmann::json& j);

struct Response {
  int status = 200;
  nlohmann::json body;
};

// Transport-free handlers; the HTTP server only routes to these.
class Api {
 public:
  Api(ServiceConfig config, Registry registry, ReplayStore& store);

  Response score_manufactoria(const nlohmann::json& request) const;
  Response score_bouncingsim(const nlohmann::json& request) const;
  Response reward(const nlohmann::json& request) const;
  Response replay_post(const std::string& prompt_id, const nlohmann::json& request) const;
  Response replay_get(const std::string& prompt_id, std::size_t k) const;
  Response feedback(const nlohmann::json& request) const;

  const ServiceConfig& config() const { return config_; }

 private:
  ServiceConfig config_;
  Registry registry_;
  ReplayStore& store_;
  mutable std::unique_ptr<std::counting_semaphore<>> slots_;
};

class Server {
 public:
  explicit Server(Api& api);
  ~Server();

  // Binds config host/port; returns the bound port or -1.
  int bind();
  // Blocks until stop().
  bool listen_after_bind();
  void stop();

 private:
  Api& api_;
  std::unique_ptr<httplib::Server> http_;
};

}  // namespace delta::reward

#endif  // DELTA_REWARD_SERVICE_HPP
