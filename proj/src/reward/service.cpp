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

#include "delta/reward/service.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <httplib.h>

#include "delta/mfa/eval.hpp"

namespace delta::reward {
namespace {

Response error(int status, const std::string& message) { return {status, {{"error", message}}}; }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

const char* env(const char* name) {
  const char* v = std::getenv(name);
  return v && *v ? v : nullptr;
}

}  // namespace

ServiceConfig load_config(const std::optional<std::filesystem::path>& file) {
  ServiceConfig c;
  if (file) {
    std::ifstream is(*file);
    if (!is) throw std::runtime_error("cannot read config " + file->string());
    const auto j = nlohmann::json::parse(is);
    c.host = j.value("host", c.host);
    c.port = j.value("port", c.port);
    c.store = j.value("store", c.store.string());
    c.exec.guest_command = j.value("guest_command", c.exec.guest_command);
    c.exec.wall_timeout = j.value("timeout", c.exec.wall_timeout);
    c.exec.memory_cap = j.value("memory_cap", c.exec.memory_cap);
    c.workers = j.value("workers", c.workers);
    c.warmup_steps = j.value("warmup_steps", c.warmup_steps);
    for (const auto& d : j.value("datasets", std::vector<std::string>{})) c.datasets.emplace_back(d);
  }
  if (const char* v = env("DELTA_FORGE_HOST")) c.host = v;
  if (const char* v = env("DELTA_FORGE_PORT")) c.port = std::stoi(v);
  if (const char* v = env("DELTA_FORGE_STORE")) c.store = v;
  if (const char* v = env("DELTA_FORGE_GUEST")) c.exec.guest_command = split(v, ' ');
  if (const char* v = env("DELTA_FORGE_TIMEOUT")) c.exec.wall_timeout = std::stod(v);
  if (const char* v = env("DELTA_FORGE_WORKERS")) c.workers = std::stoi(v);
  if (const char* v = env("DELTA_FORGE_WARMUP")) c.warmup_steps = std::stoul(v);
  if (const char* v = env("DELTA_FORGE_DATASETS"))
    for (const auto& d : split(v, ':')) c.datasets.emplace_back(d);
  if (c.workers < 1) throw std::invalid_argument("workers must be >= 1");
  if (!(c.exec.wall_timeout > 0.0)) throw std::invalid_argument("timeout must be positive");
  return c;
}

nlohmann::json mfa_record_json(const MfaRecord& r) {
  return {{"id", r.instance.id},
          {"messages", nlohmann::json::array({{{"role", "user"}, {"content", mfa::render_prompt(r.instance)}}})},
          {"family", std::string(mfa::to_string(r.instance.family))},
          {"tier", std::string(mfa::to_string(mfa::tier_of(r.instance.family)))},
          {"instance", r.instance},
          {"tests", r.tests}};
}

MfaRecord mfa_record_from_json(const nlohmann::json& j) {
  MfaRecord r;
  r.instance = j.at("instance").get<mfa::ProblemInstance>();
  if (j.contains("id")) r.instance.id = j.at("id").get<std::string>();
  r.tests = j.at("tests").get<std::vector<mfa::TestCase>>();
  return r;
}

void Registry::add(MfaRecord record) {
  auto id = record.instance.id;
  mfa_[id] = std::move(record);
}

void Registry::add(bounce::DatasetEntry entry) {
  auto id = entry.id;
  bounce_[id] = std::move(entry);
}

std::size_t Registry::load_jsonl(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read dataset " + path.string());
  std::string line;
  std::size_t n = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    if (j.contains("instance"))
      add(mfa_record_from_json(j));
    else
      add(j.get<bounce::DatasetEntry>());
    ++n;
  }
  return n;
}

const MfaRecord* Registry::mfa(const std::string& id) const {
  const auto it = mfa_.find(id);
  return it == mfa_.end() ? nullptr : &it->second;
}

const bounce::DatasetEntry* Registry::bounce(const std::string& id) const {
  const auto it = bounce_.find(id);
  return it == bounce_.end() ? nullptr : &it->second;
}

Api::Api(ServiceConfig config, Registry registry, ReplayStore& store)
    : config_(std::move(config)),
      registry_(std::move(registry)),
      store_(store),
      slots_(std::make_unique<std::counting_semaphore<>>(config_.workers)) {}

Response Api::score_manufactoria(const nlohmann::json& req) const {
  try {
    const std::string response = req.at("response").get<std::string>();
    MfaRecord inline_record;
    const MfaRecord* rec = nullptr;
    if (req.contains("instance_id")) {
      rec = registry_.mfa(req.at("instance_id").get<std::string>());
      if (!rec) return error(404, "unknown instance_id");
    } else if (req.contains("instance")) {
      inline_record.instance = req.at("instance").get<mfa::ProblemInstance>();
      if (req.contains("tests"))
        inline_record.tests = req.at("tests").get<std::vector<mfa::TestCase>>();
      else
        inline_record.tests = mfa::generate_tests(inline_record.instance, 20, inline_record.instance.seed);
      rec = &inline_record;
    } else {
      return error(400, "need instance_id or instance");
    }
    if (rec->tests.empty()) return error(400, "test suite is empty");
    mfa::RunLimits limits;
    if (req.contains("limits")) {
      limits.max_steps = req.at("limits").value("max_steps", limits.max_steps);
      limits.max_tape_len = req.at("limits").value("max_tape_len", limits.max_tape_len);
      if (limits.max_steps == 0 || limits.max_tape_len == 0) return error(400, "limits must be positive");
    }
    return {200, mfa::score_submission(response, rec->instance, rec->tests, limits)};
  } catch (const std::exception& e) {
    return error(400, e.what());
  }
}

Response Api::score_bouncingsim(const nlohmann::json& req) const {
  try {
    std::string source;
    if (req.contains("source"))
      source = req.at("source").get<std::string>();
    else if (req.contains("response"))
      source = bounce::extract_python(req.at("response").get<std::string>());
    else
      return error(400, "need source or response");
    bounce::DatasetEntry inline_entry;
    const bounce::DatasetEntry* entry = nullptr;
    if (req.contains("entry_id")) {
      entry = registry_.bounce(req.at("entry_id").get<std::string>());
      if (!entry) return error(404, "unknown entry_id");
    } else if (req.contains("entry")) {
      inline_entry = req.at("entry").get<bounce::DatasetEntry>();
      entry = &inline_entry;
    } else {
      return error(400, "need entry_id or entry");
    }
    if (entry->tests.empty()) return error(400, "entry has no tests");
    slots_->acquire();
    Score s;
    try {
      s = bounce::score_candidate(bounce::execute_candidate(source, *entry, config_.exec), *entry);
    } catch (...) {
      slots_->release();
      throw;
    }
    slots_->release();
    return {200, s};
  } catch (const std::invalid_argument& e) {
    return error(400, e.what());
  } catch (const nlohmann::json::exception& e) {
    return error(400, e.what());
  } catch (const std::exception& e) {
    return error(500, e.what());
  }
}

Response Api::reward(const nlohmann::json& req) const {
  try {
    const auto step = req.at("step").get<long long>();
    if (step < 0) return error(400, "step must be >= 0");
    RewardSchedule schedule{config_.warmup_steps};
    if (req.contains("schedule")) schedule.warmup_steps = req.at("schedule").value("warmup_steps", schedule.warmup_steps);
    const Score score = req.at("score").get<Score>();
    return {200, {{"reward", staged_reward(static_cast<std::size_t>(step), schedule, score)}}};
  } catch (const std::exception& e) {
    return error(400, e.what());
  }
}

Response Api::replay_post(const std::string& prompt_id, const nlohmann::json& req) const {
  try {
    const auto n = store_.record_success(prompt_id, req.at("trace").get<std::string>(), req.at("score").get<Score>());
    return {200, {{"prompt_id", prompt_id}, {"stored", n}}};
  } catch (const NotFullPass& e) {
    return error(422, e.what());
  } catch (const std::exception& e) {
    return error(400, e.what());
  }
}

Response Api::replay_get(const std::string& prompt_id, std::size_t k) const {
  if (k == 0) return error(400, "k must be >= 1");
  return {200, {{"prompt_id", prompt_id}, {"traces", store_.fetch_recent(prompt_id, k)}}};
}

Response Api::feedback(const nlohmann::json& req) const {
  try {
    const Score score = req.at("score").get<Score>();
    const std::size_t cap = req.value("cap", kFeedbackCap);
    return {200, {{"text", format_failure_feedback(score, cap)}}};
  } catch (const std::exception& e) {
    return error(400, e.what());
  }
}

Server::Server(Api& api) : api_(api), http_(std::make_unique<httplib::Server>()) {
  auto& s = *http_;
  const auto json_route = [](auto handler) {
    return [handler](const httplib::Request& req, httplib::Response& res) {
      Response out;
      nlohmann::json body;
      try {
        body = nlohmann::json::parse(req.body);
        out = handler(req, body);
      } catch (const nlohmann::json::parse_error& e) {
        out = error(400, std::string("invalid JSON: ") + e.what());
      }
      res.status = out.status;
      res.set_content(out.body.dump(), "application/json");
    };
  };
  s.Post("/score/manufactoria",
         json_route([this](const httplib::Request&, const nlohmann::json& b) { return api_.score_manufactoria(b); }));
  s.Post("/score/bouncingsim",
         json_route([this](const httplib::Request&, const nlohmann::json& b) { return api_.score_bouncingsim(b); }));
  s.Post("/reward", json_route([this](const httplib::Request&, const nlohmann::json& b) { return api_.reward(b); }));
  s.Post("/feedback", json_route([this](const httplib::Request&, const nlohmann::json& b) { return api_.feedback(b); }));
  s.Post(R"(/replay/([^/]+))", json_route([this](const httplib::Request& r, const nlohmann::json& b) {
           return api_.replay_post(r.matches[1].str(), b);
         }));
  s.Get(R"(/replay/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    Response out;
    try {
      const long long k = req.has_param("k") ? std::stoll(req.get_param_value("k")) : 3;
      out = k < 1 ? error(400, "k must be >= 1") : api_.replay_get(req.matches[1].str(), static_cast<std::size_t>(k));
    } catch (const std::exception& e) {
      out = error(400, e.what());
    }
    res.status = out.status;
    res.set_content(out.body.dump(), "application/json");
  });
}

Server::~Server() = default;

int Server::bind() {
  const auto& c = api_.config();
  if (c.port == 0) return http_->bind_to_any_port(c.host);
  return http_->bind_to_port(c.host, c.port) ? c.port : -1;
}

bool Server::listen_after_bind() { return http_->listen_after_bind(); }

void Server::stop() { http_->stop(); }

}  // namespace delta::reward
