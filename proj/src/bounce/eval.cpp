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

#include "delta/bounce/eval.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cctype>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>

namespace delta::bounce {
namespace {

#include "harness.inc"

std::string fmt2(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", round2(x));
  return std::strcmp(buf, "-0.00") == 0 ? std::string("0.00") : std::string(buf);
}

std::string render(const std::vector<Vec2>& ps) {
  std::string s = "[";
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (i) s += ", ";
    s += "[" + fmt2(ps[i].x) + ", " + fmt2(ps[i].y) + "]";
  }
  return s + "]";
}

// Temporary directory removed on scope exit.
class TempDir {
 public:
  TempDir() {
    std::string tmpl = (std::filesystem::temp_directory_path() / "delta-forge-XXXXXX").string();
    if (!::mkdtemp(tmpl.data())) throw std::runtime_error(std::string("mkdtemp: ") + std::strerror(errno));
    path_ = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

void write_file(const std::filesystem::path& p, std::string_view content) {
  std::ofstream os(p, std::ios::binary);
  os.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!os) throw std::runtime_error("cannot write " + p.string());
}

std::string substitute(std::string arg, std::string_view key, const std::string& value) {
  for (auto at = arg.find(key); at != std::string::npos; at = arg.find(key, at + value.size()))
    arg.replace(at, key.size(), value);
  return arg;
}

struct ChildOutput {
  std::string out;
  std::string err;
  int status = 0;
  bool timed_out = false;
  bool overflow = false;
};

ChildOutput run_child(const std::vector<std::string>& argv, const std::filesystem::path& workdir,
                      const std::string& input, const ExecPolicy& policy) {
  int in_pipe[2], out_pipe[2], err_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) || ::pipe2(out_pipe, O_CLOEXEC) || ::pipe2(err_pipe, O_CLOEXEC))
    throw std::runtime_error(std::string("pipe: ") + std::strerror(errno));

  std::vector<char*> cargv;
  for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
  cargv.push_back(nullptr);
  const std::string dir = workdir.string();
  const auto cpu = static_cast<rlim_t>(std::ceil(policy.wall_timeout)) + 1;

  const pid_t pid = ::fork();
  if (pid < 0) throw std::runtime_error(std::string("fork: ") + std::strerror(errno));
  if (pid == 0) {
    ::setpgid(0, 0);
    ::dup2(in_pipe[0], 0);
    ::dup2(out_pipe[1], 1);
    ::dup2(err_pipe[1], 2);
    if (::chdir(dir.c_str()) != 0) ::_exit(126);
    const rlimit as{policy.memory_cap, policy.memory_cap};
    const rlimit cpu_lim{cpu, cpu};
    const rlimit no_files{0, 0};
    ::setrlimit(RLIMIT_AS, &as);
    ::setrlimit(RLIMIT_CPU, &cpu_lim);
    ::setrlimit(RLIMIT_FSIZE, &no_files);
    ::execvp(cargv[0], cargv.data());
    ::_exit(127);
  }
  ::setpgid(pid, pid);
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  ::close(err_pipe[1]);

  ChildOutput res;
  const auto deadline = std::chrono::steady_clock::now() + std::chrono::duration<double>(policy.wall_timeout);
  std::size_t written = 0;
  int in_fd = in_pipe[1];
  ::fcntl(in_fd, F_SETFL, O_NONBLOCK);
  bool out_open = true, err_open = true;
  char buf[8192];
  while (out_open || err_open) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) {
      res.timed_out = true;
      break;
    }
    pollfd fds[3];
    nfds_t n = 0;
    if (out_open) fds[n++] = {out_pipe[0], POLLIN, 0};
    if (err_open) fds[n++] = {err_pipe[0], POLLIN, 0};
    if (in_fd >= 0) fds[n++] = {in_fd, POLLOUT, 0};
    const int rc = ::poll(fds, n, static_cast<int>(std::min<long long>(left.count(), 100)));
    if (rc < 0 && errno != EINTR) break;
    for (nfds_t i = 0; i < n; ++i) {
      if (!fds[i].revents) continue;
      if (fds[i].fd == in_fd) {
        const ssize_t w = ::write(in_fd, input.data() + written, input.size() - written);
        if (w > 0) written += static_cast<std::size_t>(w);
        if (w < 0 && errno != EAGAIN) written = input.size();
        if (written >= input.size()) {
          ::close(in_fd);
          in_fd = -1;
        }
        continue;
      }
      const ssize_t r = ::read(fds[i].fd, buf, sizeof buf);
      if (r <= 0) {
        (fds[i].fd == out_pipe[0] ? out_open : err_open) = false;
        continue;
      }
      auto& sink = fds[i].fd == out_pipe[0] ? res.out : res.err;
      if (sink.size() < policy.output_cap) sink.append(buf, static_cast<std::size_t>(r));
      if (fds[i].fd == out_pipe[0] && res.out.size() >= policy.output_cap) {
        res.overflow = true;
        out_open = err_open = false;
      }
    }
  }
  if (in_fd >= 0) ::close(in_fd);
  if (res.timed_out || res.overflow) ::kill(-pid, SIGKILL);
  ::close(out_pipe[0]);
  ::close(err_pipe[0]);
  // Stdout closed; give the process the remaining time to exit.
  while (true) {
    const pid_t w = ::waitpid(pid, &res.status, WNOHANG);
    if (w == pid) break;
    if (w < 0 && errno != EINTR) break;
    if (std::chrono::steady_clock::now() > deadline) {
      res.timed_out = true;
      ::kill(-pid, SIGKILL);
      ::waitpid(pid, &res.status, 0);
      break;
    }
    ::usleep(1000);
  }
  ::kill(-pid, SIGKILL);  // stray grandchildren
  return res;
}

}  // namespace

std::string_view to_string(ExecFailure failure) {
  switch (failure) {
    case ExecFailure::Timeout: return "timeout";
    case ExecFailure::Crash: return "crash";
    case ExecFailure::FormatError: return "format_error";
    case ExecFailure::ForbiddenBehavior: return "forbidden";
  }
  return "?";
}

std::string_view harness_source() { return kHarness; }

std::string format_positions(const std::vector<Vec2>& positions) {
  std::string s;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (i) s += ' ';
    s += fmt2(positions[i].x) + "," + fmt2(positions[i].y);
  }
  return s;
}

namespace {

// -?digits.dd
bool parse_fixed2(std::string_view s, double& out) {
  std::size_t i = 0;
  if (i < s.size() && s[i] == '-') ++i;
  const std::size_t digits = i;
  while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i;
  if (i == digits || i + 3 != s.size() || s[i] != '.' || !std::isdigit(static_cast<unsigned char>(s[i + 1])) ||
      !std::isdigit(static_cast<unsigned char>(s[i + 2])))
    return false;
  out = std::strtod(std::string(s).c_str(), nullptr);
  return true;
}

}  // namespace

std::optional<std::vector<std::vector<Vec2>>> parse_positions(std::string_view text, std::size_t n_times,
                                                              std::size_t n_balls) {
  std::vector<std::vector<Vec2>> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::vector<Vec2> row;
    std::size_t p = 0;
    while (p <= line.size()) {
      auto sp = line.find(' ', p);
      if (sp == std::string_view::npos) sp = line.size();
      const auto cell = line.substr(p, sp - p);
      const auto comma = cell.find(',');
      Vec2 v;
      if (comma == std::string_view::npos || !parse_fixed2(cell.substr(0, comma), v.x) ||
          !parse_fixed2(cell.substr(comma + 1), v.y))
        return std::nullopt;
      row.push_back(v);
      p = sp + 1;
    }
    if (row.size() != n_balls) return std::nullopt;
    out.push_back(std::move(row));
  }
  if (out.size() != n_times) return std::nullopt;
  return out;
}

CandidateResult execute_candidate(std::string_view source, const DatasetEntry& entry, const ExecPolicy& policy) {
  if (entry.timestamps.empty()) throw std::invalid_argument("entry has no timestamps");
  if (!(policy.wall_timeout > 0.0)) throw std::invalid_argument("wall_timeout must be positive");
  if (policy.guest_command.empty()) throw std::invalid_argument("guest_command is empty");

  TempDir dir;
  const auto harness = dir.path() / "harness.py";
  const auto candidate = dir.path() / "candidate.py";
  write_file(harness, harness_source());
  write_file(candidate, source);

  std::vector<std::string> argv;
  for (const auto& a : policy.guest_command)
    argv.push_back(substitute(substitute(substitute(a, "{harness}", harness.string()), "{candidate}",
                                         candidate.string()),
                              "{workdir}", dir.path().string()));
  std::string input;
  char buf[64];
  for (double t : entry.timestamps) {
    std::snprintf(buf, sizeof buf, "%.17g\n", t);
    input += buf;
  }

  const ChildOutput child = run_child(argv, dir.path(), input, policy);
  CandidateResult r;
  const auto fail = [&](ExecFailure f, std::string detail) {
    r.failure = f;
    r.detail = std::move(detail);
    return r;
  };
  const std::string err_tail = child.err.substr(child.err.size() > 400 ? child.err.size() - 400 : 0);
  if (child.timed_out) return fail(ExecFailure::Timeout, "exceeded " + std::to_string(policy.wall_timeout) + " s");
  if (child.overflow) return fail(ExecFailure::FormatError, "output exceeds cap");
  if (WIFSIGNALED(child.status)) {
    const int sig = WTERMSIG(child.status);
    if (sig == SIGXCPU) return fail(ExecFailure::Timeout, "cpu limit");
    if (sig == SIGXFSZ) return fail(ExecFailure::ForbiddenBehavior, "file write");
    return fail(ExecFailure::Crash, "killed by signal " + std::to_string(sig));
  }
  const int code = WIFEXITED(child.status) ? WEXITSTATUS(child.status) : -1;
  if (code == kExitForbidden) return fail(ExecFailure::ForbiddenBehavior, err_tail);
  if (code == kExitBadReturn) return fail(ExecFailure::FormatError, err_tail);
  if (code != 0) return fail(ExecFailure::Crash, "exit " + std::to_string(code) + ": " + err_tail);
  auto parsed = parse_positions(child.out, entry.timestamps.size(), entry.scene.balls.size());
  if (!parsed) return fail(ExecFailure::FormatError, "output does not match the position grammar");
  r.positions = std::move(*parsed);
  return r;
}

Score score_candidate(const CandidateResult& result, const DatasetEntry& entry) {
  const std::size_t n = entry.tests.size();
  if (!result.ok())
    return Score::zero(n, {"", "", "", std::string(to_string(*result.failure)) + ": " + result.detail});
  std::size_t passed = 0;
  std::vector<Failure> failures;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& test = entry.tests[i];
    // Predictions are matched to tests by timestamp order.
    const auto* got = i < result.positions.size() ? &result.positions[i] : nullptr;
    bool ok = got && got->size() == test.expected.size();
    double worst = 0.0;
    if (ok)
      for (std::size_t b = 0; b < test.expected.size(); ++b) {
        const double d = norm((*got)[b] - test.expected[b]);
        worst = std::max(worst, d);
        if (!(d <= entry.tolerance)) ok = false;
      }
    if (ok) {
      ++passed;
      continue;
    }
    char t[32];
    std::snprintf(t, sizeof t, "t=%g", test.t);
    failures.push_back({t, render(test.expected), got ? render(*got) : "missing",
                        got && got->size() == test.expected.size() ? "off_by " + fmt2(worst) : "shape"});
  }
  return Score::from_counts(n, passed, std::move(failures));
}

std::string extract_python(std::string_view response) {
  std::string last_python, last_any;
  bool have_python = false, have_any = false;
  std::size_t pos = 0;
  while (true) {
    const auto open = response.find("```", pos);
    if (open == std::string_view::npos) break;
    const auto eol = response.find('\n', open);
    if (eol == std::string_view::npos) break;
    std::string tag(response.substr(open + 3, eol - open - 3));
    while (!tag.empty() && std::isspace(static_cast<unsigned char>(tag.back()))) tag.pop_back();
    const auto close = response.find("```", eol + 1);
    if (close == std::string_view::npos) break;
    std::string body(response.substr(eol + 1, close - eol - 1));
    if (tag == "python" || tag == "py") {
      last_python = body;
      have_python = true;
    }
    last_any = std::move(body);
    have_any = true;
    pos = close + 3;
  }
  if (have_python) return last_python;
  if (have_any) return last_any;
  return std::string(response);
}

Score score_submission(std::string_view response, const DatasetEntry& entry, const ExecPolicy& policy) {
  return score_candidate(execute_candidate(extract_python(response), entry, policy), entry);
}

}  // namespace delta::bounce
