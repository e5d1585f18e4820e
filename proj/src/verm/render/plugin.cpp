#include "verm/render/plugin.hpp"

#include <cerrno>
#include <chrono>
#include <csignal>
#include <cstring>

#include <fcntl.h>
#include <poll.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include "verm/core/errors.hpp"
#include "verm/render/codec.hpp"

extern char** environ;

namespace verm {

namespace {

enum class Exchange { Ok, Timeout, Dead };

}  // namespace

struct SidecarPool::Worker {
  pid_t pid = -1;
  int to_child = -1;
  int from_child = -1;
  std::string buffer;

  bool running() const { return pid > 0; }

  void start(const std::vector<std::string>& command) {
    if (command.empty()) throw ConfigError("sidecar: empty command");
    int in_pipe[2], out_pipe[2];
    if (pipe2(in_pipe, O_CLOEXEC) != 0) throw TransportError("sidecar: pipe failed");
    if (pipe2(out_pipe, O_CLOEXEC) != 0) {
      close(in_pipe[0]), close(in_pipe[1]);
      throw TransportError("sidecar: pipe failed");
    }
    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_adddup2(&actions, in_pipe[0], STDIN_FILENO);
    posix_spawn_file_actions_adddup2(&actions, out_pipe[1], STDOUT_FILENO);
    std::vector<char*> argv;
    for (const auto& a : command) argv.push_back(const_cast<char*>(a.c_str()));
    argv.push_back(nullptr);
    pid_t child = -1;
    const int rc = posix_spawnp(&child, argv[0], &actions, nullptr, argv.data(), environ);
    posix_spawn_file_actions_destroy(&actions);
    close(in_pipe[0]);
    close(out_pipe[1]);
    if (rc != 0) {
      close(in_pipe[1]);
      close(out_pipe[0]);
      throw TransportError("sidecar: cannot start '" + command.front() + "': " + std::strerror(rc));
    }
    pid = child;
    to_child = in_pipe[1];
    from_child = out_pipe[0];
    buffer.clear();
  }

  void stop() {
    if (to_child >= 0) close(to_child);
    if (from_child >= 0) close(from_child);
    to_child = from_child = -1;
    if (pid > 0) {
      kill(pid, SIGKILL);
      waitpid(pid, nullptr, 0);
    }
    pid = -1;
    buffer.clear();
  }

  Exchange exchange(const std::string& line, int wait_ms, std::string& reply) {
    std::size_t written = 0;
    while (written < line.size()) {
      const ssize_t n = write(to_child, line.data() + written, line.size() - written);
      if (n < 0) {
        if (errno == EINTR) continue;
        return Exchange::Dead;
      }
      written += static_cast<std::size_t>(n);
    }
    const auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(wait_ms);
    for (;;) {
      if (auto nl = buffer.find('\n'); nl != std::string::npos) {
        reply = buffer.substr(0, nl);
        buffer.erase(0, nl + 1);
        return Exchange::Ok;
      }
      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
          deadline - std::chrono::steady_clock::now());
      if (left.count() <= 0) return Exchange::Timeout;
      pollfd pfd{from_child, POLLIN, 0};
      const int rc = poll(&pfd, 1, static_cast<int>(left.count()));
      if (rc < 0 && errno == EINTR) continue;
      if (rc == 0) return Exchange::Timeout;
      if (rc < 0) return Exchange::Dead;
      char chunk[65536];
      const ssize_t n = read(from_child, chunk, sizeof chunk);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) return Exchange::Dead;
      buffer.append(chunk, static_cast<std::size_t>(n));
    }
  }
};

SidecarPool::SidecarPool(SidecarConfig cfg) : cfg_(std::move(cfg)) {
  static std::once_flag ignore_sigpipe;
  std::call_once(ignore_sigpipe, [] { std::signal(SIGPIPE, SIG_IGN); });
  if (cfg_.pool_size < 1) throw ConfigError("sidecar: pool_size must be at least 1");
  if (cfg_.command.empty()) throw ConfigError("sidecar: no command configured");
  for (int i = 0; i < cfg_.pool_size; ++i) workers_.push_back(std::make_unique<Worker>());
  busy_.assign(workers_.size(), false);
}

SidecarPool::~SidecarPool() {
  for (auto& w : workers_) w->stop();
}

int SidecarPool::restarts() const {
  std::lock_guard lock(mu_);
  return restarts_;
}

std::size_t SidecarPool::acquire() {
  std::unique_lock lock(mu_);
  for (;;) {
    for (std::size_t i = 0; i < busy_.size(); ++i)
      if (!busy_[i]) {
        busy_[i] = true;
        return i;
      }
    cv_.wait(lock);
  }
}

void SidecarPool::release(std::size_t index) {
  {
    std::lock_guard lock(mu_);
    busy_[index] = false;
  }
  cv_.notify_one();
}

RenderResult SidecarPool::render(const StructuredDoc& doc) {
  if (!doc.raw_code) return RenderResult::failure("plugin: document has no raw_code");
  std::string id;
  {
    std::lock_guard lock(mu_);
    id = "req-" + std::to_string(next_id_++);
  }
  const Json request{{"id", id},
                     {"task", std::string(to_string(doc.task))},
                     {"payload", {{"code", *doc.raw_code}, {"timeout_ms", cfg_.timeout_ms}}}};
  const std::string line = request.dump() + "\n";

  const std::size_t slot = acquire();
  struct Release {
    SidecarPool* pool;
    std::size_t slot;
    ~Release() { pool->release(slot); }
  } guard{this, slot};
  Worker& worker = *workers_[slot];

  std::string last_problem = "no attempt made";
  for (int attempt = 0; attempt <= cfg_.max_retries; ++attempt) {
    if (!worker.running()) {
      try {
        worker.start(cfg_.command);
      } catch (const TransportError& e) {
        last_problem = e.what();
        continue;
      }
    }
    std::string reply;
    switch (worker.exchange(line, cfg_.timeout_ms + cfg_.grace_ms, reply)) {
      case Exchange::Timeout:
        worker.stop();
        {
          std::lock_guard lock(mu_);
          ++restarts_;
        }
        return RenderResult::failure("sidecar timeout after " + std::to_string(cfg_.timeout_ms) + " ms");
      case Exchange::Dead:
        last_problem = "worker exited or closed its pipes";
        worker.stop();
        {
          std::lock_guard lock(mu_);
          ++restarts_;
        }
        continue;
      case Exchange::Ok:
        break;
    }
    Json response = Json::parse(reply, nullptr, false);
    if (response.is_discarded() || !response.is_object() || response.value("id", "") != id) {
      last_problem = "protocol violation: " + reply.substr(0, 200);
      worker.stop();
      continue;
    }
    if (!response.value("ok", false)) {
      const std::string error = response.value("error", "");
      return RenderResult::failure("sidecar: " + (error.empty() ? std::string("unspecified error") : error));
    }
    try {
      RasterImage image = decode_png(base64_decode(response.value("png_base64", "")));
      const int w = response.value("width", -1), h = response.value("height", -1);
      if (w != image.width() || h != image.height())
        return RenderResult::failure("sidecar: declared size " + std::to_string(w) + "x" +
                                     std::to_string(h) + " does not match the PNG");
      return RenderResult::ok(std::move(image));
    } catch (const DataError& e) {
      return RenderResult::failure(std::string("sidecar: ") + e.what());
    }
  }
  throw TransportError("sidecar unreachable after " + std::to_string(cfg_.max_retries + 1) +
                       " attempts: " + last_problem);
}

RenderResult render_via_plugin(const StructuredDoc& doc, SidecarPool& plugin) {
  return plugin.render(doc);
}

}  // namespace verm
