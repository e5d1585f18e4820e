#pragma once

#include <condition_variable>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "verm/core/doc.hpp"
#include "verm/render/render.hpp"

namespace verm {

struct SidecarConfig {
  std::vector<std::string> command;  // argv of the worker process
  int pool_size = 1;
  int timeout_ms = 30000;  // forwarded to the worker in each request
  int grace_ms = 2000;     // extra harness-side wait before declaring a timeout
  int max_retries = 1;     // worker restarts per request before a transport error
};

/// Pool of external renderer processes speaking line-delimited JSON on
/// stdio, one in-flight request per worker. Workers start lazily and are
/// restarted after they die or time out.
///
/// Ignores SIGPIPE process-wide on construction; a dead worker surfaces as
/// EPIPE on write instead.
class SidecarPool {
 public:
  explicit SidecarPool(SidecarConfig cfg);
  ~SidecarPool();

  SidecarPool(const SidecarPool&) = delete;
  SidecarPool& operator=(const SidecarPool&) = delete;

  /// ok=false or a timeout become RenderResult failures; an unreachable
  /// worker (after retries) throws TransportError.
  RenderResult render(const StructuredDoc& doc);

  int restarts() const;

 private:
  struct Worker;

  std::size_t acquire();
  void release(std::size_t index);

  SidecarConfig cfg_;
  std::vector<std::unique_ptr<Worker>> workers_;
  std::vector<bool> busy_;
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::uint64_t next_id_ = 0;
  int restarts_ = 0;
};

RenderResult render_via_plugin(const StructuredDoc& doc, SidecarPool& plugin);

}  // namespace verm
