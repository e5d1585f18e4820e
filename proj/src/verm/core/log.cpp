#include "verm/core/log.hpp"

#include <iostream>
#include <mutex>

namespace verm {

namespace {
std::mutex g_mu;
LogSink g_sink;
}  // namespace

void set_log_sink(LogSink sink) {
  std::lock_guard lock(g_mu);
  g_sink = std::move(sink);
}

void log_warning(std::string_view message) {
  std::lock_guard lock(g_mu);
  if (g_sink) {
    g_sink(message);
    return;
  }
  std::cerr << "verm: " << message << '\n';
}

}  // namespace verm
