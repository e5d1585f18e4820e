#pragma once

#include <functional>
#include <string_view>

namespace verm {

using LogSink = std::function<void(std::string_view)>;

/// Replaces the process-wide warning sink (stderr by default). Pass an
/// empty function to restore the default.
void set_log_sink(LogSink sink);
void log_warning(std::string_view message);

}  // namespace verm
