#pragma once

#include <functional>
#include <string_view>

namespace bergman {

using LogSink = std::function<void(std::string_view)>;

/// Replaces the sink used for warnings and info messages (default: std::clog).
/// Passing an empty function restores the default.
void set_log_sink(LogSink sink);

void log_warning(std::string_view message);
void log_info(std::string_view message);

}  // namespace bergman
