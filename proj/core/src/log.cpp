#include "bergman/log.hpp"

#include <iostream>
#include <mutex>
#include <string>

namespace bergman {
namespace {

std::mutex& sink_mutex() {
  static std::mutex m;
  return m;
}

LogSink& sink() {
  static LogSink s;
  return s;
}

void emit(std::string_view level, std::string_view message) {
  std::lock_guard lock(sink_mutex());
  std::string line = std::string(level) + ": " + std::string(message);
  if (sink()) {
    sink()(line);
  } else {
    std::clog << "bergman " << line << '\n';
  }
}

}  // namespace

void set_log_sink(LogSink s) {
  std::lock_guard lock(sink_mutex());
  sink() = std::move(s);
}

void log_warning(std::string_view message) { emit("warning", message); }
void log_info(std::string_view message) { emit("info", message); }

}  // namespace bergman
