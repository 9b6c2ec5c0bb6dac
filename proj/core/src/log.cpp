#include "leray/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <mutex>

namespace leray {

namespace {

LogLevel g_level = LogLevel::kError;
std::once_flag g_init_flag;
std::mutex g_write_mutex;

void init_from_env() {
  const char* raw = std::getenv("LERAY_STRIP_LOG");
  if (!raw) return;
  std::string value(raw);
  if (value == "debug")
    g_level = LogLevel::kDebug;
  else if (value == "info")
    g_level = LogLevel::kInfo;
  else if (value == "error")
    g_level = LogLevel::kError;
}

const char* level_name(LogLevel level) {
  switch (level) {
    case LogLevel::kError: return "error";
    case LogLevel::kInfo: return "info";
    case LogLevel::kDebug: return "debug";
  }
  return "?";
}

}  // namespace

LogLevel log_level() {
  std::call_once(g_init_flag, init_from_env);
  return g_level;
}

void set_log_level(LogLevel level) {
  std::call_once(g_init_flag, init_from_env);
  g_level = level;
}

void log_line(LogLevel level, const std::string& message) {
  if (level > log_level()) return;
  std::lock_guard<std::mutex> lock(g_write_mutex);
  std::fprintf(stderr, "[%s] %s\n", level_name(level), message.c_str());
}

}  // namespace leray
