#pragma once

#include <atomic>
#include <iostream>
#include <string_view>

namespace wr::log {

enum class Level { Debug = 0, Info = 1, Warn = 2, Quiet = 3 };

inline std::atomic<Level>& threshold() {
  static std::atomic<Level> level{Level::Warn};
  return level;
}

inline void set_level(Level level) { threshold().store(level); }

inline void write(Level level, std::string_view tag, std::string_view msg) {
  if (level < threshold().load()) return;
  std::clog << "[" << tag << "] " << msg << '\n';
}

inline void debug(std::string_view msg) { write(Level::Debug, "debug", msg); }
inline void info(std::string_view msg) { write(Level::Info, "info", msg); }
inline void warn(std::string_view msg) { write(Level::Warn, "warn", msg); }

}  // namespace wr::log
