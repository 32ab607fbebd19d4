#pragma once

#include <functional>
#include <string_view>

namespace tagclust::log {

enum class Level { Debug = 0, Info = 1, Warning = 2, Error = 3, Off = 4 };

// Messages below the threshold are discarded. Defaults to Warning, or the
// value of TAGCLUST_LOG_LEVEL (debug|info|warning|error|off) when set.
void set_level(Level level);
Level level();

// Replaces the stderr sink; pass an empty function to restore it.
using Sink = std::function<void(Level, std::string_view)>;
void set_sink(Sink sink);

void write(Level level, std::string_view message);

inline void debug(std::string_view m) { write(Level::Debug, m); }
inline void info(std::string_view m) { write(Level::Info, m); }
inline void warn(std::string_view m) { write(Level::Warning, m); }
inline void error(std::string_view m) { write(Level::Error, m); }

}  // namespace tagclust::log
