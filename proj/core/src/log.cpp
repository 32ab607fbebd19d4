#include "tagclust/log.hpp"

#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string>

namespace tagclust::log {

namespace {

Level initial_level() {
  const char* env = std::getenv("TAGCLUST_LOG_LEVEL");
  if (env == nullptr) return Level::Warning;
  const std::string v(env);
  if (v == "debug") return Level::Debug;
  if (v == "info") return Level::Info;
  if (v == "error") return Level::Error;
  if (v == "off") return Level::Off;
  return Level::Warning;
}

struct State {
  std::mutex mu;
  Level level = initial_level();
  Sink sink;
};

State& state() {
  static State s;
  return s;
}

const char* tag(Level l) {
  switch (l) {
    case Level::Debug: return "debug";
    case Level::Info: return "info";
    case Level::Warning: return "warning";
    case Level::Error: return "error";
    case Level::Off: break;
  }
  return "";
}

}  // namespace

void set_level(Level level) {
  std::lock_guard lock(state().mu);
  state().level = level;
}

Level level() {
  std::lock_guard lock(state().mu);
  return state().level;
}

void set_sink(Sink sink) {
  std::lock_guard lock(state().mu);
  state().sink = std::move(sink);
}

void write(Level lvl, std::string_view message) {
  auto& s = state();
  std::lock_guard lock(s.mu);
  if (lvl < s.level || lvl == Level::Off) return;
  if (s.sink) {
    s.sink(lvl, message);
    return;
  }
  std::cerr << "[tagclust " << tag(lvl) << "] " << message << '\n';
}

}  // namespace tagclust::log
