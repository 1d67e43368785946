#include "ddgeo/log.hpp"

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string>

namespace ddgeo {

namespace {

LogLevel parse_env() {
    const char* env = std::getenv("DDGEO_LOG");
    if (env == nullptr) return LogLevel::Quiet;
    const std::string s(env);
    if (s == "debug" || s == "2") return LogLevel::Debug;
    if (s == "info" || s == "1") return LogLevel::Info;
    return LogLevel::Quiet;
}

std::atomic<int>& level_storage() {
    static std::atomic<int> level{static_cast<int>(parse_env())};
    return level;
}

std::mutex& sink_mutex() {
    static std::mutex m;
    return m;
}

void emit(const char* tag, std::string_view message) {
    const std::lock_guard<std::mutex> lock(sink_mutex());
    std::cerr << "[ddgeo " << tag << "] " << message << '\n';
}

}  // namespace

LogLevel log_level() { return static_cast<LogLevel>(level_storage().load()); }

void set_log_level(LogLevel level) { level_storage().store(static_cast<int>(level)); }

void log_info(std::string_view message) {
    if (log_level() >= LogLevel::Info) emit("info", message);
}

void log_debug(std::string_view message) {
    if (log_level() >= LogLevel::Debug) emit("debug", message);
}

}  // namespace ddgeo
