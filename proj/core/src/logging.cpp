#include "mdq/logging.hpp"

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <mutex>

namespace mdq::log {

namespace {

Level parse_level(const char* text) {
    if (text == nullptr) {
        return Level::warn;
    }
    const std::string value(text);
    if (value == "debug") return Level::debug;
    if (value == "info") return Level::info;
    if (value == "warn") return Level::warn;
    if (value == "error") return Level::error;
    if (value == "off") return Level::off;
    return Level::warn;
}

std::atomic<Level>& level_store() {
    static std::atomic<Level> store{parse_level(std::getenv("MDQ_LOG"))};
    return store;
}

const char* level_name(Level level) {
    switch (level) {
        case Level::debug: return "debug";
        case Level::info: return "info";
        case Level::warn: return "warn";
        case Level::error: return "error";
        case Level::off: return "off";
    }
    return "?";
}

} // namespace

Level level() {
    return level_store().load();
}

void set_level(Level level) {
    level_store().store(level);
}

void write(Level level, const std::string& message) {
    static std::mutex mutex;
    std::lock_guard lock(mutex);
    std::cerr << "[" << level_name(level) << "] " << message << "\n";
}

} // namespace mdq::log
