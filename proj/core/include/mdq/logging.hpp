#pragma once

#include <sstream>
#include <string>

namespace mdq::log {

enum class Level { debug = 0, info = 1, warn = 2, error = 3, off = 4 };

// Verbosity is read once from the MDQ_LOG environment variable
// ("debug", "info", "warn", "error", "off"); unset or unrecognized
// values default to "warn". set_level overrides it for the process.
Level level();
void set_level(Level level);

// Writes a single line to stderr when `level` is at or above the
// current verbosity. Log output never goes to stdout so that CLI
// results stay machine-readable.
void write(Level level, const std::string& message);

namespace detail {

template <typename... Args>
std::string format(Args&&... args) {
    std::ostringstream out;
    (out << ... << args);
    return out.str();
}

} // namespace detail

template <typename... Args>
void debug(Args&&... args) {
    if (level() <= Level::debug) {
        write(Level::debug, detail::format(std::forward<Args>(args)...));
    }
}

template <typename... Args>
void info(Args&&... args) {
    if (level() <= Level::info) {
        write(Level::info, detail::format(std::forward<Args>(args)...));
    }
}

template <typename... Args>
void warn(Args&&... args) {
    if (level() <= Level::warn) {
        write(Level::warn, detail::format(std::forward<Args>(args)...));
    }
}

template <typename... Args>
void error(Args&&... args) {
    if (level() <= Level::error) {
        write(Level::error, detail::format(std::forward<Args>(args)...));
    }
}

} // namespace mdq::log
