// SPDX-License-Identifier: Apache-2.0
//
// a2glab - synthesis, high-resolution estimation, clustering and statistics
// for uniform-circular-array air-to-ground channel snapshots
// Copyright (C) 2026 The a2glab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "a2g/log.hpp"

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <mutex>

namespace a2g
{

namespace
{

LogLevel parse_env_level()
{
    const char *env = std::getenv("A2GLAB_LOG");
    if (!env)
        return LogLevel::warn;
    const std::string v(env);
    if (v == "debug")
        return LogLevel::debug;
    if (v == "info")
        return LogLevel::info;
    if (v == "warn")
        return LogLevel::warn;
    if (v == "error")
        return LogLevel::error;
    return LogLevel::warn;
}

std::atomic<LogLevel> &level_storage()
{
    static std::atomic<LogLevel> level{parse_env_level()};
    return level;
}

const char *level_name(LogLevel level)
{
    switch (level)
    {
    case LogLevel::debug:
        return "debug";
    case LogLevel::info:
        return "info";
    case LogLevel::warn:
        return "warn";
    default:
        return "error";
    }
}

} // namespace

LogLevel log_level() { return level_storage().load(); }

void set_log_level(LogLevel level) { level_storage().store(level); }

void log_message(LogLevel level, const std::string &message)
{
    if (level < log_level())
        return;
    static std::mutex io_mutex;
    std::lock_guard<std::mutex> lock(io_mutex);
    std::cerr << "[a2glab:" << level_name(level) << "] " << message << '\n';
}

} // namespace a2g
