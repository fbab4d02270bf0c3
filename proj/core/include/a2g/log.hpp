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

#ifndef A2G_LOG_HPP
#define A2G_LOG_HPP

#include <string>

namespace a2g
{

// Log level, settable through the A2GLAB_LOG environment variable
// (debug | info | warn | error). Messages go to stderr.
enum class LogLevel
{
    debug = 0,
    info = 1,
    warn = 2,
    error = 3
};

LogLevel log_level();
void set_log_level(LogLevel level);

void log_message(LogLevel level, const std::string &message);

inline void log_debug(const std::string &m) { log_message(LogLevel::debug, m); }
inline void log_info(const std::string &m) { log_message(LogLevel::info, m); }
inline void log_warn(const std::string &m) { log_message(LogLevel::warn, m); }
inline void log_error(const std::string &m) { log_message(LogLevel::error, m); }

} // namespace a2g

#endif
