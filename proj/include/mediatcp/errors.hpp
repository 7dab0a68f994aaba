/**
 * Copyright 2026 The MediaTCP Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef MEDIATCP_ERRORS_HPP_
#define MEDIATCP_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace mediatcp {

// Invalid class graph, experiment config, or schedule.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string &what) : std::runtime_error(what) {}
};

// Argument outside the mathematical domain of a model function.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string &what) : std::domain_error(what) {}
};

// Solver entry point called on an input it is not meant for.
class PreconditionError : public std::logic_error {
 public:
  explicit PreconditionError(const std::string &what) : std::logic_error(what) {}
};

}  // namespace mediatcp

#endif  // MEDIATCP_ERRORS_HPP_
