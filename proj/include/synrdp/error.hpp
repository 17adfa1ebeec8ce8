// Copyright (c) the synrdp project authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SYNRDP_ERROR_HPP_
#define SYNRDP_ERROR_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace synrdp {

// Invalid domain object: distribution that does not sum to one, partition
// that does not cover the alphabet, non-stochastic conditional row, ...
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Absolute-continuity violation: positive mass placed where the reference
// distribution has none. Messages identify the offending index.
class SupportError : public std::runtime_error {
 public:
  explicit SupportError(const std::string& what) : std::runtime_error(what) {}
};

// Configuration file problem; `field_path` points at the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field_path, const std::string& what)
      : std::runtime_error(field_path + ": " + what), field_path_(std::move(field_path)) {}
  const std::string& field_path() const { return field_path_; }

 private:
  std::string field_path_;
};

// Bitstream cannot be decoded; `bit_offset` is the position of the first
// inconsistent bit (8 * byte position for byte-granular failures).
class DecodeError : public std::runtime_error {
 public:
  DecodeError(std::uint64_t bit_offset, const std::string& what)
      : std::runtime_error(what + " (bit offset " + std::to_string(bit_offset) + ")"),
        bit_offset_(bit_offset) {}
  std::uint64_t bit_offset() const { return bit_offset_; }

 private:
  std::uint64_t bit_offset_;
};

// An iterative solver ran out of iterations. The thrower attaches the last
// iterate so callers can inspect how far it got.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double last_rate, double last_distortion)
      : std::runtime_error(what), last_rate_(last_rate), last_distortion_(last_distortion) {}
  double last_rate() const { return last_rate_; }
  double last_distortion() const { return last_distortion_; }

 private:
  double last_rate_;
  double last_distortion_;
};

// A requested (D, P) pair cannot be met by any channel; `binding` names the
// constraint that makes it impossible.
class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(std::string binding, const std::string& what)
      : std::runtime_error(what), binding_(std::move(binding)) {}
  const std::string& binding_constraint() const { return binding_; }

 private:
  std::string binding_;
};

}  // namespace synrdp

#endif  // SYNRDP_ERROR_HPP_
