// Copyright 2026 The subvote Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace subvote {

// Bad caller input: out-of-range arguments, malformed layouts, bad configs.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Base for failures detected while a protocol round is executing.
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A message arrived out of the schedule order, or a step ran too early.
class ProtocolOrderError : public ProtocolError {
 public:
  using ProtocolError::ProtocolError;
};

// Missing or duplicate per-user uploads for a gate or for the final shares.
class IncompleteGateError : public ProtocolError {
 public:
  using ProtocolError::ProtocolError;
};

// Reconstructed output is not a valid vote; shares were tampered or a bug.
class ProtocolCorruptionError : public ProtocolError {
 public:
  using ProtocolError::ProtocolError;
};

class InsufficientSamples : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace subvote
