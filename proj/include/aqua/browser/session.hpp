// Copyright 2026 The Aqua Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <chrono>

#include "aqua/browser/observation.hpp"
#include "aqua/core/error.hpp"
#include "aqua/core/model.hpp"

namespace aqua::browser {

// The session is gone or the endpoint cannot be reached.
class BrowserError : public Error {
 public:
  using Error::Error;
};

// One browser driven by one flow. Element-level failures are reported
// through Observation::last_outcome; BrowserError means the session is
// unusable.
class BrowserSession {
 public:
  virtual ~BrowserSession() = default;

  // Actions carry concrete values; placeholders must be resolved first.
  virtual Observation apply(const Action& action) = 0;
  virtual Observation snapshot() = 0;
  // How long the last apply took: simulated for the sim, measured live.
  virtual std::chrono::milliseconds last_action_duration() const = 0;
  virtual void close() {}
};

}  // namespace aqua::browser
