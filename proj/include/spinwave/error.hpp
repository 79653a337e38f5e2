// Copyright 2026 The spinwave Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SPINWAVE_ERROR_HPP
#define SPINWAVE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace spinwave {

/// Input rejected by a precondition (bad dims, sectors, config keys...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A sector dimension or intermediate value exceeds a configured cap or the
/// range of the index type.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical breakdown or a failed identity check. Never swallowed.
class VerificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace spinwave

#endif  // SPINWAVE_ERROR_HPP
