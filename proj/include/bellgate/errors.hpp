// Copyright 2026 The Bellgate Authors
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

#ifndef BELLGATE_ERRORS_HPP
#define BELLGATE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bellgate {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An input violates a documented invariant (hermiticity, trace, norms, dilations).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A tensor-factor slot outside the operator's factor list.
class IndexError : public Error {
 public:
  using Error::Error;
};

/// A scalar parameter outside its domain (for example a dimension d < 2).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A theorem hypothesis that the caller must establish does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace bellgate

#endif  // BELLGATE_ERRORS_HPP
