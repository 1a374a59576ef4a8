/* Copyright 2026 The SSF Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef SSF_COMMON_ERROR_HPP_
#define SSF_COMMON_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace ssf {

// Base for every error the library raises. The CLI maps data errors to exit
// code 1 and usage errors to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input data violates a documented invariant (mask values, labels, ids...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Tensor or layer shapes disagree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// File could not be read, written or parsed.
class IoError : public Error {
 public:
  using Error::Error;
};

// API used out of order (e.g. backward before forward).
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace ssf

#endif  // SSF_COMMON_ERROR_HPP_
