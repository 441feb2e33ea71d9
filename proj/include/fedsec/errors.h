// Copyright 2026 The FedSec Authors
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

#ifndef FEDSEC_ERRORS_H_
#define FEDSEC_ERRORS_H_

#include <stdexcept>
#include <string>

namespace fedsec {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller handed in data that violates an operation's precondition
// (dimension mismatch, empty batch, out-of-range plaintext, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// The experiment configuration is unusable (unknown key, bad value,
// wraparound guard violated, missing link profile).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Key generation or fixed-point encoding failed.
class CryptoError : public Error {
 public:
  using Error::Error;
};

// Malformed external input (CSV rows, serialized ciphertexts).
class ParseError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace fedsec

#endif  // FEDSEC_ERRORS_H_
