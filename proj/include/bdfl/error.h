/*
 * Copyright 2026 The BDFL Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef BDFL_ERROR_H_
#define BDFL_ERROR_H_

#include <stdexcept>
#include <string>

namespace bdfl {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Key generation, encryption, decryption and key/modulus mismatches.
class CryptoError : public Error {
 public:
  using Error::Error;
};

// A fixed-point value or homomorphic result would leave the signed range of
// the plaintext ring.
class OverflowError : public CryptoError {
 public:
  using CryptoError::CryptoError;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class DataError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class ProtocolError : public Error {
 public:
  using Error::Error;
};

}  // namespace bdfl

#endif  // BDFL_ERROR_H_
