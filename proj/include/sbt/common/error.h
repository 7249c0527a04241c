/*
 * Copyright 2026 The sbtplus Authors.
 *
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

#ifndef SBT_COMMON_ERROR_H_
#define SBT_COMMON_ERROR_H_

#include <stdexcept>
#include <string>

namespace sbt {

// Error categories. The numeric values of kConfig, kProtocol and kCrypto are
// the process exit codes used by the command line tool.
enum class ErrorCode {
  kInternal = 1,
  kConfig = 2,
  kProtocol = 3,
  kCrypto = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Invalid configuration or hyper-parameters.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what)
      : Error(ErrorCode::kConfig, what) {}
};

// Malformed or unusable input data (empty intersection, bad CSV, ...).
class DataError : public Error {
 public:
  explicit DataError(const std::string& what)
      : Error(ErrorCode::kConfig, what) {}
};

// Malformed or out-of-order protocol messages.
class ProtocolError : public Error {
 public:
  explicit ProtocolError(const std::string& what)
      : Error(ErrorCode::kProtocol, what) {}
};

// A peer is unreachable or a channel was closed.
class TransportError : public ProtocolError {
 public:
  explicit TransportError(const std::string& what) : ProtocolError(what) {}
};

class CryptoError : public Error {
 public:
  explicit CryptoError(const std::string& what)
      : Error(ErrorCode::kCrypto, what) {}
};

// Ciphertexts from different key pairs were combined.
class KeyError : public CryptoError {
 public:
  explicit KeyError(const std::string& what) : CryptoError(what) {}
};

// A plaintext does not fit the encryption scheme's plaintext space.
class OverflowError : public CryptoError {
 public:
  explicit OverflowError(const std::string& what) : CryptoError(what) {}
};

// A decrypted or decoded value violates its packing layout.
class CorruptionError : public CryptoError {
 public:
  explicit CorruptionError(const std::string& what) : CryptoError(what) {}
};

}  // namespace sbt

#endif  // SBT_COMMON_ERROR_H_
