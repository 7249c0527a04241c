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

#ifndef SBT_COMMON_BYTES_H_
#define SBT_COMMON_BYTES_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace sbt {

using Bytes = std::vector<uint8_t>;

// Big-endian binary writer used by every wire format in the project.
class ByteWriter {
 public:
  void PutU8(uint8_t v) { out_.push_back(v); }
  void PutU16(uint16_t v);
  void PutU32(uint32_t v);
  void PutU64(uint64_t v);
  // IEEE-754 bit pattern, big-endian.
  void PutF64(double v);
  // u32 length prefix followed by the raw bytes.
  void PutBytes(std::span<const uint8_t> data);
  void PutString(std::string_view s);
  // u32 length prefix followed by the big-endian magnitude (non-negative only).
  void PutBigUint(const mpz_class& v);
  void PutRaw(std::span<const uint8_t> data);

  const Bytes& data() const { return out_; }
  Bytes Release() { return std::move(out_); }

 private:
  Bytes out_;
};

// Reader counterpart of ByteWriter. Reading past the end throws
// ProtocolError.
class ByteReader {
 public:
  explicit ByteReader(std::span<const uint8_t> data) : data_(data) {}

  uint8_t GetU8();
  uint16_t GetU16();
  uint32_t GetU32();
  uint64_t GetU64();
  double GetF64();
  Bytes GetBytes();
  std::string GetString();
  mpz_class GetBigUint();
  std::span<const uint8_t> GetRaw(size_t n);

  size_t remaining() const { return data_.size() - pos_; }
  bool done() const { return pos_ == data_.size(); }
  // Throws ProtocolError unless every byte was consumed.
  void ExpectDone() const;

 private:
  void Need(size_t n) const;

  std::span<const uint8_t> data_;
  size_t pos_ = 0;
};

// Big-endian magnitude of a non-negative integer; zero encodes as no bytes.
Bytes BigUintToBytes(const mpz_class& v);
mpz_class BigUintFromBytes(std::span<const uint8_t> data);

}  // namespace sbt

#endif  // SBT_COMMON_BYTES_H_
