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

#include "sbt/common/bytes.h"

#include <bit>
#include <cstring>

#include "sbt/common/error.h"

namespace sbt {

void ByteWriter::PutU16(uint16_t v) {
  out_.push_back(static_cast<uint8_t>(v >> 8));
  out_.push_back(static_cast<uint8_t>(v));
}

void ByteWriter::PutU32(uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) {
    out_.push_back(static_cast<uint8_t>(v >> shift));
  }
}

void ByteWriter::PutU64(uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) {
    out_.push_back(static_cast<uint8_t>(v >> shift));
  }
}

void ByteWriter::PutF64(double v) { PutU64(std::bit_cast<uint64_t>(v)); }

void ByteWriter::PutBytes(std::span<const uint8_t> data) {
  PutU32(static_cast<uint32_t>(data.size()));
  PutRaw(data);
}

void ByteWriter::PutString(std::string_view s) {
  PutBytes({reinterpret_cast<const uint8_t*>(s.data()), s.size()});
}

void ByteWriter::PutBigUint(const mpz_class& v) { PutBytes(BigUintToBytes(v)); }

void ByteWriter::PutRaw(std::span<const uint8_t> data) {
  out_.insert(out_.end(), data.begin(), data.end());
}

void ByteReader::Need(size_t n) const {
  if (remaining() < n) {
    throw ProtocolError("truncated message: need " + std::to_string(n) +
                        " bytes, have " + std::to_string(remaining()));
  }
}

uint8_t ByteReader::GetU8() {
  Need(1);
  return data_[pos_++];
}

uint16_t ByteReader::GetU16() {
  Need(2);
  uint16_t v = static_cast<uint16_t>(data_[pos_] << 8 | data_[pos_ + 1]);
  pos_ += 2;
  return v;
}

uint32_t ByteReader::GetU32() {
  Need(4);
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v = v << 8 | data_[pos_ + i];
  pos_ += 4;
  return v;
}

uint64_t ByteReader::GetU64() {
  Need(8);
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = v << 8 | data_[pos_ + i];
  pos_ += 8;
  return v;
}

double ByteReader::GetF64() { return std::bit_cast<double>(GetU64()); }

Bytes ByteReader::GetBytes() {
  uint32_t n = GetU32();
  auto raw = GetRaw(n);
  return Bytes(raw.begin(), raw.end());
}

std::string ByteReader::GetString() {
  uint32_t n = GetU32();
  auto raw = GetRaw(n);
  return std::string(raw.begin(), raw.end());
}

mpz_class ByteReader::GetBigUint() {
  uint32_t n = GetU32();
  return BigUintFromBytes(GetRaw(n));
}

std::span<const uint8_t> ByteReader::GetRaw(size_t n) {
  Need(n);
  auto out = data_.subspan(pos_, n);
  pos_ += n;
  return out;
}

void ByteReader::ExpectDone() const {
  if (!done()) {
    throw ProtocolError("trailing bytes in message: " +
                        std::to_string(remaining()));
  }
}

Bytes BigUintToBytes(const mpz_class& v) {
  if (sgn(v) < 0) throw CorruptionError("cannot serialize negative integer");
  if (v == 0) return {};
  size_t count = (mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8;
  Bytes out(count);
  size_t written = 0;
  mpz_export(out.data(), &written, 1, 1, 1, 0, v.get_mpz_t());
  out.resize(written);
  return out;
}

mpz_class BigUintFromBytes(std::span<const uint8_t> data) {
  mpz_class v;
  if (!data.empty()) {
    mpz_import(v.get_mpz_t(), data.size(), 1, 1, 1, 0, data.data());
  }
  return v;
}

}  // namespace sbt
