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

#include "bdfl/crypto/random.h"

#include <sodium.h>

#include <cmath>
#include <cstring>
#include <numbers>
#include <vector>

#include "bdfl/error.h"

namespace bdfl::crypto {
namespace {

void EnsureSodium() {
  static const bool ready = [] { return sodium_init() >= 0; }();
  if (!ready) throw CryptoError("libsodium initialisation failed");
}

}  // namespace

SecureRng::SecureRng(std::uint64_t seed, std::string_view domain) {
  EnsureSodium();
  std::vector<std::uint8_t> material(8 + domain.size());
  for (int i = 0; i < 8; ++i) material[i] = static_cast<std::uint8_t>(seed >> (8 * i));
  std::memcpy(material.data() + 8, domain.data(), domain.size());
  crypto_hash_sha256(key_.data(), material.data(), material.size());
}

SecureRng SecureRng::FromEntropy() {
  EnsureSodium();
  SecureRng rng;
  randombytes_buf(rng.key_.data(), rng.key_.size());
  return rng;
}

void SecureRng::Refill() {
  std::array<std::uint8_t, crypto_stream_chacha20_NONCEBYTES> nonce{};
  for (std::size_t i = 0; i < nonce.size(); ++i) {
    nonce[i] = static_cast<std::uint8_t>(nonce_ >> (8 * i));
  }
  ++nonce_;
  crypto_stream_chacha20(buffer_.data(), buffer_.size(), nonce.data(),
                         key_.data());
  offset_ = 0;
}

void SecureRng::Fill(std::span<std::uint8_t> out) {
  std::size_t done = 0;
  while (done < out.size()) {
    if (offset_ == kBlockBytes) Refill();
    const std::size_t take = std::min(out.size() - done, kBlockBytes - offset_);
    std::memcpy(out.data() + done, buffer_.data() + offset_, take);
    offset_ += take;
    done += take;
  }
}

SecureRng::result_type SecureRng::operator()() {
  std::array<std::uint8_t, 8> bytes;
  Fill(bytes);
  result_type v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<result_type>(bytes[i]) << (8 * i);
  return v;
}

mpz_class SecureRng::UniformBits(unsigned bits) {
  if (bits == 0) return 0;
  std::vector<std::uint8_t> bytes((bits + 7) / 8);
  Fill(bytes);
  const unsigned excess = static_cast<unsigned>(bytes.size() * 8) - bits;
  bytes[0] &= static_cast<std::uint8_t>(0xFFu >> excess);
  mpz_class out;
  mpz_import(out.get_mpz_t(), bytes.size(), 1, 1, 1, 0, bytes.data());
  return out;
}

mpz_class SecureRng::UniformBelow(const mpz_class& bound) {
  if (bound <= 0) throw CryptoError("UniformBelow: bound must be positive");
  const auto bits = static_cast<unsigned>(mpz_sizeinbase(bound.get_mpz_t(), 2));
  for (;;) {
    mpz_class candidate = UniformBits(bits);
    if (candidate < bound) return candidate;
  }
}

std::uint64_t SecureRng::UniformIndex(std::uint64_t bound) {
  if (bound == 0) throw CryptoError("UniformIndex: bound must be positive");
  const std::uint64_t limit = max() - max() % bound;
  for (;;) {
    const std::uint64_t v = (*this)();
    if (v < limit) return v % bound;
  }
}

double SecureRng::UniformDouble() {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

double SecureRng::Gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_gaussian_;
  }
  double u1 = 0.0;
  while (u1 == 0.0) u1 = UniformDouble();
  const double u2 = UniformDouble();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_gaussian_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

}  // namespace bdfl::crypto
