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

#ifndef BDFL_CRYPTO_RANDOM_H_
#define BDFL_CRYPTO_RANDOM_H_

#include <gmpxx.h>

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string_view>

namespace bdfl::crypto {

// ChaCha20 keystream generator. Seeded instances are fully deterministic, so
// a run that draws all of its randomness from seeded generators replays
// bit-for-bit. Satisfies UniformRandomBitGenerator.
class SecureRng {
 public:
  using result_type = std::uint64_t;

  // The key is SHA-256(seed || domain); distinct domains give independent
  // streams from one seed.
  explicit SecureRng(std::uint64_t seed, std::string_view domain = {});

  // Seeded from the operating system entropy pool.
  static SecureRng FromEntropy();

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()();

  void Fill(std::span<std::uint8_t> out);

  // Uniform integer in [0, 2^bits).
  mpz_class UniformBits(unsigned bits);
  // Uniform integer in [0, bound); bound must be positive.
  mpz_class UniformBelow(const mpz_class& bound);
  // Uniform index in [0, bound); bound must be positive.
  std::uint64_t UniformIndex(std::uint64_t bound);
  // Uniform double in [0, 1) with 53 random bits.
  double UniformDouble();
  // Standard normal deviate (Box-Muller, both outputs used).
  double Gaussian();

 private:
  SecureRng() = default;
  void Refill();

  static constexpr std::size_t kBlockBytes = 1024;
  std::array<std::uint8_t, 32> key_{};
  std::uint64_t nonce_ = 0;
  std::array<std::uint8_t, kBlockBytes> buffer_{};
  std::size_t offset_ = kBlockBytes;
  double spare_gaussian_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace bdfl::crypto

#endif  // BDFL_CRYPTO_RANDOM_H_
