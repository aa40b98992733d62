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

#ifndef BDFL_CRYPTO_FIXED_POINT_H_
#define BDFL_CRYPTO_FIXED_POINT_H_

#include <gmpxx.h>

namespace bdfl::crypto {

inline constexpr int kDefaultScaleBits = 40;

// A real number x ~= signed(mantissa) * 2^exponent inside Z_n. Negative
// values live in the upper half of the ring: mantissa = n - |m|.
struct EncodedNumber {
  mpz_class mantissa;  // in [0, n)
  int exponent = 0;
  mpz_class modulus;

  // Mantissa lifted to (-n/2, n/2].
  mpz_class SignedMantissa() const;
};

// mantissa = round(x * 2^scale_bits) mod n, exponent = -scale_bits. Throws
// OverflowError unless |x| * 2^scale_bits < n / 3, leaving headroom for
// homomorphic accumulation.
EncodedNumber Encode(double x, int scale_bits, const mpz_class& modulus);

// Builds an encoding from an exact signed mantissa. Throws OverflowError when
// |mantissa| >= n / 2.
EncodedNumber EncodeMantissa(const mpz_class& signed_mantissa, int exponent,
                             const mpz_class& modulus);

double Decode(const EncodedNumber& e);

}  // namespace bdfl::crypto

#endif  // BDFL_CRYPTO_FIXED_POINT_H_
