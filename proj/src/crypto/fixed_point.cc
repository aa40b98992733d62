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

#include "bdfl/crypto/fixed_point.h"

#include <cmath>
#include <sstream>

#include "bdfl/error.h"

namespace bdfl::crypto {

mpz_class EncodedNumber::SignedMantissa() const {
  mpz_class half = modulus / 2;
  if (mantissa > half) return mantissa - modulus;
  return mantissa;
}

EncodedNumber Encode(double x, int scale_bits, const mpz_class& modulus) {
  if (!std::isfinite(x)) throw OverflowError("cannot encode a non-finite value");
  if (scale_bits <= 0) throw OverflowError("scale_bits must be positive");
  // ldexp and nearbyint are exact on doubles, so the mantissa is the exact
  // round-half-even of x * 2^scale_bits.
  const double scaled = std::nearbyint(std::ldexp(x, scale_bits));
  if (!std::isfinite(scaled)) {
    throw OverflowError("encoded magnitude exceeds double range");
  }
  mpz_class m(scaled);
  mpz_class magnitude = abs(m);
  if (3 * magnitude >= modulus) {
    std::ostringstream msg;
    msg << "encode: |" << x << "| * 2^" << scale_bits
        << " leaves no headroom below n/3";
    throw OverflowError(msg.str());
  }
  if (m < 0) m += modulus;
  return EncodedNumber{std::move(m), -scale_bits, modulus};
}

EncodedNumber EncodeMantissa(const mpz_class& signed_mantissa, int exponent,
                             const mpz_class& modulus) {
  if (2 * abs(signed_mantissa) >= modulus) {
    throw OverflowError("mantissa magnitude reaches n/2");
  }
  mpz_class m = signed_mantissa;
  if (m < 0) m += modulus;
  return EncodedNumber{std::move(m), exponent, modulus};
}

double Decode(const EncodedNumber& e) {
  const mpz_class m = e.SignedMantissa();
  if (m == 0) return 0.0;
  long exp2 = 0;
  const double frac = mpz_get_d_2exp(&exp2, m.get_mpz_t());
  return std::ldexp(frac, static_cast<int>(exp2) + e.exponent);
}

}  // namespace bdfl::crypto
