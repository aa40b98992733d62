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

#ifndef BDFL_CRYPTO_PAILLIER_H_
#define BDFL_CRYPTO_PAILLIER_H_

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "bdfl/crypto/fixed_point.h"
#include "bdfl/crypto/random.h"

namespace bdfl::crypto {

// Paillier public key with g = n + 1.
//
// Encryption randomness uses the Damgard-Jurik-Nielsen form r^n := h_s^a,
// where h_s = (-x^2)^n mod n^2 for an x derived from n by hashing and a is
// uniform over ceil(key_bits / 2) bits. h_s is public and fixed per key, so
// the obfuscator is a fixed-base exponentiation served from a precomputed
// window table. The table is built on first use and shared between copies.
class PublicKey {
 public:
  PublicKey(mpz_class n, int key_bits);

  const mpz_class& n() const;
  const mpz_class& n_squared() const;
  const mpz_class& g() const;
  int key_bits() const;
  // Largest admissible |signed mantissa|: floor((n - 1) / 2).
  const mpz_class& max_magnitude() const;

  mpz_class Obfuscator(SecureRng& rng) const;

  friend bool operator==(const PublicKey& a, const PublicKey& b);

 private:
  struct State;
  std::shared_ptr<State> state_;
};

class PrivateKey {
 public:
  // CRT form; p and q are the factors of the public modulus.
  static PrivateKey FromPrimes(const PublicKey& pk, const mpz_class& p,
                               const mpz_class& q);
  // Textbook form m = L(c^lambda mod n^2) * mu mod n.
  static PrivateKey FromLambdaMu(const PublicKey& pk, const mpz_class& lambda,
                                 const mpz_class& mu);

  const mpz_class& lambda() const { return lambda_; }
  const mpz_class& mu() const { return mu_; }
  const std::optional<mpz_class>& p() const { return p_; }
  const std::optional<mpz_class>& q() const { return q_; }

  // Decrypts a raw ciphertext value already validated to lie in Z*_{n^2}.
  mpz_class DecryptRaw(const mpz_class& c) const;

 private:
  PrivateKey() = default;

  mpz_class n_;
  mpz_class n_squared_;
  mpz_class lambda_;
  mpz_class mu_;
  std::optional<mpz_class> p_;
  std::optional<mpz_class> q_;
  // CRT precomputation, valid when p_ and q_ are set.
  mpz_class p_squared_, q_squared_, hp_, hq_, q_inv_mod_p_;
};

struct KeyPair {
  PublicKey public_key;
  PrivateKey private_key;
};

// Supported modulus sizes: 512 (tests only), 1024, 2048, 3072.
bool IsSupportedKeyBits(int key_bits);

// n = p * q with p, q distinct primes of key_bits / 2 bits each. Throws
// CryptoError for unsupported key_bits.
KeyPair GenerateKeyPair(int key_bits, SecureRng& rng);
// Deterministic for a fixed (key_bits, seed).
KeyPair GenerateKeyPair(int key_bits, std::uint64_t seed);

// Encryption of a fixed-point plaintext. `bound` is a public upper bound on
// |signed plaintext mantissa|, propagated through the homomorphic operations
// so that overflow past n / 2 is rejected instead of silently wrapping.
class Ciphertext {
 public:
  Ciphertext(PublicKey key, mpz_class value, int exponent, mpz_class bound);

  const PublicKey& key() const { return key_; }
  const mpz_class& value() const { return value_; }
  int exponent() const { return exponent_; }
  const mpz_class& bound() const { return bound_; }

 private:
  PublicKey key_;
  mpz_class value_;
  int exponent_;
  mpz_class bound_;
};

Ciphertext Encrypt(const PublicKey& pk, const EncodedNumber& e,
                   SecureRng& rng);
std::vector<Ciphertext> EncryptAll(const PublicKey& pk,
                                   std::span<const EncodedNumber> values,
                                   SecureRng& rng);

// Throws CryptoError when the ciphertext belongs to another key, lies outside
// [0, n^2), or shares a factor with n.
EncodedNumber Decrypt(const KeyPair& kp, const Ciphertext& c);

// Lowers the exponent to `exponent` by multiplying the plaintext by
// 2^(c.exponent - exponent).
Ciphertext Rescale(const Ciphertext& c, int exponent);

// D(result) = D(a) + D(b). The operand with the larger exponent is rescaled
// first.
Ciphertext Add(const Ciphertext& a, const Ciphertext& b);

// D(result) = D(c) * k, exponent c.exponent + k.exponent.
Ciphertext ScalarMul(const Ciphertext& c, const EncodedNumber& k);

// Sum_i D(c_i) * k_i as one multi-exponentiation. Ciphertexts are aligned to
// their smallest exponent, scalars likewise.
Ciphertext Dot(std::span<const Ciphertext> cs,
               std::span<const EncodedNumber> ks);

}  // namespace bdfl::crypto

#endif  // BDFL_CRYPTO_PAILLIER_H_
