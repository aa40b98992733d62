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

#include "bdfl/crypto/paillier.h"

#include <algorithm>
#include <mutex>
#include <sstream>
#include <string>

#include "bdfl/error.h"

namespace bdfl::crypto {
namespace {

constexpr int kWindowBits = 8;
constexpr int kPrimalityReps = 40;

mpz_class MulMod(const mpz_class& a, const mpz_class& b, const mpz_class& m) {
  mpz_class r = a * b;
  mpz_tdiv_r(r.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t());
  return r;
}

mpz_class PowMod(const mpz_class& base, const mpz_class& exp,
                 const mpz_class& mod) {
  mpz_class r;
  mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), mod.get_mpz_t());
  return r;
}

mpz_class InvertMod(const mpz_class& a, const mpz_class& m) {
  mpz_class r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0) {
    throw CryptoError("value is not invertible modulo the key modulus");
  }
  return r;
}

std::size_t BitLength(const mpz_class& v) {
  return v == 0 ? 0 : mpz_sizeinbase(v.get_mpz_t(), 2);
}

void CheckBound(const mpz_class& bound, const PublicKey& pk, const char* op) {
  if (bound > pk.max_magnitude()) {
    std::ostringstream msg;
    msg << op << ": result magnitude may reach n/2 (" << BitLength(bound)
        << "-bit bound against a " << pk.key_bits() << "-bit modulus)";
    throw OverflowError(msg.str());
  }
}

void CheckSameKey(const PublicKey& a, const PublicKey& b) {
  if (!(a == b)) throw CryptoError("modulus mismatch between ciphertexts");
}

mpz_class RandomPrime(int bits, SecureRng& rng) {
  for (;;) {
    mpz_class candidate = rng.UniformBits(static_cast<unsigned>(bits));
    // Top two bits set so that p * q has exactly 2 * bits bits.
    mpz_setbit(candidate.get_mpz_t(), bits - 1);
    mpz_setbit(candidate.get_mpz_t(), bits - 2);
    mpz_setbit(candidate.get_mpz_t(), 0);
    if (mpz_probab_prime_p(candidate.get_mpz_t(), kPrimalityReps) > 0) {
      return candidate;
    }
  }
}

// L(x) = (x - 1) / d
mpz_class LFunction(const mpz_class& x, const mpz_class& d) {
  mpz_class r = x - 1;
  mpz_divexact(r.get_mpz_t(), r.get_mpz_t(), d.get_mpz_t());
  return r;
}

}  // namespace

struct PublicKey::State {
  mpz_class n;
  mpz_class n_squared;
  mpz_class g;
  mpz_class max_magnitude;
  int key_bits = 0;
  unsigned obfuscator_bits = 0;

  std::once_flag table_once;
  // table[w][j - 1] = h_s^(j * 2^(kWindowBits * w)) mod n^2
  std::vector<std::vector<mpz_class>> table;

  void BuildTable() {
    SecureRng derive(0, "bdfl/djn-h/" + n.get_str(16));
    mpz_class x;
    do {
      x = derive.UniformBelow(n);
    } while (x < 2 || gcd(x, n) != 1);
    mpz_class h = n - MulMod(x, x, n);
    mpz_class base = PowMod(h, n, n_squared);

    const std::size_t windows =
        (obfuscator_bits + kWindowBits - 1) / kWindowBits;
    constexpr std::size_t kEntries = (std::size_t{1} << kWindowBits) - 1;
    table.resize(windows);
    for (std::size_t w = 0; w < windows; ++w) {
      auto& row = table[w];
      row.reserve(kEntries);
      row.push_back(base);
      for (std::size_t j = 1; j < kEntries; ++j) {
        row.push_back(MulMod(row.back(), base, n_squared));
      }
      base = MulMod(row.back(), base, n_squared);
    }
  }
};

PublicKey::PublicKey(mpz_class n, int key_bits)
    : state_(std::make_shared<State>()) {
  if (n < 3 || mpz_even_p(n.get_mpz_t())) {
    throw CryptoError("public modulus must be an odd integer > 2");
  }
  state_->n = std::move(n);
  state_->n_squared = state_->n * state_->n;
  state_->g = state_->n + 1;
  state_->max_magnitude = (state_->n - 1) / 2;
  state_->key_bits = key_bits;
  state_->obfuscator_bits = static_cast<unsigned>((key_bits + 1) / 2);
}

const mpz_class& PublicKey::n() const { return state_->n; }
const mpz_class& PublicKey::n_squared() const { return state_->n_squared; }
const mpz_class& PublicKey::g() const { return state_->g; }
int PublicKey::key_bits() const { return state_->key_bits; }
const mpz_class& PublicKey::max_magnitude() const {
  return state_->max_magnitude;
}

mpz_class PublicKey::Obfuscator(SecureRng& rng) const {
  State& s = *state_;
  std::call_once(s.table_once, [&s] { s.BuildTable(); });
  const mpz_class exponent = rng.UniformBits(s.obfuscator_bits);
  mpz_class acc = 1;
  for (std::size_t w = 0; w < s.table.size(); ++w) {
    mpz_class digit = exponent >> static_cast<mp_bitcnt_t>(w * kWindowBits);
    const unsigned long j =
        mpz_get_ui(digit.get_mpz_t()) & ((1ul << kWindowBits) - 1);
    if (j != 0) acc = MulMod(acc, s.table[w][j - 1], s.n_squared);
  }
  return acc;
}

bool operator==(const PublicKey& a, const PublicKey& b) {
  return a.state_ == b.state_ || a.state_->n == b.state_->n;
}

PrivateKey PrivateKey::FromPrimes(const PublicKey& pk, const mpz_class& p,
                                  const mpz_class& q) {
  if (p * q != pk.n() || p == q) {
    throw CryptoError("primes do not factor the public modulus");
  }
  PrivateKey key;
  key.n_ = pk.n();
  key.n_squared_ = pk.n_squared();
  key.lambda_ = lcm(mpz_class(p - 1), mpz_class(q - 1));
  key.mu_ = InvertMod(key.lambda_, key.n_);
  key.p_ = p;
  key.q_ = q;
  key.p_squared_ = p * p;
  key.q_squared_ = q * q;
  // h_p = L_p(g^(p-1) mod p^2)^-1 mod p, with g = n + 1.
  key.hp_ = InvertMod(
      LFunction(PowMod(pk.g() % key.p_squared_, p - 1, key.p_squared_), p), p);
  key.hq_ = InvertMod(
      LFunction(PowMod(pk.g() % key.q_squared_, q - 1, key.q_squared_), q), q);
  key.q_inv_mod_p_ = InvertMod(q, p);
  return key;
}

PrivateKey PrivateKey::FromLambdaMu(const PublicKey& pk,
                                    const mpz_class& lambda,
                                    const mpz_class& mu) {
  PrivateKey key;
  key.n_ = pk.n();
  key.n_squared_ = pk.n_squared();
  key.lambda_ = lambda;
  key.mu_ = mu;
  return key;
}

mpz_class PrivateKey::DecryptRaw(const mpz_class& c) const {
  if (p_ && q_) {
    const mpz_class& p = *p_;
    const mpz_class& q = *q_;
    mpz_class mp = MulMod(
        LFunction(PowMod(c % p_squared_, p - 1, p_squared_), p), hp_, p);
    mpz_class mq = MulMod(
        LFunction(PowMod(c % q_squared_, q - 1, q_squared_), q), hq_, q);
    // Garner: m = mq + q * ((mp - mq) * q^-1 mod p)
    mpz_class t = MulMod(mpz_class(mp - mq), q_inv_mod_p_, p);
    if (t < 0) t += p;
    return mq + q * t;
  }
  return MulMod(LFunction(PowMod(c, lambda_, n_squared_), n_), mu_, n_);
}

bool IsSupportedKeyBits(int key_bits) {
  return key_bits == 512 || key_bits == 1024 || key_bits == 2048 ||
         key_bits == 3072;
}

KeyPair GenerateKeyPair(int key_bits, SecureRng& rng) {
  if (!IsSupportedKeyBits(key_bits)) {
    throw CryptoError("unsupported key size " + std::to_string(key_bits) +
                      " (expected 512, 1024, 2048 or 3072)");
  }
  const int prime_bits = key_bits / 2;
  for (;;) {
    mpz_class p = RandomPrime(prime_bits, rng);
    mpz_class q = RandomPrime(prime_bits, rng);
    if (p == q) continue;
    mpz_class n = p * q;
    if (gcd(n, mpz_class((p - 1) * (q - 1))) != 1) continue;
    PublicKey pk(n, key_bits);
    PrivateKey sk = PrivateKey::FromPrimes(pk, p, q);
    return KeyPair{std::move(pk), std::move(sk)};
  }
}

KeyPair GenerateKeyPair(int key_bits, std::uint64_t seed) {
  SecureRng rng(seed, "bdfl/keygen");
  return GenerateKeyPair(key_bits, rng);
}

Ciphertext::Ciphertext(PublicKey key, mpz_class value, int exponent,
                       mpz_class bound)
    : key_(std::move(key)),
      value_(std::move(value)),
      exponent_(exponent),
      bound_(std::move(bound)) {}

Ciphertext Encrypt(const PublicKey& pk, const EncodedNumber& e,
                   SecureRng& rng) {
  if (e.modulus != pk.n()) {
    throw CryptoError("plaintext was encoded for a different modulus");
  }
  if (e.mantissa < 0 || e.mantissa >= pk.n()) {
    throw CryptoError("plaintext mantissa outside [0, n)");
  }
  // g^m = 1 + m * n (mod n^2) for g = n + 1.
  mpz_class gm = e.mantissa * pk.n() + 1;
  mpz_class value = MulMod(gm, pk.Obfuscator(rng), pk.n_squared());
  return Ciphertext(pk, std::move(value), e.exponent,
                    abs(e.SignedMantissa()));
}

std::vector<Ciphertext> EncryptAll(const PublicKey& pk,
                                   std::span<const EncodedNumber> values,
                                   SecureRng& rng) {
  std::vector<Ciphertext> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(Encrypt(pk, v, rng));
  return out;
}

EncodedNumber Decrypt(const KeyPair& kp, const Ciphertext& c) {
  const PublicKey& pk = kp.public_key;
  if (!(c.key() == pk)) {
    throw CryptoError("ciphertext was produced under a different public key");
  }
  if (c.value() <= 0 || c.value() >= pk.n_squared()) {
    throw CryptoError("ciphertext value outside (0, n^2)");
  }
  if (gcd(c.value(), pk.n()) != 1) {
    throw CryptoError("ciphertext value is not a unit modulo n");
  }
  return EncodedNumber{kp.private_key.DecryptRaw(c.value()), c.exponent(),
                       pk.n()};
}

Ciphertext Rescale(const Ciphertext& c, int exponent) {
  if (exponent > c.exponent()) {
    throw CryptoError("rescale can only lower the exponent");
  }
  if (exponent == c.exponent()) return c;
  const auto shift = static_cast<mp_bitcnt_t>(c.exponent() - exponent);
  mpz_class bound = c.bound() << shift;
  CheckBound(bound, c.key(), "rescale");
  mpz_class factor = mpz_class(1) << shift;
  return Ciphertext(c.key(), PowMod(c.value(), factor, c.key().n_squared()),
                    exponent, std::move(bound));
}

Ciphertext Add(const Ciphertext& a, const Ciphertext& b) {
  CheckSameKey(a.key(), b.key());
  if (a.exponent() != b.exponent()) {
    const int target = std::min(a.exponent(), b.exponent());
    return Add(Rescale(a, target), Rescale(b, target));
  }
  mpz_class bound = a.bound() + b.bound();
  CheckBound(bound, a.key(), "add");
  return Ciphertext(a.key(),
                    MulMod(a.value(), b.value(), a.key().n_squared()),
                    a.exponent(), std::move(bound));
}

Ciphertext ScalarMul(const Ciphertext& c, const EncodedNumber& k) {
  if (k.modulus != c.key().n()) {
    throw CryptoError("scalar was encoded for a different modulus");
  }
  const mpz_class s = k.SignedMantissa();
  mpz_class bound = c.bound() * abs(s);
  CheckBound(bound, c.key(), "scalar multiply");
  const mpz_class& nsq = c.key().n_squared();
  mpz_class value = s < 0 ? PowMod(InvertMod(c.value(), nsq), -s, nsq)
                          : PowMod(c.value(), s, nsq);
  return Ciphertext(c.key(), std::move(value), c.exponent() + k.exponent,
                    std::move(bound));
}

Ciphertext Dot(std::span<const Ciphertext> cs,
               std::span<const EncodedNumber> ks) {
  if (cs.empty() || cs.size() != ks.size()) {
    throw CryptoError("dot product needs equally sized, non-empty operands");
  }
  const PublicKey& pk = cs.front().key();
  const mpz_class& nsq = pk.n_squared();
  int c_exp = cs.front().exponent();
  int k_exp = ks.front().exponent;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    CheckSameKey(cs[i].key(), pk);
    if (ks[i].modulus != pk.n()) {
      throw CryptoError("scalar was encoded for a different modulus");
    }
    c_exp = std::min(c_exp, cs[i].exponent());
    k_exp = std::min(k_exp, ks[i].exponent);
  }

  // Signs move onto the bases so that every exponent is a small magnitude.
  std::vector<mpz_class> bases(cs.size());
  std::vector<mpz_class> digits(cs.size());
  mpz_class bound = 0;
  std::size_t max_bits = 0;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const Ciphertext aligned = Rescale(cs[i], c_exp);
    mpz_class s = ks[i].SignedMantissa()
                  << static_cast<mp_bitcnt_t>(ks[i].exponent - k_exp);
    bound += aligned.bound() * abs(s);
    if (s < 0) {
      bases[i] = InvertMod(aligned.value(), nsq);
      digits[i] = -s;
    } else {
      bases[i] = aligned.value();
      digits[i] = std::move(s);
    }
    max_bits = std::max(max_bits, BitLength(digits[i]));
  }
  CheckBound(bound, pk, "dot product");

  // Bucketed multi-exponentiation (Pippenger) over windows of `w` bits.
  std::size_t w = 1;
  while ((std::size_t{1} << (w + 2)) < cs.size()) ++w;
  w = std::min<std::size_t>(w, 10);
  const std::size_t windows = (max_bits + w - 1) / w;
  const std::size_t buckets = (std::size_t{1} << w) - 1;
  std::vector<mpz_class> bucket(buckets);
  std::vector<bool> filled(buckets);

  mpz_class acc = 1;
  for (std::size_t win = windows; win-- > 0;) {
    if (acc != 1) {
      for (std::size_t b = 0; b < w; ++b) acc = MulMod(acc, acc, nsq);
    }
    std::fill(filled.begin(), filled.end(), false);
    for (std::size_t i = 0; i < cs.size(); ++i) {
      mpz_class shifted = digits[i] >> static_cast<mp_bitcnt_t>(win * w);
      const unsigned long digit =
          mpz_get_ui(shifted.get_mpz_t()) & ((1ul << w) - 1);
      if (digit == 0) continue;
      if (filled[digit - 1]) {
        bucket[digit - 1] = MulMod(bucket[digit - 1], bases[i], nsq);
      } else {
        bucket[digit - 1] = bases[i];
        filled[digit - 1] = true;
      }
    }
    // prod_j bucket_j^j via running products from the top bucket down.
    mpz_class running = 1;
    mpz_class window_sum = 1;
    bool any = false;
    for (std::size_t j = buckets; j-- > 0;) {
      if (filled[j]) {
        running = any ? MulMod(running, bucket[j], nsq) : bucket[j];
        any = true;
      }
      if (any) window_sum = MulMod(window_sum, running, nsq);
    }
    if (any) acc = MulMod(acc, window_sum, nsq);
  }
  return Ciphertext(pk, std::move(acc), c_exp + k_exp, std::move(bound));
}

}  // namespace bdfl::crypto
