// Copyright 2026 The FedSec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fedsec/paillier.h"

#include <cmath>
#include <string>
#include <utility>

#include "fedsec/errors.h"

namespace fedsec {
namespace {

constexpr std::size_t kMinKeyBits = 64;
constexpr int kPrimeAttempts = 64;

mpz_class Lcm(const mpz_class& a, const mpz_class& b) {
  mpz_class r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

mpz_class Gcd(const mpz_class& a, const mpz_class& b) {
  mpz_class r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

mpz_class PowMod(const mpz_class& base, const mpz_class& exp,
                 const mpz_class& mod) {
  mpz_class r;
  mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), mod.get_mpz_t());
  return r;
}

mpz_class RandomPrime(gmp_randclass& rng, std::size_t bits) {
  for (int attempt = 0; attempt < kPrimeAttempts; ++attempt) {
    mpz_class x = rng.get_z_bits(static_cast<mp_bitcnt_t>(bits));
    mpz_setbit(x.get_mpz_t(), static_cast<mp_bitcnt_t>(bits - 1));
    mpz_setbit(x.get_mpz_t(), 0);
    mpz_class p;
    mpz_nextprime(p.get_mpz_t(), x.get_mpz_t());
    if (mpz_sizeinbase(p.get_mpz_t(), 2) == bits) return p;
  }
  throw CryptoError("GenerateKeyPair: no " + std::to_string(bits) +
                    "-bit prime found");
}

void CheckIsPrime(const mpz_class& p, const char* name) {
  if (p < 2 || mpz_probab_prime_p(p.get_mpz_t(), 40) == 0) {
    throw CryptoError(std::string("KeyPairFromPrimes: ") + name +
                      " is not prime");
  }
}

void AppendU32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

std::uint32_t ReadU32(std::span<const std::uint8_t> bytes, std::size_t pos) {
  if (pos + 4 > bytes.size()) {
    throw ParseError("ciphertext: truncated length prefix");
  }
  return (std::uint32_t{bytes[pos]} << 24) |
         (std::uint32_t{bytes[pos + 1]} << 16) |
         (std::uint32_t{bytes[pos + 2]} << 8) | std::uint32_t{bytes[pos + 3]};
}

}  // namespace

PaillierRandom::PaillierRandom(std::uint64_t seed)
    : state_(gmp_randinit_mt) {
  mpz_class s;
  mpz_import(s.get_mpz_t(), 1, 1, sizeof(seed), 0, 0, &seed);
  state_.seed(s);
}

mpz_class PaillierRandom::Nonce(const mpz_class& n) {
  for (;;) {
    mpz_class r = state_.get_z_range(n - 1) + 1;
    if (Gcd(r, n) == 1) return r;
  }
}

KeyPair KeyPairFromPrimes(const mpz_class& p, const mpz_class& q) {
  CheckIsPrime(p, "p");
  CheckIsPrime(q, "q");
  if (p == q) throw CryptoError("KeyPairFromPrimes: p == q");
  const mpz_class n = p * q;
  const mpz_class phi = (p - 1) * (q - 1);
  if (Gcd(n, phi) != 1) {
    throw CryptoError("KeyPairFromPrimes: gcd(n, (p-1)(q-1)) != 1");
  }
  KeyPair kp;
  kp.pub.n = n;
  kp.pub.n_squared = n * n;
  kp.pub.g = n + 1;
  kp.pub.key_bits = mpz_sizeinbase(n.get_mpz_t(), 2);
  kp.lambda = Lcm(p - 1, q - 1);
  // With g = n + 1, L(g^lambda mod n^2) == lambda mod n.
  const mpz_class l = (PowMod(kp.pub.g, kp.lambda, kp.pub.n_squared) - 1) / n;
  if (mpz_invert(kp.mu.get_mpz_t(), l.get_mpz_t(), n.get_mpz_t()) == 0) {
    throw CryptoError("KeyPairFromPrimes: L(g^lambda) not invertible");
  }
  return kp;
}

KeyPair GenerateKeyPair(std::size_t key_bits, std::uint64_t seed) {
  if (key_bits < kMinKeyBits) {
    throw CryptoError("GenerateKeyPair: key_bits must be >= " +
                      std::to_string(kMinKeyBits) + ", got " +
                      std::to_string(key_bits));
  }
  gmp_randclass rng(gmp_randinit_mt);
  rng.seed(mpz_class(static_cast<unsigned long>(seed)));
  const std::size_t p_bits = (key_bits + 1) / 2;
  const std::size_t q_bits = key_bits / 2;
  for (int attempt = 0; attempt < kPrimeAttempts; ++attempt) {
    const mpz_class p = RandomPrime(rng, p_bits);
    const mpz_class q = RandomPrime(rng, q_bits);
    if (p == q || Gcd(p * q, (p - 1) * (q - 1)) != 1) continue;
    return KeyPairFromPrimes(p, q);
  }
  throw CryptoError("GenerateKeyPair: could not find a valid prime pair");
}

Ciphertext EncryptWithNonce(const PublicKey& pk, const mpz_class& m,
                            const mpz_class& r) {
  if (m < 0 || m >= pk.n) {
    throw InvalidArgument("Encrypt: plaintext out of range [0, n)");
  }
  // g^m = (1 + n)^m = 1 + m n (mod n^2).
  mpz_class gm = (1 + m * pk.n) % pk.n_squared;
  mpz_class c = (gm * PowMod(r, pk.n, pk.n_squared)) % pk.n_squared;
  return {std::move(c)};
}

Ciphertext Encrypt(const PublicKey& pk, const mpz_class& m,
                   PaillierRandom& rng) {
  if (m < 0 || m >= pk.n) {
    throw InvalidArgument("Encrypt: plaintext out of range [0, n)");
  }
  return EncryptWithNonce(pk, m, rng.Nonce(pk.n));
}

mpz_class Decrypt(const KeyPair& kp, const Ciphertext& c) {
  const mpz_class& n = kp.pub.n;
  const mpz_class u = PowMod(c.value, kp.lambda, kp.pub.n_squared);
  mpz_class m = (((u - 1) / n) * kp.mu) % n;
  return m;
}

Ciphertext AddCiphertexts(const PublicKey& pk, const Ciphertext& a,
                          const Ciphertext& b) {
  return {(a.value * b.value) % pk.n_squared};
}

Ciphertext ScalarMul(const PublicKey& pk, const Ciphertext& a,
                     const mpz_class& k) {
  if (k < 0 || k >= pk.n) {
    throw InvalidArgument("ScalarMul: scalar out of range [0, n)");
  }
  return {PowMod(a.value, k, pk.n_squared)};
}

Ciphertext EncryptedZero() { return {mpz_class(1)}; }

mpz_class EncodeFixed(double x, const FixedPointEncoding& enc,
                      const mpz_class& n, std::size_t coordinate) {
  if (!std::isfinite(x) || std::fabs(x) > enc.clamp_abs) {
    throw CryptoError("EncodeFixed: coordinate " + std::to_string(coordinate) +
                      " has magnitude " + std::to_string(x) +
                      " beyond clamp " + std::to_string(enc.clamp_abs));
  }
  const double scaled = std::nearbyint(std::ldexp(x, enc.scale_bits));
  mpz_class v(scaled);
  if (2 * abs(v) >= n) {
    throw CryptoError("EncodeFixed: coordinate " + std::to_string(coordinate) +
                      " does not fit the modulus");
  }
  if (v < 0) v += n;
  return v;
}

double DecodeFixed(const mpz_class& v, const FixedPointEncoding& enc,
                   const mpz_class& n, int extra_scale_bits) {
  mpz_class s = v;
  if (2 * s > n) s -= n;
  return std::ldexp(s.get_d(), -(enc.scale_bits + extra_scale_bits));
}

CipherVector EncodeVector(const ParamVector& v, const FixedPointEncoding& enc,
                          const PublicKey& pk, PaillierRandom& rng) {
  CipherVector cv;
  cv.encoding = enc;
  cv.entries.reserve(v.dim());
  for (std::size_t k = 0; k < v.dim(); ++k) {
    cv.entries.push_back(Encrypt(pk, EncodeFixed(v[k], enc, pk.n, k), rng));
  }
  return cv;
}

ParamVector DecodeVector(std::span<const mpz_class> decrypted,
                         const FixedPointEncoding& enc, const PublicKey& pk,
                         int extra_scale_bits) {
  std::vector<double> out;
  out.reserve(decrypted.size());
  for (const mpz_class& v : decrypted) {
    out.push_back(DecodeFixed(v, enc, pk.n, extra_scale_bits));
  }
  return ParamVector(std::move(out));
}

std::vector<mpz_class> DecryptVector(const KeyPair& kp,
                                     const CipherVector& cv) {
  std::vector<mpz_class> out;
  out.reserve(cv.dim());
  for (const Ciphertext& c : cv.entries) out.push_back(Decrypt(kp, c));
  return out;
}

void CheckNoWraparound(const PublicKey& pk, const mpz_class& total_multiplier,
                       const FixedPointEncoding& enc) {
  mpz_class bound = mpz_class(std::ceil(enc.clamp_abs)) * total_multiplier;
  mpz_mul_2exp(bound.get_mpz_t(), bound.get_mpz_t(),
               static_cast<mp_bitcnt_t>(enc.scale_bits));
  if (2 * bound >= pk.n) {
    throw ConfigError(
        "wraparound guard: multiplier * 2^scale_bits * clamp_abs must be < "
        "n/2 (key_bits=" +
        std::to_string(pk.key_bits) + ", scale_bits=" +
        std::to_string(enc.scale_bits) + ", multiplier=" +
        total_multiplier.get_str() + ")");
  }
}

std::vector<std::uint8_t> SerializeCiphertext(const Ciphertext& c) {
  const std::size_t len = (mpz_sizeinbase(c.value.get_mpz_t(), 2) + 7) / 8;
  std::vector<std::uint8_t> out;
  out.reserve(4 + len);
  AppendU32(out, static_cast<std::uint32_t>(c.value == 0 ? 0 : len));
  if (c.value != 0) {
    out.resize(4 + len);
    std::size_t count = 0;
    mpz_export(out.data() + 4, &count, 1, 1, 1, 0, c.value.get_mpz_t());
  }
  return out;
}

std::vector<std::uint8_t> SerializeCipherVector(const CipherVector& cv) {
  std::vector<std::uint8_t> out;
  AppendU32(out, static_cast<std::uint32_t>(cv.dim()));
  for (const Ciphertext& c : cv.entries) {
    const std::vector<std::uint8_t> e = SerializeCiphertext(c);
    out.insert(out.end(), e.begin(), e.end());
  }
  return out;
}

Ciphertext DeserializeCiphertext(std::span<const std::uint8_t> bytes,
                                 std::size_t* consumed) {
  const std::uint32_t len = ReadU32(bytes, 0);
  if (4 + std::size_t{len} > bytes.size()) {
    throw ParseError("ciphertext: truncated magnitude (need " +
                     std::to_string(len) + " bytes)");
  }
  Ciphertext c;
  if (len > 0) {
    mpz_import(c.value.get_mpz_t(), len, 1, 1, 1, 0, bytes.data() + 4);
  }
  if (consumed != nullptr) {
    *consumed = 4 + len;
  } else if (4 + std::size_t{len} != bytes.size()) {
    throw ParseError("ciphertext: trailing bytes");
  }
  return c;
}

CipherVector DeserializeCipherVector(std::span<const std::uint8_t> bytes,
                                     const FixedPointEncoding& enc) {
  const std::uint32_t dim = ReadU32(bytes, 0);
  CipherVector cv;
  cv.encoding = enc;
  std::size_t pos = 4;
  for (std::uint32_t i = 0; i < dim; ++i) {
    std::size_t used = 0;
    cv.entries.push_back(DeserializeCiphertext(bytes.subspan(pos), &used));
    pos += used;
  }
  if (pos != bytes.size()) throw ParseError("cipher vector: trailing bytes");
  return cv;
}

}  // namespace fedsec
