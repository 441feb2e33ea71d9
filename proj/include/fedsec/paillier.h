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

#ifndef FEDSEC_PAILLIER_H_
#define FEDSEC_PAILLIER_H_

// Paillier additive homomorphic encryption (g = n + 1 variant) over
// fixed-point encoded parameter vectors.
//
// Keys produced here are simulation grade: the default 512-bit modulus and
// the seeded Mersenne-Twister prime search are chosen for desk-scale runtime
// and reproducibility. This is NOT production cryptography. In the simulated
// protocol every node also holds the private key so it can decrypt the
// aggregate it receives back, which is weaker than a threshold scheme.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <gmpxx.h>

#include "fedsec/param_vector.h"

namespace fedsec {

struct PublicKey {
  mpz_class n;
  mpz_class n_squared;
  mpz_class g;  // n + 1
  std::size_t key_bits = 0;
};

struct KeyPair {
  PublicKey pub;
  mpz_class lambda;  // lcm(p - 1, q - 1)
  mpz_class mu;      // L(g^lambda mod n^2)^-1 mod n
};

struct Ciphertext {
  mpz_class value;  // in [0, n^2)
};

inline bool operator==(const Ciphertext& a, const Ciphertext& b) {
  return a.value == b.value;
}

// Reals are mapped to integers by scaling with 2^scale_bits and rounding.
// Negative integers are represented as n - |v|: residues in (n/2, n) decode
// as negative.
struct FixedPointEncoding {
  int scale_bits = 24;
  double clamp_abs = 64.0;
};

struct CipherVector {
  std::vector<Ciphertext> entries;
  FixedPointEncoding encoding;

  std::size_t dim() const { return entries.size(); }
};

// Randomness for encryption nonces.
class PaillierRandom {
 public:
  explicit PaillierRandom(std::uint64_t seed);
  // Uniform in [1, n) and coprime to n.
  mpz_class Nonce(const mpz_class& n);

 private:
  gmp_randclass state_;
};

// Deterministic for a fixed seed. Throws CryptoError when key_bits < 64.
KeyPair GenerateKeyPair(std::size_t key_bits, std::uint64_t seed);

// Builds a key from explicit primes. Intended for tests with toy primes.
// Throws CryptoError unless p and q are distinct primes with
// gcd(pq, (p-1)(q-1)) == 1.
KeyPair KeyPairFromPrimes(const mpz_class& p, const mpz_class& q);

// Requires 0 <= m < n (InvalidArgument otherwise).
Ciphertext Encrypt(const PublicKey& pk, const mpz_class& m,
                   PaillierRandom& rng);
// Encryption with an explicit nonce r (1 <= r < n, gcd(r, n) == 1).
Ciphertext EncryptWithNonce(const PublicKey& pk, const mpz_class& m,
                            const mpz_class& r);

mpz_class Decrypt(const KeyPair& kp, const Ciphertext& c);

// Decrypts to (dec(a) + dec(b)) mod n. Ciphertexts under different keys
// cannot be detected and yield garbage.
Ciphertext AddCiphertexts(const PublicKey& pk, const Ciphertext& a,
                          const Ciphertext& b);

// Decrypts to (k * dec(a)) mod n. Requires 0 <= k < n.
Ciphertext ScalarMul(const PublicKey& pk, const Ciphertext& a,
                     const mpz_class& k);

// Encryption of zero with nonce 1; the identity of AddCiphertexts.
Ciphertext EncryptedZero();

// Fixed-point encoding of a single real into [0, n). Throws CryptoError if
// |x| > clamp_abs or x is not finite.
mpz_class EncodeFixed(double x, const FixedPointEncoding& enc,
                      const mpz_class& n, std::size_t coordinate = 0);
// Inverse of EncodeFixed. `extra_scale_bits` accounts for integer weights
// applied homomorphically (the plaintext then carries scale
// 2^(scale_bits + extra_scale_bits)).
double DecodeFixed(const mpz_class& v, const FixedPointEncoding& enc,
                   const mpz_class& n, int extra_scale_bits = 0);

// Encodes and encrypts each coordinate. The CryptoError for an out-of-range
// entry names the coordinate.
CipherVector EncodeVector(const ParamVector& v, const FixedPointEncoding& enc,
                          const PublicKey& pk, PaillierRandom& rng);

// Decodes a vector of decrypted residues.
ParamVector DecodeVector(std::span<const mpz_class> decrypted,
                         const FixedPointEncoding& enc, const PublicKey& pk,
                         int extra_scale_bits = 0);

std::vector<mpz_class> DecryptVector(const KeyPair& kp,
                                     const CipherVector& cv);

// No-wraparound guard: the largest aggregate magnitude,
// total_multiplier * 2^scale_bits * clamp_abs, must stay below n/2.
// `total_multiplier` is the number of summed ciphertexts, or the sum of the
// integer weights for a weighted sum. Throws ConfigError on violation.
void CheckNoWraparound(const PublicKey& pk, const mpz_class& total_multiplier,
                       const FixedPointEncoding& enc);

// Wire format: 4-byte big-endian length followed by the big-endian
// magnitude bytes. A CipherVector is a 4-byte big-endian dim followed by its
// entries.
std::vector<std::uint8_t> SerializeCiphertext(const Ciphertext& c);
std::vector<std::uint8_t> SerializeCipherVector(const CipherVector& cv);
// Throws ParseError on truncated or trailing input.
Ciphertext DeserializeCiphertext(std::span<const std::uint8_t> bytes,
                                 std::size_t* consumed = nullptr);
CipherVector DeserializeCipherVector(std::span<const std::uint8_t> bytes,
                                     const FixedPointEncoding& enc);

}  // namespace fedsec

#endif  // FEDSEC_PAILLIER_H_
