/*
 * Copyright 2026 The bbalgebra Authors.
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

// Known-plaintext attacks on homomorphic encryption E: A -> X.
//
// Recognition gives alpha: X -> A and beta: A -> X with alpha(beta(a)) = a.
// Then delta = alpha o E is an automorphism of A, fitted on known pairs, and
//
//   E^-1 = delta^-1 o alpha,   E = beta o delta.
//
// Attack functions receive the box and the known pairs only. The hidden
// inverse is touched by verify_recovery and nothing else.

#ifndef BBA_ATTACK_HPP_
#define BBA_ATTACK_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bba/blackbox.hpp"
#include "bba/explicit.hpp"

namespace bba {

inline constexpr std::size_t kGroupAttackCap = 10000;
inline constexpr std::size_t kSurvivorLimit = 32;

enum class Outcome {
  success,
  insufficient_plaintext,
  recognition_inconsistency,
  wrong_structure,
};

std::string_view to_string(Outcome o);

struct KnownPair {
  Index plain;
  CryptoElement cipher;
};

// Pairs (a, E(a)) for the given plaintexts.
std::vector<KnownPair> known_pairs(const EncryptionOracle& oracle,
                                   std::span<const Index> plain);

// A candidate delta in Aut(A).
struct AutomorphismHypothesis {
  std::string description;
  std::optional<std::uint32_t> frobenius_exponent;
  std::vector<Index> forward;
  std::vector<Index> inverse;
};

struct VerificationSummary {
  std::size_t checked = 0;
  std::size_t mismatches = 0;
};

struct AttackReport {
  Outcome outcome = Outcome::wrong_structure;
  std::string structure;
  std::string delta;
  std::vector<std::string> survivors;
  bool survivors_truncated = false;
  std::size_t known_pairs_used = 0;
  // Smallest prefix of the known pairs that already pins delta.
  std::optional<std::size_t> known_pairs_needed;
  std::string detail;
  QueryBudgetReport budget;
  VerificationSummary verification;

  bool success() const {
    return outcome == Outcome::success && verification.mismatches == 0;
  }
};

// E^-1 and E rebuilt from alpha, beta and delta.
class RecoveredCipher {
 public:
  using Locator = std::function<std::optional<Index>(const CryptoElement&)>;

  RecoveredCipher(Locator alpha, std::vector<CryptoElement> beta,
                  AutomorphismHypothesis delta);

  // delta^-1(alpha(x)); throws ArgumentError for strings outside X.
  Index decrypt(const CryptoElement& x) const;
  // beta(delta(a)).
  const CryptoElement& encrypt(Index a) const;
  std::size_t order() const { return beta_.size(); }
  const AutomorphismHypothesis& delta() const { return delta_; }

 private:
  Locator alpha_;
  std::vector<CryptoElement> beta_;
  AutomorphismHypothesis delta_;
};

struct AttackResult {
  AttackReport report;
  std::optional<RecoveredCipher> cipher;
  std::vector<AutomorphismHypothesis> survivors;
};

// Frobenius search: delta = Frob^k for the unique k consistent with known.
AttackResult attack_field(BoxPtr x, const FieldSpec& spec,
                          std::span<const KnownPair> known, std::uint64_t seed = 0);

// Enumerates X, finds an isomorphism A -> X by generator-image backtracking,
// then fits delta in Aut(A) to the known pairs.
AttackResult attack_group_small(BoxPtr x, ExplicitPtr a,
                                std::span<const KnownPair> known,
                                std::uint64_t seed = 0,
                                std::size_t cap = kGroupAttackCap);

// Compares the recovered maps with the hidden ones on all of A.
VerificationSummary verify_recovery(const RecoveredCipher& cipher,
                                    const EncryptionOracle& oracle);

// Attack followed by verification; fills report.verification and demotes a
// success with mismatches.
void verify_into(AttackResult& result, const EncryptionOracle& oracle);

// Does X encrypt A? Exact for fields and for |A| <= cap; for larger cyclic A,
// `confidence` random elements must satisfy x^|A| = 1. A false answer is
// certain. Throws ArgumentError when A is neither small nor cyclic.
bool verify_encrypts(BoxPtr x, ExplicitPtr a, std::size_t confidence,
                     std::uint64_t seed = 0, std::size_t cap = kGroupAttackCap);

// (Z/nZ)^* with residues as codewords and uniform sampling of units.
class ResidueUnitsBox final : public BlackBoxStructure {
 public:
  ResidueUnitsBox(std::uint64_t n, std::uint64_t seed);

  std::uint64_t modulus() const { return n_; }
  CryptoElement from_residue(std::uint64_t r) const;
  std::uint64_t residue(const CryptoElement& x) const { return x.to_uint(); }

  bool bitwise_equality() const override { return true; }
  std::string sampler_provenance() const override;
  BoxPtr clone(std::uint64_t seed) const override;

 protected:
  CryptoElement do_sample() override;
  CryptoElement do_apply(Op op, std::span<const CryptoElement* const> args) override;
  bool do_equal(const CryptoElement& x, const CryptoElement& y) override {
    return x == y;
  }

 private:
  std::uint64_t n_;
};

enum class Verdict { composite, probably_prime };

std::string_view to_string(Verdict v);

struct MillerRabinResult {
  Verdict verdict = Verdict::probably_prime;
  std::size_t rounds_run = 0;
  // Bound on P(probably_prime | n composite).
  double error_bound = 1.0;
  std::optional<std::uint64_t> witness;
  QueryBudgetReport budget;
};

// Strong pseudoprime test through the (Z/nZ)^* box. Throws ArgumentError for
// n even, n < 3 or n >= 2^32.
MillerRabinResult miller_rabin_bb(std::uint64_t n, std::size_t rounds,
                                  std::uint64_t seed);

}  // namespace bba

#endif  // BBA_ATTACK_HPP_
