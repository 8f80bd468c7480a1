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

// Constructive recognition of black-box finite fields.
//
// Given a field box K of known order p^n, build maps
//
//   beta:  F_{p^n} -> K   (arithmetic inside the box)
//   alpha: K -> F_{p^n}   (lookup table over the image of beta)
//
// with alpha(beta(a)) = a. beta is assembled from the prime-field embedding
// m -> 1 + ... + 1 (double-and-add) and an element theta of degree n, whose
// minimal polynomial is the product of (X - theta^(p^k)) over its Frobenius
// orbit, computed with box arithmetic.

#ifndef BBA_FIELD_RECOGNITION_HPP_
#define BBA_FIELD_RECOGNITION_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "bba/blackbox.hpp"
#include "bba/explicit.hpp"

namespace bba {

// How the inverse of the prime-field embedding is evaluated.
enum class InverseMethod { table, bsgs };

std::string_view to_string(InverseMethod m);

// Additive order of 1 by repeated addition. Throws BoundExceededError past cap.
std::uint32_t find_characteristic(BlackBoxStructure& k,
                                  std::uint64_t cap = kEnumerationCap + 1);

// m -> m * 1 from F_p into the prime subfield K_0 of a field box.
class PrimeEmbedding {
 public:
  PrimeEmbedding(BoxPtr field, std::uint32_t p, InverseMethod method);

  std::uint32_t characteristic() const { return p_; }
  InverseMethod method() const { return method_; }
  BlackBoxStructure& box() const { return *box_; }
  const BoxPtr& box_ptr() const { return box_; }

  // Double-and-add: O(log m) additions.
  CryptoElement image(std::uint64_t m) const;
  // m with m * 1 = x, or nullopt when x is not in K_0.
  std::optional<std::uint32_t> preimage(const CryptoElement& x) const;

  // A generator of K_0^* and the integer it encrypts.
  const CryptoElement& generator() const { return generator_; }
  std::uint32_t generator_residue() const { return primitive_root_; }

 private:
  BoxPtr box_;
  std::uint32_t p_;
  InverseMethod method_;
  std::uint32_t primitive_root_ = 1;
  CryptoElement generator_;
  std::shared_ptr<ElementIndex> table_;  // table_[m] = m * 1
};

// Throws CharacteristicMismatchError when p * 1 != 0 or p is not prime.
PrimeEmbedding embed_prime_field(BoxPtr k, std::uint32_t p,
                                 InverseMethod method = InverseMethod::table);

// k in [0, p-2] with g^k = x, by baby-step giant-step in K_0^*.
// Throws DomainError for x = 0 and NoSolutionError when x is not a power of g.
std::uint64_t discrete_log(const PrimeEmbedding& k0, const CryptoElement& g,
                           const CryptoElement& x);

class RecognitionResult {
 public:
  const FiniteField& field() const { return *field_; }
  std::shared_ptr<const FiniteField> field_ptr() const { return field_; }

  Index alpha(const CryptoElement& x) const;
  std::optional<Index> try_alpha(const CryptoElement& x) const;
  const CryptoElement& beta(Index a) const { return beta_[a]; }

  const QueryBudgetReport& cost() const { return cost_; }
  InverseMethod method() const { return method_; }
  // Minimal polynomial over F_p of the sampled element theta.
  const poly::Poly& minimal_polynomial() const { return minpoly_; }
  std::size_t samples_used() const { return samples_used_; }

 private:
  friend RecognitionResult recognize_field(BoxPtr, const FieldSpec&,
                                           std::uint64_t, InverseMethod);

  std::shared_ptr<const FiniteField> field_;
  BoxPtr box_;
  std::vector<CryptoElement> beta_;
  std::shared_ptr<ElementIndex> alpha_;
  QueryBudgetReport cost_;
  InverseMethod method_ = InverseMethod::table;
  poly::Poly minpoly_;
  std::size_t samples_used_ = 0;
};

// Builds alpha and beta for a box encrypting F_{spec}. Retries up to 8n
// samples for an element of degree n. Throws DegenerateSamplerError or
// ContractViolationError.
RecognitionResult recognize_field(BoxPtr k, const FieldSpec& spec,
                                  std::uint64_t seed = 0,
                                  InverseMethod method = InverseMethod::table);

}  // namespace bba

#endif  // BBA_FIELD_RECOGNITION_HPP_
