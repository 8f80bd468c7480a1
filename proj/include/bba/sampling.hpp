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

#ifndef BBA_SAMPLING_HPP_
#define BBA_SAMPLING_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "bba/blackbox.hpp"

namespace bba {

inline constexpr std::size_t kDefaultBurnIn = 100;

// Product replacement random walk over generating tuples of <gens>.
//
// A step picks slots i != j, a side and an inverse flag and replaces
// slot_i by slot_i * slot_j^(+-1) or slot_j^(+-1) * slot_i. The walk also
// keeps an accumulator that is multiplied, on the same side, by the freshly
// replaced slot; samples are read from the accumulator. Successive
// accumulator values differ by a near-uniform factor, which keeps the
// output stream close to independent even though the slot tuple moves one
// slot at a time.
class PRState {
 public:
  PRState(BoxPtr box, std::span<const CryptoElement> gens, std::size_t slots,
          std::size_t burn_in, std::uint64_t seed);

  CryptoElement next();

  std::span<const CryptoElement> slots() const { return slots_; }
  const CryptoElement& accumulator() const { return accumulator_; }
  std::size_t burn_in() const { return burn_in_; }
  std::uint64_t step_count() const { return steps_; }
  std::uint64_t seed() const { return seed_; }
  BlackBoxStructure& box() const { return *box_; }

 private:
  void step();

  BoxPtr box_;
  std::vector<CryptoElement> slots_;
  CryptoElement accumulator_;
  std::size_t burn_in_;
  std::uint64_t steps_ = 0;
  std::uint64_t seed_;
  Rng rng_;
};

// slots == 0 selects max(10, |gens| + 5).
PRState pr_init(BoxPtr box, std::span<const CryptoElement> gens,
                std::size_t slots = 0, std::size_t burn_in = kDefaultBurnIn,
                std::uint64_t seed = 0);

CryptoElement pr_sample(PRState& state);

struct UniformityReport {
  double chi_square = 0.0;
  double p_value = 1.0;
  std::size_t degrees_of_freedom = 0;
  std::size_t samples = 0;
  std::vector<std::uint64_t> counts;  // aligned with the enumerated closure
};

// Pearson chi-square of draws against the uniform distribution on
// `population`. Draws outside the population raise ContractViolationError.
UniformityReport chi_square_uniformity(const ElementIndex& population,
                                       const std::function<CryptoElement()>& draw,
                                       std::size_t samples);

// Enumerates <gens> (within cap), draws `samples` elements by product
// replacement and tests them for uniformity.
UniformityReport uniformity_report(BoxPtr box,
                                   std::span<const CryptoElement> gens,
                                   std::size_t samples,
                                   std::size_t burn_in = kDefaultBurnIn,
                                   std::uint64_t seed = 0,
                                   std::size_t cap = 100000);

}  // namespace bba

#endif  // BBA_SAMPLING_HPP_
