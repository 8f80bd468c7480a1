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

#include "bba/sampling.hpp"

#include <algorithm>

#include <boost/math/special_functions/gamma.hpp>

namespace bba {

PRState::PRState(BoxPtr box, std::span<const CryptoElement> gens,
                 std::size_t slots, std::size_t burn_in, std::uint64_t seed)
    : box_(std::move(box)), burn_in_(burn_in), seed_(seed), rng_(seed) {
  if (gens.empty()) {
    throw ArgumentError("product replacement needs at least one generator");
  }
  if (slots == 0) slots = std::max<std::size_t>(10, gens.size() + 5);
  if (slots < gens.size() || slots < 2) {
    throw ArgumentError("product replacement needs slots >= max(2, |gens|)");
  }
  slots_.reserve(slots);
  for (std::size_t i = 0; i < slots; ++i) slots_.push_back(gens[i % gens.size()]);
  accumulator_ = identity_element(*box_);
  for (std::size_t i = 0; i < burn_in_; ++i) step();
}

void PRState::step() {
  const ReductOps ops = reduct_ops(box_->signature(), Reduct::automatic);
  const std::size_t n = slots_.size();
  const std::size_t i = uniform_below(rng_, n);
  std::size_t j = uniform_below(rng_, n - 1);
  if (j >= i) ++j;
  const bool left = coin(rng_);
  const bool invert = coin(rng_);
  const CryptoElement factor =
      invert ? box_->apply(ops.inverse, slots_[j]) : slots_[j];
  if (left) {
    slots_[i] = box_->apply(ops.product, factor, slots_[i]);
    accumulator_ = box_->apply(ops.product, slots_[i], accumulator_);
  } else {
    slots_[i] = box_->apply(ops.product, slots_[i], factor);
    accumulator_ = box_->apply(ops.product, accumulator_, slots_[i]);
  }
  ++steps_;
}

CryptoElement PRState::next() {
  step();
  return accumulator_;
}

PRState pr_init(BoxPtr box, std::span<const CryptoElement> gens,
                std::size_t slots, std::size_t burn_in, std::uint64_t seed) {
  return PRState(std::move(box), gens, slots, burn_in, seed);
}

CryptoElement pr_sample(PRState& state) { return state.next(); }

UniformityReport chi_square_uniformity(const ElementIndex& population,
                                       const std::function<CryptoElement()>& draw,
                                       std::size_t samples) {
  UniformityReport report;
  const std::size_t k = population.size();
  report.counts.assign(k, 0);
  report.samples = samples;
  for (std::size_t s = 0; s < samples; ++s) {
    const auto i = population.find(draw());
    if (!i) {
      throw ContractViolationError("sampler produced an element outside <gens>");
    }
    ++report.counts[*i];
  }
  report.degrees_of_freedom = k - 1;
  if (k <= 1 || samples == 0) return report;
  const double expected = static_cast<double>(samples) / static_cast<double>(k);
  double chi = 0.0;
  for (std::uint64_t c : report.counts) {
    const double d = static_cast<double>(c) - expected;
    chi += d * d / expected;
  }
  report.chi_square = chi;
  report.p_value = boost::math::gamma_q(
      static_cast<double>(report.degrees_of_freedom) / 2.0, chi / 2.0);
  return report;
}

UniformityReport uniformity_report(BoxPtr box,
                                   std::span<const CryptoElement> gens,
                                   std::size_t samples, std::size_t burn_in,
                                   std::uint64_t seed, std::size_t cap) {
  const ElementIndex closure = close_under(*box, gens, cap);
  PRState state = pr_init(box, gens, 0, burn_in, seed);
  return chi_square_uniformity(closure, [&] { return state.next(); }, samples);
}

}  // namespace bba
