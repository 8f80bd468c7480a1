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

// Helpers shared by the test binaries: a transparent wrapper box that counts
// calls on its own, brute-force number theory, and a few shorthands.

#ifndef BBA_TESTS_SUPPORT_HPP_
#define BBA_TESTS_SUPPORT_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <numeric>
#include <string>

#include "bba/blackbox.hpp"
#include "bba/explicit.hpp"

namespace bba::test {

// Delegates to a parent box, optionally with a replacement sampler, and
// tallies its own oracle calls independently of the base-class counters.
class WrappedBox final : public BlackBoxStructure {
 public:
  explicit WrappedBox(BoxPtr parent, std::function<CryptoElement()> sampler = {})
      : BlackBoxStructure(parent->signature(), parent->byte_length(), parent->seed()),
        parent_(std::move(parent)),
        sampler_(std::move(sampler)) {}

  std::uint64_t samples_seen = 0;
  std::uint64_t applies_seen = 0;
  std::uint64_t equals_seen = 0;

  bool bitwise_equality() const override { return parent_->bitwise_equality(); }
  std::string sampler_provenance() const override { return "test wrapper"; }
  BoxPtr clone(std::uint64_t seed) const override {
    return std::make_shared<WrappedBox>(parent_->clone(seed), sampler_);
  }

 protected:
  CryptoElement do_sample() override {
    ++samples_seen;
    return sampler_ ? sampler_() : parent_->sample();
  }
  CryptoElement do_apply(Op op, std::span<const CryptoElement* const> args) override {
    ++applies_seen;
    return parent_->apply(op, args);
  }
  bool do_equal(const CryptoElement& x, const CryptoElement& y) override {
    ++equals_seen;
    return parent_->equal(x, y);
  }

 private:
  BoxPtr parent_;
  std::function<CryptoElement()> sampler_;
};

inline std::uint64_t euler_phi_bruteforce(std::uint64_t n) {
  std::uint64_t count = 0;
  for (std::uint64_t r = 1; r <= n; ++r) count += std::gcd(r, n) == 1 ? 1 : 0;
  return n == 1 ? 1 : count;
}

inline bool is_prime_trial(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

inline Index perm(const ExplicitStructure& g, std::string_view cycles, std::uint32_t degree) {
  const auto& p = dynamic_cast<const PermutationGroup&>(g);
  return p.index_of(PermutationGroup::parse_cycles(cycles, degree));
}

}  // namespace bba::test

#endif  // BBA_TESTS_SUPPORT_HPP_
