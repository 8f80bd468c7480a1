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

// Standard proto-involution fixtures shared by the demos and the tests.

#ifndef BBA_FIXTURES_HPP_
#define BBA_FIXTURES_HPP_

#include <cstdint>
#include <memory>
#include <vector>

#include "bba/constructions.hpp"
#include "bba/explicit.hpp"

namespace bba {

// Encrypted S4 with conjugation by t = (1 2)(3 4) restricted to
// H1 = <(1 2), (3 4)> and H2 = A4 = <(1 3)(2 4), (1 4)(2 3), (1 2 3)>.
// Together H1 and H2 generate S4.
struct S4Fixture {
  std::shared_ptr<const PermutationGroup> s4;
  Encryption enc;
  Index t;
  std::vector<ProtoInvolution> parts;
};

S4Fixture s4_amalgam_fixture(std::uint64_t seed);

// Same involution on <(1 2), (3 4)> and <(1 3)(2 4), (1 4)(2 3)> only. These
// generate a dihedral group of order 8, not S4.
S4Fixture s4_dihedral_fixture(std::uint64_t seed);

// Encrypted Z2 x Z2 = <a, b> with phi_1 = id on <a> and phi_2 swapping a and
// b. They disagree at a, so amalgamation must fail.
struct InconsistentFixture {
  Encryption enc;
  std::vector<ProtoInvolution> parts;
};

InconsistentFixture inconsistent_fixture(std::uint64_t seed);

// Inversion g -> g^-1 on encrypted Z3: an involution that is not inner.
struct InversionFixture {
  Encryption enc;
  ProtoInvolution f;
};

InversionFixture z3_inversion_fixture(std::uint64_t seed);

}  // namespace bba

#endif  // BBA_FIXTURES_HPP_
