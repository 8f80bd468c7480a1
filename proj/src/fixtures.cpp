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

#include "bba/fixtures.hpp"

#include <initializer_list>
#include <string_view>

#include "bba/random.hpp"

namespace bba {

namespace {

ProtoInvolution conjugation_part(const Encryption& enc, const PermutationGroup& g,
                                 Index t, std::initializer_list<std::string_view> gens,
                                 std::uint64_t seed) {
  std::vector<CryptoElement> cipher;
  for (auto c : gens) {
    cipher.push_back(enc.oracle.encrypt(g.index_of(PermutationGroup::parse_cycles(c, 4))));
  }
  auto graph = conjugation_graph(enc.box, enc.oracle.encrypt(t), cipher, seed);
  return std::get<ProtoInvolution>(std::move(graph));
}

S4Fixture s4_base(std::uint64_t seed) {
  auto s4 = PermutationGroup::symmetric(4);
  S4Fixture fx{s4, encrypt(s4, seed),
               s4->index_of(PermutationGroup::parse_cycles("(1 2)(3 4)", 4)), {}};
  return fx;
}

}  // namespace

S4Fixture s4_amalgam_fixture(std::uint64_t seed) {
  S4Fixture fx = s4_base(seed);
  fx.parts.push_back(conjugation_part(fx.enc, *fx.s4, fx.t, {"(1 2)", "(3 4)"},
                                      derive_seed(seed, 1)));
  fx.parts.push_back(conjugation_part(fx.enc, *fx.s4, fx.t,
                                      {"(1 3)(2 4)", "(1 4)(2 3)", "(1 2 3)"},
                                      derive_seed(seed, 2)));
  return fx;
}

S4Fixture s4_dihedral_fixture(std::uint64_t seed) {
  S4Fixture fx = s4_base(seed);
  fx.parts.push_back(conjugation_part(fx.enc, *fx.s4, fx.t, {"(1 2)", "(3 4)"},
                                      derive_seed(seed, 1)));
  fx.parts.push_back(conjugation_part(fx.enc, *fx.s4, fx.t, {"(1 3)(2 4)", "(1 4)(2 3)"},
                                      derive_seed(seed, 2)));
  return fx;
}

InconsistentFixture inconsistent_fixture(std::uint64_t seed) {
  ExplicitPtr v4 = parse_structure("z:2*z:2");
  InconsistentFixture fx{encrypt(v4, seed), {}};
  const CryptoElement a = fx.enc.oracle.encrypt(2);  // (1, 0)
  const CryptoElement b = fx.enc.oracle.encrypt(1);  // (0, 1)
  const BoxPtr& x = fx.enc.box;
  fx.parts.push_back(
      ProtoInvolution::validate(graph_subgroup(x, x, {{a, a}}, derive_seed(seed, 1))));
  fx.parts.push_back(ProtoInvolution::validate(
      graph_subgroup(x, x, {{a, b}, {b, a}}, derive_seed(seed, 2))));
  return fx;
}

InversionFixture z3_inversion_fixture(std::uint64_t seed) {
  ExplicitPtr z3 = make_cyclic_group(3);
  Encryption enc = encrypt(z3, seed);
  const CryptoElement g = enc.oracle.encrypt(1);
  const CryptoElement g_inv = enc.oracle.encrypt(2);
  auto f = ProtoInvolution::validate(
      graph_subgroup(enc.box, enc.box, {{g, g_inv}}, derive_seed(seed, 1)));
  return InversionFixture{std::move(enc), std::move(f)};
}

}  // namespace bba
