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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "bba/constructions.hpp"
#include "bba/fixtures.hpp"
#include "bba/isomorphism.hpp"
#include "support.hpp"

using namespace bba;

namespace {

std::vector<CryptoElement> samples(BlackBoxStructure& x, int n) {
  std::vector<CryptoElement> out;
  for (int i = 0; i < n; ++i) out.push_back(x.sample());
  return out;
}

ElementIndex enumerate(BlackBoxStructure& x, std::size_t cap = 1000) {
  return close_under(x, samples(x, 24), cap);
}

bool isomorphic_to(const ExplicitStructure& a, const BoxPtr& x) {
  EnumeratedGroup g(x, enumerate(*x));
  return count_isomorphisms(a, view_of(g), {}, 1) == 1;
}

bool abelian(BlackBoxStructure& x, const ElementIndex& all) {
  for (const auto& a : all.elements()) {
    for (const auto& b : all.elements()) {
      if (!x.equal(x.apply(Op::product, a, b), x.apply(Op::product, b, a))) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("direct product of Z_2 and Z_3") {
  auto z2 = encrypt(make_cyclic_group(2), 1), z3 = encrypt(make_cyclic_group(3), 2);
  auto p = direct_product(z2.box, z3.box, 3);
  CHECK(p->byte_length() == z2.box->byte_length() + z3.box->byte_length());
  const CryptoElement one_one = p->pair(z2.oracle.encrypt(1), z3.oracle.encrypt(1));
  // By CRT the order is lcm(2, 3).
  CHECK(element_order(*p, one_one, 6) == 6);
  const CryptoElement e = p->apply(Op::identity);
  CHECK(p->first(e) == identity_element(*z2.box));
  CHECK(p->second(e) == identity_element(*z3.box));
  CHECK(enumerate(*p).size() == 2 * 3);
  CHECK(isomorphic_to(*make_cyclic_group(6), p));

  // Marginals are uniform.
  std::vector<int> left(2, 0), right(3, 0);
  for (int i = 0; i < 6000; ++i) {
    const CryptoElement s = p->sample();
    ++left[z2.oracle.decrypt_hidden(p->first(s))];
    ++right[z3.oracle.decrypt_hidden(p->second(s))];
  }
  for (int c : left) CHECK(std::abs(c - 3000) < 5 * 39);
  for (int c : right) CHECK(std::abs(c - 2000) < 5 * 37);

  auto f5 = encrypt(parse_structure("f:5"), 4);
  CHECK_THROWS_AS(direct_product(z2.box, f5.box), SignatureError);
}

TEST_CASE("direct product orders multiply") {
  for (auto [a, b] : {std::pair{"s:3", "z:4"}, std::pair{"d:4", "z:3"}, std::pair{"z:5", "z:5"}}) {
    auto x = encrypt(parse_structure(a), 5), y = encrypt(parse_structure(b), 6);
    auto p = direct_product(x.box, y.box, 7);
    CHECK(enumerate(*p).size() == x.oracle.plain().order() * y.oracle.plain().order());
  }
}

TEST_CASE("homomorphic images") {
  auto z6 = encrypt(make_cyclic_group(6), 8);
  BoxPtr x = z6.box;
  auto same = homomorphic_image(x, [x](const CryptoElement& a, const CryptoElement& b) {
    return x->equal(a, b);
  });
  CHECK(enumerate(*same).size() == 6);

  // a ~ b iff a - b in {0, 3}, i.e. 2(a - b) = 0.
  auto quotient = homomorphic_image(x, [x](const CryptoElement& a, const CryptoElement& b) {
    const CryptoElement d = x->apply(Op::product, a, x->apply(Op::inverse, b));
    return x->equal(power(*x, d, 2), x->apply(Op::identity));
  });
  CHECK_FALSE(quotient->bitwise_equality());
  ElementIndex classes(*quotient);
  for (Index a = 0; a < 6; ++a) classes.insert(z6.oracle.encrypt(a));
  CHECK(classes.size() == 3);

  auto trivial = homomorphic_image(x, [](const CryptoElement&, const CryptoElement&) {
    return true;
  });
  CHECK(enumerate(*trivial).size() == 1);

  // Right cosets of <(1 2)> in S_3: an equivalence, not a congruence.
  auto plain = parse_structure("s:3");
  auto s3 = encrypt(plain, 9);
  BoxPtr y = s3.box;
  const CryptoElement t = s3.oracle.encrypt(test::perm(*plain, "(1 2)", 3));
  auto cosets = [y, t](const CryptoElement& a, const CryptoElement& b) {
    const CryptoElement d = y->apply(Op::product, a, y->apply(Op::inverse, b));
    return y->equal(d, y->apply(Op::identity)) || y->equal(d, t);
  };
  CHECK_THROWS_AS(homomorphic_image(y, cosets, 1, 32), ContractViolationError);
}

TEST_CASE("the quotient equality is a congruence on sampled triples") {
  auto z12 = encrypt(make_cyclic_group(12), 10);
  BoxPtr x = z12.box;
  auto eq = [x](const CryptoElement& a, const CryptoElement& b) {
    const CryptoElement d = x->apply(Op::product, a, x->apply(Op::inverse, b));
    return x->equal(power(*x, d, 3), x->apply(Op::identity));
  };
  auto q = homomorphic_image(x, eq, 10);
  int related = 0;
  for (int i = 0; i < 1000; ++i) {
    const CryptoElement a = q->sample(), b = q->sample();
    // a' = a * (an element of the kernel {0, 4, 8})
    const CryptoElement a2 = q->apply(Op::product, a, z12.oracle.encrypt(4 * (i % 3)));
    REQUIRE(q->equal(a, a2));
    ++related;
    CHECK(q->equal(q->apply(Op::product, a, b), q->apply(Op::product, a2, b)));
    CHECK(q->equal(q->apply(Op::product, b, a), q->apply(Op::product, b, a2)));
    CHECK(q->equal(q->apply(Op::inverse, a), q->apply(Op::inverse, a2)));
  }
  CHECK(related == 1000);
}

TEST_CASE("generated subgroups") {
  auto plain = parse_structure("s:4");
  auto enc = encrypt(plain, 11);
  auto trivial = generated_subgroup(enc.box, {identity_element(*enc.box)}, 1);
  for (int i = 0; i < 20; ++i) {
    CHECK(enc.box->equal(trivial->sample(), identity_element(*enc.box)));
  }
  auto klein = generated_subgroup(enc.box,
                                  {enc.oracle.encrypt(test::perm(*plain, "(1 2)", 4)),
                                   enc.oracle.encrypt(test::perm(*plain, "(3 4)", 4))},
                                  2);
  CHECK(enumerate(*klein).size() == 4);

  std::vector<CryptoElement> gens;
  for (Index g : plain->generators()) gens.push_back(enc.oracle.encrypt(g));
  auto whole = generated_subgroup(enc.box, gens, 3);
  const ElementIndex all = enumerate(*whole);
  CHECK(all.size() == 24);
  for (Index a = 0; a < 24; ++a) CHECK(all.find(enc.oracle.encrypt(a)).has_value());
}

TEST_CASE("graph subgroups") {
  auto z5 = encrypt(make_cyclic_group(5), 12);
  const CryptoElement e = identity_element(*z5.box);
  GraphSubgroup triv = graph_subgroup(z5.box, z5.box, {{e, e}}, 1);
  CHECK(triv.members().size() == 1);

  GraphSubgroup dbl =
      graph_subgroup(z5.box, z5.box, {{z5.oracle.encrypt(1), z5.oracle.encrypt(2)}}, 2);
  CHECK(dbl.contains(z5.oracle.encrypt(2), z5.oracle.encrypt(4)));
  CHECK_FALSE(dbl.contains(z5.oracle.encrypt(2), z5.oracle.encrypt(3)));
  CHECK(*dbl.image(z5.oracle.encrypt(3)) == z5.oracle.encrypt(1));
  CHECK(check_function(dbl).holds);
  CHECK(check_function(dbl).exhaustive);
  CHECK(check_function(dbl, 200, Direction::both).holds);

  // Sampled members come with their images attached.
  for (int i = 0; i < 100; ++i) {
    const auto [x, y] = dbl.sample();
    const Index a = z5.oracle.decrypt_hidden(x);
    CHECK(z5.oracle.decrypt_hidden(y) == (2 * a) % 5);
  }

  auto z4 = encrypt(make_cyclic_group(4), 13);
  GraphSubgroup bad = graph_subgroup(z4.box, z4.box,
                                     {{z4.oracle.encrypt(1), z4.oracle.encrypt(1)},
                                      {z4.oracle.encrypt(1), z4.oracle.encrypt(3)}},
                                     3);
  CHECK_FALSE(check_function(bad).holds);
  CHECK_THROWS_AS(graph_subgroup(z4.box, z4.box, {}, 3), ArgumentError);
}

TEST_CASE("graph of a non-injective homomorphism is a function one way only") {
  auto z6 = encrypt(make_cyclic_group(6), 14), z3 = encrypt(make_cyclic_group(3), 15);
  // a -> a mod 3
  GraphSubgroup g = graph_subgroup(z6.box, z3.box,
                                   {{z6.oracle.encrypt(1), z3.oracle.encrypt(1)}}, 4);
  CHECK(check_function(g, 200, Direction::forward).holds);
  CHECK_FALSE(check_function(g, 200, Direction::backward).holds);
}

TEST_CASE("sampled function checks report confidence") {
  auto z6 = encrypt(make_cyclic_group(6), 16);
  GraphSubgroup g = graph_subgroup(z6.box, z6.box,
                                   {{z6.oracle.encrypt(1), z6.oracle.encrypt(5)}}, 5);
  // A cap of 2 forces the sampled path.
  const FunctionCheck fc = check_function(g, 8, Direction::forward, 2);
  CHECK(fc.holds);
  CHECK_FALSE(fc.exhaustive);
  CHECK(fc.confidence > 0.5);
  CHECK(fc.confidence < 1.0);
}

TEST_CASE("conjugation graphs") {
  auto plain = parse_structure("s:3");
  auto enc = encrypt(plain, 17);
  std::vector<CryptoElement> gens;
  for (Index g : plain->generators()) gens.push_back(enc.oracle.encrypt(g));

  auto diag = conjugation_graph(enc.box, identity_element(*enc.box), gens, 1);
  REQUIRE(std::holds_alternative<ProtoInvolution>(diag));
  const auto& d = std::get<ProtoInvolution>(diag);
  for (Index a = 0; a < 6; ++a) {
    CHECK(*d.image(enc.oracle.encrypt(a)) == enc.oracle.encrypt(a));
  }

  auto c12 = conjugation_graph(enc.box, enc.oracle.encrypt(test::perm(*plain, "(1 2)", 3)),
                               gens, 2);
  REQUIRE(std::holds_alternative<ProtoInvolution>(c12));
  CHECK(*std::get<ProtoInvolution>(c12).image(
            enc.oracle.encrypt(test::perm(*plain, "(1 2 3)", 3))) ==
        enc.oracle.encrypt(test::perm(*plain, "(1 3 2)", 3)));

  auto c123 = conjugation_graph(
      enc.box, enc.oracle.encrypt(test::perm(*plain, "(1 2 3)", 3)), gens, 3);
  CHECK(std::holds_alternative<GraphSubgroup>(c123));

  auto z3 = encrypt(make_cyclic_group(3), 18);
  auto central = conjugation_graph(z3.box, z3.oracle.encrypt(1),
                                   std::vector{z3.oracle.encrypt(1)}, 4);
  REQUIRE(std::holds_alternative<ProtoInvolution>(central));
  for (Index a = 0; a < 3; ++a) {
    CHECK(*std::get<ProtoInvolution>(central).image(z3.oracle.encrypt(a)) ==
          z3.oracle.encrypt(a));
  }
}

TEST_CASE("proto-involution validation rejects non-involutions") {
  auto z5 = encrypt(make_cyclic_group(5), 19);
  // doubling has order 4 in Aut(Z_5)
  GraphSubgroup g =
      graph_subgroup(z5.box, z5.box, {{z5.oracle.encrypt(1), z5.oracle.encrypt(2)}}, 1);
  CHECK_THROWS_AS(ProtoInvolution::validate(g), ContractViolationError);
  GraphSubgroup neg =
      graph_subgroup(z5.box, z5.box, {{z5.oracle.encrypt(1), z5.oracle.encrypt(4)}}, 2);
  CHECK(ProtoInvolution::validate(neg).exhaustively_validated());
}

TEST_CASE("amalgamation of the S_4 fixture") {
  const S4Fixture fx = s4_amalgam_fixture(20);
  const ProtoInvolution f = amalgamate(fx.parts, 1);
  const PermutationGroup& s4 = *fx.s4;
  CHECK(f.graph().members().size() == 24);
  for (Index a = 0; a < 24; ++a) {
    const Index conj = s4.product(s4.product(s4.inverse(fx.t), a), fx.t);
    CHECK(*f.image(fx.enc.oracle.encrypt(a)) == fx.enc.oracle.encrypt(conj));
  }

  // k = 1 regenerates the input subgroup.
  const ProtoInvolution one = amalgamate(std::span(fx.parts).first(1), 2);
  CHECK(one.graph().members().size() == fx.parts[0].graph().members().size());
}

TEST_CASE("the dihedral version only covers a subgroup of order 8") {
  const S4Fixture fx = s4_dihedral_fixture(21);
  const ProtoInvolution f = amalgamate(fx.parts, 1);
  const PermutationGroup& s4 = *fx.s4;
  CHECK(f.graph().members().size() == 8);
  for (const auto& z : f.graph().members().elements()) {
    const Index a = fx.enc.oracle.decrypt_hidden(f.graph().ambient()->first(z));
    const Index conj = s4.product(s4.product(s4.inverse(fx.t), a), fx.t);
    CHECK(*f.image(fx.enc.oracle.encrypt(a)) == fx.enc.oracle.encrypt(conj));
  }
}

TEST_CASE("inconsistent parts do not amalgamate") {
  const InconsistentFixture fx = inconsistent_fixture(22);
  CHECK_THROWS_AS(amalgamate(fx.parts, 1), InconsistencyError);
  std::vector<ElementPair> all;
  for (const auto& part : fx.parts) {
    all.insert(all.end(), part.graph().pairs().begin(), part.graph().pairs().end());
  }
  CHECK_FALSE(check_function(graph_subgroup(fx.enc.box, fx.enc.box, all, 2)).holds);
}

TEST_CASE("reification") {
  const S4Fixture fx = s4_amalgam_fixture(23);
  const ProtoInvolution f = amalgamate(fx.parts, 1);
  const CryptoElement t = reify(fx.enc.box, f);
  CHECK(t == fx.enc.oracle.encrypt(fx.t));
  BlackBoxStructure& x = *fx.enc.box;
  CHECK(x.equal(x.apply(Op::product, t, t), identity_element(x)));
  const CryptoElement t_inv = x.apply(Op::inverse, t);
  for (Index a = 0; a < 24; ++a) {
    const CryptoElement g = fx.enc.oracle.encrypt(a);
    CHECK(x.equal(x.apply(Op::product, x.apply(Op::product, t_inv, g), t), *f.image(g)));
  }

  auto z6 = encrypt(make_cyclic_group(6), 24);
  auto diag = std::get<ProtoInvolution>(
      conjugation_graph(z6.box, identity_element(*z6.box),
                        std::vector{z6.oracle.encrypt(1)}, 1));
  const CryptoElement r = reify(z6.box, diag);
  // Abelian: every element conjugates trivially; the search takes the identity first.
  CHECK(z6.box->equal(r, identity_element(*z6.box)));

  const InversionFixture inv = z3_inversion_fixture(25);
  CHECK_THROWS_AS(reify(inv.enc.box, inv.f), NotInnerError);
}

TEST_CASE("semidirect products") {
  auto z3 = encrypt(make_cyclic_group(3), 26), z2 = encrypt(make_cyclic_group(2), 27);
  BoxPtr x = z3.box, y = z2.box;
  auto trivial_action = [](const CryptoElement& a, const CryptoElement&) { return a; };
  auto direct = semidirect_product(x, y, trivial_action, 1);
  const ElementIndex d_all = enumerate(*direct);
  CHECK(d_all.size() == 6);
  CHECK(abelian(*direct, d_all));

  auto inversion = [x, y](const CryptoElement& a, const CryptoElement& b) {
    return y->equal(b, y->apply(Op::identity)) ? a : x->apply(Op::inverse, a);
  };
  auto sd = semidirect_product(x, y, inversion, 2);
  const CryptoElement e = sd->apply(Op::identity);
  for (int i = 0; i < 50; ++i) {
    const CryptoElement z = sd->sample();
    CHECK(sd->equal(sd->apply(Op::product, e, z), z));
    CHECK(sd->equal(sd->apply(Op::product, z, sd->apply(Op::inverse, z)), e));
  }
  const ElementIndex all = enumerate(*sd);
  CHECK(all.size() == 6);
  CHECK_FALSE(abelian(*sd, all));
  CHECK(isomorphic_to(*PermutationGroup::symmetric(3), sd));

  // Translation is not an automorphism.
  const CryptoElement g = z3.oracle.encrypt(1);
  auto translate = [x, g](const CryptoElement& a, const CryptoElement&) {
    return x->apply(Op::product, a, g);
  };
  CHECK_THROWS_AS(semidirect_product(x, y, translate, 3), ContractViolationError);
}

TEST_CASE("semidirect product laws on a nonabelian normal subgroup") {
  auto plain = parse_structure("s:3");
  auto s3 = encrypt(plain, 28);
  auto z2 = encrypt(make_cyclic_group(2), 29);
  BoxPtr x = s3.box, y = z2.box;
  const CryptoElement c = s3.oracle.encrypt(test::perm(*plain, "(1 2)", 3));
  const CryptoElement c_inv = x->apply(Op::inverse, c);
  auto conj = [x, y, c, c_inv](const CryptoElement& a, const CryptoElement& b) {
    if (y->equal(b, y->apply(Op::identity))) return a;
    return x->apply(Op::product, x->apply(Op::product, c_inv, a), c);
  };
  auto sd = semidirect_product(x, y, conj, 4);
  for (int i = 0; i < 1000; ++i) {
    const CryptoElement a = sd->sample(), b = sd->sample(), d = sd->sample();
    CHECK(sd->equal(sd->apply(Op::product, sd->apply(Op::product, a, b), d),
                    sd->apply(Op::product, a, sd->apply(Op::product, b, d))));
  }
  CHECK(enumerate(*sd).size() == 12);
}

TEST_CASE("augmentation") {
  const InversionFixture inv = z3_inversion_fixture(30);
  auto aug = augment(inv.f, 1);
  const ElementIndex all = enumerate(*aug);
  CHECK(all.size() == 2 * inv.f.graph().members().size());
  CHECK(isomorphic_to(*PermutationGroup::symmetric(3), aug));

  CryptoElement c = aug->acting()->sample();
  while (aug->acting()->equal(c, aug->acting()->apply(Op::identity))) {
    c = aug->acting()->sample();
  }
  const CryptoElement swap = aug->pair(identity_element(*aug->normal()), c);
  CHECK(aug->equal(aug->apply(Op::product, swap, swap), aug->apply(Op::identity)));

  // Pairs with trivial second component form a copy of F.
  std::size_t base = 0;
  for (const auto& z : all.elements()) {
    if (aug->acting()->equal(aug->second(z), aug->acting()->apply(Op::identity))) ++base;
  }
  CHECK(base == inv.f.graph().members().size());

  // Group laws on samples.
  for (int i = 0; i < 1000; ++i) {
    const CryptoElement a = aug->sample(), b = aug->sample(), d = aug->sample();
    CHECK(aug->equal(aug->apply(Op::product, aug->apply(Op::product, a, b), d),
                     aug->apply(Op::product, a, aug->apply(Op::product, b, d))));
  }

  // The diagonal of Z_2 augments to Z_2 x Z_2.
  auto z2 = encrypt(make_cyclic_group(2), 31);
  auto diag = ProtoInvolution::validate(
      graph_subgroup(z2.box, z2.box, {{z2.oracle.encrypt(1), z2.oracle.encrypt(1)}}, 1));
  auto v4 = augment(diag, 2);
  CHECK(isomorphic_to(*parse_structure("z:2*z:2"), v4));
}

TEST_CASE("graph members multiply componentwise") {
  auto plain = parse_structure("s:4");
  auto enc = encrypt(plain, 32);
  auto c = conjugation_graph(enc.box, enc.oracle.encrypt(test::perm(*plain, "(1 2)", 4)),
                             [&] {
                               std::vector<CryptoElement> g;
                               for (Index i : plain->generators()) g.push_back(enc.oracle.encrypt(i));
                               return g;
                             }(),
                             1);
  GraphSubgroup g = std::get<ProtoInvolution>(c).graph();
  for (int i = 0; i < 1000; ++i) {
    const auto [x1, y1] = g.sample();
    const auto [x2, y2] = g.sample();
    CHECK(g.contains(enc.box->apply(Op::product, x1, x2), enc.box->apply(Op::product, y1, y2)));
  }
}
