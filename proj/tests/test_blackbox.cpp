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

#include <random>

#include "bba/blackbox.hpp"
#include "bba/explicit.hpp"
#include "support.hpp"

using namespace bba;

namespace {

const char* const kGroups[] = {"z:12", "s:3", "d:4", "s:4", "a:5", "sl2-3", "pgl2-3",
                               "units:561", "z:4*z:2"};
const char* const kFields[] = {"f:5", "f:3^2", "f:3^4", "f:2^3", "f:7^2"};

}  // namespace

TEST_CASE("identity elements act as identities") {
  auto z6 = encrypt(make_cyclic_group(6), 1);
  const CryptoElement e = identity_element(*z6.box);
  for (int i = 0; i < 50; ++i) {
    const CryptoElement x = z6.box->sample();
    CHECK(z6.box->equal(z6.box->apply(Op::product, e, x), x));
  }

  auto f5 = encrypt(parse_structure("f:5"), 2);
  const CryptoElement one = identity_element(*f5.box, Op::one);
  const CryptoElement zero = identity_element(*f5.box, Op::zero);
  for (Index a = 0; a < 5; ++a) {
    const CryptoElement x = f5.oracle.encrypt(a);
    CHECK(f5.box->equal(f5.box->apply(Op::mul, one, x), x));
    CHECK(f5.box->equal(f5.box->apply(Op::add, zero, x), x));
  }
}

TEST_CASE("identity_element rejects constants the signature lacks") {
  auto z6 = encrypt(make_cyclic_group(6), 1);
  CHECK_THROWS_AS(identity_element(*z6.box, Op::one), SignatureError);
  CHECK_THROWS_AS(z6.box->apply(Op::add, z6.box->sample(), z6.box->sample()),
                  SignatureError);
}

TEST_CASE("power") {
  auto z10 = encrypt(make_cyclic_group(10), 3);
  // 3 * 7 = 21 = 1 mod 10
  CHECK(z10.box->equal(power(*z10.box, z10.oracle.encrypt(3), 7), z10.oracle.encrypt(1)));
  CHECK(z10.box->equal(power(*z10.box, z10.oracle.encrypt(3), 0), identity_element(*z10.box)));
  CHECK(z10.box->equal(power(*z10.box, z10.oracle.encrypt(3), -1), z10.oracle.encrypt(7)));

  auto z8 = encrypt(make_cyclic_group(8), 3);
  const CryptoElement two = z8.oracle.encrypt(2);  // order 4
  CHECK(z8.box->equal(power(*z8.box, two, 4), identity_element(*z8.box)));

  auto f7 = encrypt(parse_structure("f:7"), 3);
  CHECK_THROWS_AS(power(*f7.box, f7.oracle.encrypt(0), -2, Reduct::multiplicative),
                  PartialityError);
  // 3^5 = 243 = 5 mod 7
  CHECK(f7.box->equal(power(*f7.box, f7.oracle.encrypt(3), 5, Reduct::multiplicative),
                      f7.oracle.encrypt(5)));
  // 3 * 5 = 15 = 1 mod 7 in the additive reduct
  CHECK(f7.box->equal(power(*f7.box, f7.oracle.encrypt(3), 5, Reduct::additive),
                      f7.oracle.encrypt(1)));
}

TEST_CASE("power is additive in the exponent") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::int64_t> exp(-(1 << 20), 1 << 20);
  int cases = 0;
  for (const char* d : {"s:4", "pgl2-3", "z:561"}) {
    auto enc = encrypt(parse_structure(d), 5);
    BlackBoxStructure& x = *enc.box;
    for (int i = 0; i < 70; ++i, ++cases) {
      const CryptoElement g = x.sample();
      const std::int64_t m = exp(rng), n = exp(rng);
      CHECK(x.equal(power(x, g, m + n), x.apply(Op::product, power(x, g, m), power(x, g, n))));
    }
  }
  CHECK(cases >= 200);
}

TEST_CASE("element_order") {
  auto z12 = encrypt(make_cyclic_group(12), 4);
  CHECK(element_order(*z12.box, identity_element(*z12.box), 12) == 1);
  CHECK(element_order(*z12.box, z12.oracle.encrypt(4), 12) == 3);
  CHECK(element_order(*z12.box, z12.oracle.encrypt(4), 100) == 3);
  CHECK_THROWS_AS(element_order(*z12.box, z12.oracle.encrypt(1), 5), BoundExceededError);

  auto u7_plain = std::dynamic_pointer_cast<const UnitGroup>(make_unit_group(7));
  auto u7 = encrypt(u7_plain, 4);
  // powers of 3 mod 7: 3, 2, 6, 4, 5, 1
  std::uint64_t r = 3, m = 1;
  while (r != 1) {
    r = r * 3 % 7;
    ++m;
  }
  CHECK(element_order(*u7.box, u7.oracle.encrypt(u7_plain->index_of_residue(3)), 6) == m);
}

TEST_CASE("enumerate_closure") {
  auto s3 = parse_structure("s:3");
  auto enc = encrypt(s3, 6);
  const CryptoElement e = identity_element(*enc.box);
  CHECK(enumerate_closure(*enc.box, std::vector{e}, 10).size() == 1);

  const std::vector<CryptoElement> gens{enc.oracle.encrypt(test::perm(*s3, "(1 2)", 3)),
                                        enc.oracle.encrypt(test::perm(*s3, "(1 2 3)", 3))};
  const auto all = enumerate_closure(*enc.box, gens, 100);
  CHECK(all.size() == 6);
  CHECK(enc.box->equal(all.front(), e));

  auto z8 = encrypt(make_cyclic_group(8), 6);
  try {
    enumerate_closure(*z8.box, std::vector{z8.oracle.encrypt(1)}, 4);
    FAIL("expected CapExceededError");
  } catch (const CapExceededError& err) {
    // cap + 1 distinct elements witness the overflow
    CHECK(err.partial().size() == 5);
  }
}

TEST_CASE("congruence of equality for every binary operation") {
  for (const char* d : kGroups) {
    auto enc = encrypt(parse_structure(d), 8);
    BlackBoxStructure& x = *enc.box;
    for (int i = 0; i < 1000; ++i) {
      const CryptoElement a = x.sample();
      const CryptoElement a2 = x.apply(Op::product, a, identity_element(x));
      const CryptoElement b = x.sample();
      REQUIRE(x.equal(a, a2));
      CHECK(x.equal(x.apply(Op::product, a, b), x.apply(Op::product, a2, b)));
      CHECK(x.equal(x.apply(Op::product, b, a), x.apply(Op::product, b, a2)));
    }
  }
}

TEST_CASE("group laws through the oracle") {
  for (const char* d : kGroups) {
    CAPTURE(d);
    auto enc = encrypt(parse_structure(d), 9);
    BlackBoxStructure& x = *enc.box;
    const CryptoElement e = identity_element(x);
    for (int i = 0; i < 1000; ++i) {
      const CryptoElement a = x.sample(), b = x.sample(), c = x.sample();
      CHECK(x.equal(x.apply(Op::product, x.apply(Op::product, a, b), c),
                    x.apply(Op::product, a, x.apply(Op::product, b, c))));
      CHECK(x.equal(x.apply(Op::product, e, a), a));
      CHECK(x.equal(x.apply(Op::product, a, x.apply(Op::inverse, a)), e));
    }
  }
}

TEST_CASE("field laws through the oracle") {
  for (const char* d : kFields) {
    CAPTURE(d);
    auto enc = encrypt(parse_structure(d), 10);
    BlackBoxStructure& k = *enc.box;
    const CryptoElement zero = k.apply(Op::zero), one = k.apply(Op::one);
    for (int i = 0; i < 1000; ++i) {
      const CryptoElement a = k.sample(), b = k.sample(), c = k.sample();
      CHECK(k.equal(k.apply(Op::mul, a, k.apply(Op::add, b, c)),
                    k.apply(Op::add, k.apply(Op::mul, a, b), k.apply(Op::mul, a, c))));
      CHECK(k.equal(k.apply(Op::mul, a, b), k.apply(Op::mul, b, a)));
      CHECK(k.equal(k.apply(Op::add, a, b), k.apply(Op::add, b, a)));
      CHECK(k.equal(k.apply(Op::add, a, k.apply(Op::neg, a)), zero));
      if (!k.equal(a, zero)) {
        CHECK(k.equal(k.apply(Op::mul, a, k.apply(Op::inv, a)), one));
      }
    }
    CHECK_THROWS_AS(k.apply(Op::inv, zero), PartialityError);
  }
}

TEST_CASE("counters equal the number of oracle invocations") {
  auto enc = encrypt(parse_structure("s:4"), 11);
  auto wrapped = std::make_shared<test::WrappedBox>(enc.box);
  const QueryCounters before = wrapped->counters();
  std::mt19937_64 rng(1);
  std::uint64_t last_total = 0;
  for (int i = 0; i < 500; ++i) {
    switch (rng() % 4) {
      case 0: wrapped->sample(); break;
      case 1: wrapped->apply(Op::product, wrapped->sample(), wrapped->sample()); break;
      case 2: power(*wrapped, wrapped->sample(), static_cast<std::int64_t>(rng() % 1000)); break;
      default: wrapped->equal(wrapped->sample(), wrapped->sample()); break;
    }
    const QueryCounters c = wrapped->counters();
    const std::uint64_t total = c.sample_calls + c.apply_calls + c.equal_calls;
    CHECK(total >= last_total);
    last_total = total;
  }
  const QueryCounters delta = wrapped->counters() - before;
  CHECK(delta.sample_calls == wrapped->samples_seen);
  CHECK(delta.apply_calls == wrapped->applies_seen);
  CHECK(delta.equal_calls == wrapped->equals_seen);
}

TEST_CASE("budget meter reports the difference") {
  auto enc = encrypt(make_cyclic_group(9), 12);
  enc.box->sample();
  const BudgetMeter meter(*enc.box);
  enc.box->apply(Op::product, enc.box->sample(), enc.box->sample());
  const QueryBudgetReport r = meter.report();
  CHECK(r.sample_calls == 2);
  CHECK(r.apply_calls == 1);
  CHECK(r.equal_calls == 0);
  CHECK(r.wall_time_s >= 0.0);
}

TEST_CASE("cryptoelements have the box's string length") {
  auto enc = encrypt(parse_structure("a:5"), 13);
  CHECK(enc.box->equality_error_probability() == 0.0);
  for (int i = 0; i < 20; ++i) {
    CHECK(enc.box->sample().byte_length() == enc.box->byte_length());
  }
  const CryptoElement short_string = CryptoElement::from_uint(1, enc.box->byte_length() + 1);
  CHECK_THROWS_AS(enc.box->apply(Op::inverse, short_string), ArgumentError);
}

TEST_CASE("identical seeds reproduce sample streams") {
  auto plain = parse_structure("s:4");
  auto a = encrypt(plain, 21), b = encrypt(plain, 21);
  auto c = a.box->clone(77), d = a.box->clone(77);
  for (int i = 0; i < 100; ++i) {
    CHECK(a.box->sample() == b.box->sample());
    CHECK(c->sample() == d->sample());
  }
}

TEST_CASE("CryptoElement encoding helpers") {
  const CryptoElement x = CryptoElement::from_uint(0x1234, 3);
  CHECK(x.hex() == "001234");
  CHECK(x.to_uint() == 0x1234);
  CHECK(x.bit_length() == 24);
  const CryptoElement y = CryptoElement::concat(x, CryptoElement::from_uint(7, 1));
  CHECK(y.slice(3, 1).to_uint() == 7);
  CHECK(y.slice(0, 3) == x);
}

TEST_CASE("ElementIndex without bitwise equality uses the oracle") {
  auto enc = encrypt(make_cyclic_group(6), 3);
  auto wrapped = std::make_shared<test::WrappedBox>(enc.box);
  ElementIndex idx(*wrapped);
  CHECK(idx.insert(enc.oracle.encrypt(1)).second);
  CHECK_FALSE(idx.insert(enc.oracle.encrypt(1)).second);
  CHECK(idx.find(enc.oracle.encrypt(1)) == std::optional<std::size_t>(0));
  CHECK_FALSE(idx.find(enc.oracle.encrypt(2)).has_value());
}

TEST_CASE("enumerated group tables agree with the plain structure") {
  auto plain = parse_structure("d:4");
  auto enc = encrypt(plain, 14);
  std::vector<CryptoElement> gens;
  for (Index g : plain->generators()) gens.push_back(enc.oracle.encrypt(g));
  EnumeratedGroup g(enc.box, close_under(*enc.box, gens, 100));
  REQUIRE(g.size() == 8);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Index a = enc.oracle.decrypt_hidden(g.element(i));
    CHECK(g.order(i) == plain->element_order(a));
    for (std::size_t j = 0; j < g.size(); ++j) {
      const Index b = enc.oracle.decrypt_hidden(g.element(j));
      CHECK(enc.oracle.decrypt_hidden(g.element(g.product(i, j))) == plain->product(a, b));
    }
  }
}

TEST_CASE("prime factors") {
  CHECK(prime_factors(1) == std::vector<std::uint64_t>{});
  CHECK(prime_factors(360) == std::vector<std::uint64_t>{2, 3, 5});
  CHECK(prime_factors(97) == std::vector<std::uint64_t>{97});
}
