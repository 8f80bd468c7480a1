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

#include "bba/field_recognition.hpp"
#include "support.hpp"

using namespace bba;

namespace {

std::shared_ptr<const FiniteField> field_of(const EncryptionOracle& oracle) {
  return std::dynamic_pointer_cast<const FiniteField>(oracle.plain_ptr());
}

// Checks that a -> decrypt(beta(a)) is a bijective ring map between the two
// plain fields, using only their own arithmetic.
void check_isomorphism(const RecognitionResult& r, const EncryptionOracle& oracle) {
  const FiniteField& a = r.field();
  const FiniteField& b = *field_of(oracle);
  REQUIRE(a.order() == b.order());
  std::vector<Index> phi(a.order());
  std::vector<bool> hit(a.order(), false);
  for (Index i = 0; i < a.order(); ++i) {
    phi[i] = oracle.decrypt_hidden(r.beta(i));
    REQUIRE(!hit[phi[i]]);
    hit[phi[i]] = true;
  }
  CHECK(phi[a.one()] == b.one());
  for (Index i = 0; i < a.order(); ++i) {
    for (Index j = 0; j < a.order(); ++j) {
      REQUIRE(phi[a.add(i, j)] == b.add(phi[i], phi[j]));
      REQUIRE(phi[a.mul(i, j)] == b.mul(phi[i], phi[j]));
    }
  }
}

}  // namespace

TEST_CASE("characteristic of small fields") {
  for (auto [d, p] : {std::pair{"f:3", 3u}, std::pair{"f:5^2", 5u}, std::pair{"f:7^2", 7u},
                      std::pair{"f:2^4", 2u}, std::pair{"f:97", 97u}}) {
    CAPTURE(d);
    auto enc = encrypt(parse_structure(d), 1);
    CHECK(find_characteristic(*enc.box) == p);
  }
  auto f97 = encrypt(parse_structure("f:97"), 1);
  CHECK_THROWS_AS(find_characteristic(*f97.box, 50), BoundExceededError);
  auto z5 = encrypt(make_cyclic_group(5), 1);
  CHECK_THROWS_AS(find_characteristic(*z5.box), SignatureError);
}

TEST_CASE("prime field embedding") {
  auto enc = encrypt(parse_structure("f:7^2"), 2);
  const FiniteField& plain = *field_of(enc.oracle);
  for (auto method : {InverseMethod::table, InverseMethod::bsgs}) {
    CAPTURE(to_string(method));
    const PrimeEmbedding k0 = embed_prime_field(enc.box, 7, method);
    CHECK(k0.characteristic() == 7);
    CHECK(k0.method() == method);
    for (std::uint64_t m = 0; m < 30; ++m) {
      CHECK(enc.oracle.decrypt_hidden(k0.image(m)) == plain.embed(m));
    }
    for (Index a = 0; a < plain.order(); ++a) {
      const auto pre = k0.preimage(enc.oracle.encrypt(a));
      if (a < 7) {
        CHECK(pre == std::optional<std::uint32_t>(static_cast<std::uint32_t>(a)));
      } else {
        CHECK_FALSE(pre.has_value());
      }
    }
    // The generator is a primitive root of F_7.
    std::uint32_t g = k0.generator_residue(), x = g, order = 1;
    while (x != 1) {
      x = x * g % 7;
      ++order;
    }
    CHECK(order == 6);
    CHECK(enc.oracle.decrypt_hidden(k0.generator()) == g);
  }
  CHECK_THROWS_AS(embed_prime_field(enc.box, 5), CharacteristicMismatchError);
  CHECK_THROWS_AS(embed_prime_field(enc.box, 49), CharacteristicMismatchError);
}

TEST_CASE("discrete logarithms") {
  auto f7 = encrypt(parse_structure("f:7"), 3);
  const PrimeEmbedding k0 = embed_prime_field(f7.box, 7, InverseMethod::bsgs);
  // 3^1 = 3, 3^2 = 2, 3^3 = 6, 3^4 = 4, 3^5 = 5, 3^6 = 1
  CHECK(discrete_log(k0, f7.oracle.encrypt(3), f7.oracle.encrypt(6)) == 3);
  CHECK(discrete_log(k0, f7.oracle.encrypt(3), f7.oracle.encrypt(1)) == 0);
  CHECK_THROWS_AS(discrete_log(k0, f7.oracle.encrypt(3), f7.oracle.encrypt(0)), DomainError);
  // 2 generates {1, 2, 4}
  CHECK_THROWS_AS(discrete_log(k0, f7.oracle.encrypt(2), f7.oracle.encrypt(3)),
                  NoSolutionError);
}

TEST_CASE("discrete logarithms agree with brute force for p <= 97") {
  for (std::uint32_t p = 2; p <= 97; ++p) {
    if (!test::is_prime_trial(p)) continue;
    CAPTURE(p);
    auto enc = encrypt(make_field(FieldSpec::make(p, 1)), p);
    const PrimeEmbedding k0 = embed_prime_field(enc.box, p, InverseMethod::bsgs);
    const std::uint32_t g = k0.generator_residue();
    std::uint64_t x = 1;
    for (std::uint32_t e = 0; e + 1 < p; ++e) {
      const std::uint64_t got = discrete_log(k0, k0.generator(), enc.oracle.encrypt(x));
      REQUIRE(got == e);
      x = x * g % p;
    }
  }
}

TEST_CASE("bsgs and table inverses agree") {
  auto enc = encrypt(parse_structure("f:97"), 4);
  const PrimeEmbedding table = embed_prime_field(enc.box, 97, InverseMethod::table);
  const PrimeEmbedding bsgs = embed_prime_field(enc.box, 97, InverseMethod::bsgs);
  for (Index a = 0; a < 97; ++a) {
    const CryptoElement x = enc.oracle.encrypt(a);
    CHECK(table.preimage(x) == bsgs.preimage(x));
    CHECK(*table.preimage(x) == a);
  }
}

TEST_CASE("recognizing a prime field") {
  auto enc = encrypt(parse_structure("f:3"), 5);
  const RecognitionResult r = recognize_field(enc.box, FieldSpec::make(3, 1));
  for (Index a = 0; a < 3; ++a) {
    CHECK(enc.oracle.decrypt_hidden(r.beta(a)) == a);
    CHECK(r.alpha(enc.oracle.encrypt(a)) == a);
  }
  CHECK(r.samples_used() == 0);
}

TEST_CASE("recognizing F_9") {
  auto enc = encrypt(parse_structure("f:3^2"), 6);
  const FieldSpec spec = FieldSpec::make(3, 2);
  const RecognitionResult r = recognize_field(enc.box, spec);
  BlackBoxStructure& k = *enc.box;
  // beta(x) satisfies the spec modulus x^2 + 1: beta(x)^2 = -1 = beta(2).
  const CryptoElement bx = r.beta(r.field().generator());
  CHECK(k.equal(k.apply(Op::mul, bx, bx), r.beta(2)));
  check_isomorphism(r, enc.oracle);
  CHECK(r.minimal_polynomial().size() == 3);
  CHECK(poly::is_irreducible(r.minimal_polynomial(), 3));
}

TEST_CASE("recognition is an isomorphism for several fields") {
  for (const char* d : {"f:3^4", "f:2^3", "f:2^6", "f:5^3", "f:7^2", "f:11^2"}) {
    CAPTURE(d);
    for (auto method : {InverseMethod::table, InverseMethod::bsgs}) {
      auto enc = encrypt(parse_structure(d), 7);
      const RecognitionResult r =
          recognize_field(enc.box, field_of(enc.oracle)->spec(), 0, method);
      CHECK(r.method() == method);
      check_isomorphism(r, enc.oracle);
      for (Index a = 0; a < r.field().order(); ++a) {
        CHECK(r.alpha(r.beta(a)) == a);
        CHECK(r.alpha(enc.oracle.encrypt(a)) ==
              *r.try_alpha(enc.oracle.encrypt(a)));
      }
      CHECK(r.cost().sample_calls == r.samples_used());
      CHECK(r.samples_used() <= 8 * r.field().degree());
    }
  }
}

TEST_CASE("recognition against a different modulus") {
  // The box uses the first irreducible; the caller asks for another one.
  auto enc = encrypt(make_field(FieldSpec::make(3, 2)), 8);
  const FieldSpec other = FieldSpec::parse("f:3^2/x^2+x+2");
  const RecognitionResult r = recognize_field(enc.box, other);
  CHECK(r.field().spec().modulus == other.modulus);
  check_isomorphism(r, enc.oracle);
}

TEST_CASE("alpha rejects strings outside the field") {
  auto enc = encrypt(parse_structure("f:5^2"), 9);
  const RecognitionResult r = recognize_field(enc.box, FieldSpec::make(5, 2));
  // Lengths are fixed, so flip bits until we leave the codebook.
  CryptoElement junk = CryptoElement::from_uint(0, enc.box->byte_length());
  std::uint64_t v = 0;
  while (r.try_alpha(junk).has_value()) {
    junk = CryptoElement::from_uint(++v, enc.box->byte_length());
  }
  CHECK_THROWS_AS(r.alpha(junk), ArgumentError);
}

TEST_CASE("recognition failures") {
  auto f9 = encrypt(parse_structure("f:3^2"), 10);
  // Only the prime subfield is ever sampled.
  auto wrapped = std::make_shared<test::WrappedBox>(
      f9.box, [&] { return f9.oracle.encrypt(1); });
  CHECK_THROWS_AS(recognize_field(wrapped, FieldSpec::make(3, 2)), DegenerateSamplerError);

  CHECK_THROWS_AS(recognize_field(f9.box, FieldSpec::make(5, 2)),
                  CharacteristicMismatchError);
  auto f81 = encrypt(parse_structure("f:3^4"), 10);
  CHECK_THROWS_AS(recognize_field(f81.box, FieldSpec::make(3, 2)), ContractViolationError);
  // No element of F_9 has degree 4.
  CHECK_THROWS_AS(recognize_field(f9.box, FieldSpec::make(3, 4)), DegenerateSamplerError);
  auto z5 = encrypt(make_cyclic_group(5), 10);
  CHECK_THROWS_AS(recognize_field(z5.box, FieldSpec::make(5, 1)), SignatureError);
}

TEST_CASE("the retry budget absorbs subfield samples") {
  // Every other sample lies in F_3.
  auto f81 = encrypt(parse_structure("f:3^4"), 11);
  int calls = 0;
  auto wrapped = std::make_shared<test::WrappedBox>(f81.box, [&] {
    return (calls++ % 2 == 0) ? f81.oracle.encrypt(2) : f81.box->sample();
  });
  const RecognitionResult r = recognize_field(wrapped, FieldSpec::make(3, 4));
  CHECK(r.samples_used() >= 2);
  CHECK(wrapped->samples_seen == r.samples_used());
  check_isomorphism(r, f81.oracle);
}

TEST_CASE("beta o alpha is the identity on codewords") {
  auto enc = encrypt(parse_structure("f:5^3"), 12);
  const RecognitionResult r = recognize_field(enc.box, field_of(enc.oracle)->spec());
  for (Index a = 0; a < r.field().order(); ++a) {
    const CryptoElement c = enc.oracle.encrypt(a);
    CHECK(r.beta(r.alpha(c)) == c);
  }
}

TEST_CASE("beta is a ring map on sampled pairs of a larger field") {
  for (const char* d : {"f:2^10", "f:3^7"}) {
    CAPTURE(d);
    auto enc = encrypt(parse_structure(d), 13);
    const RecognitionResult r = recognize_field(enc.box, field_of(enc.oracle)->spec());
    const FiniteField& f = r.field();
    BlackBoxStructure& k = *enc.box;
    std::mt19937_64 rng(13);
    for (int i = 0; i < 10000; ++i) {
      const Index a = rng() % f.order(), b = rng() % f.order();
      REQUIRE(k.equal(r.beta(f.add(a, b)), k.apply(Op::add, r.beta(a), r.beta(b))));
      REQUIRE(k.equal(r.beta(f.mul(a, b)), k.apply(Op::mul, r.beta(a), r.beta(b))));
    }
  }
}
