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

// Concrete finite structures with elements numbered 0..order()-1, and the
// deterministic encryption wrapper that hides one of them behind a box.

#ifndef BBA_EXPLICIT_HPP_
#define BBA_EXPLICIT_HPP_

#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bba/blackbox.hpp"

namespace bba {

using Index = std::uint32_t;

// Structures larger than this are not enumerated.
inline constexpr std::size_t kEnumerationCap = 100000;

class ExplicitStructure {
 public:
  virtual ~ExplicitStructure() = default;

  const StructureSignature& signature() const { return signature_; }
  StructureKind kind() const { return signature_.kind(); }

  virtual std::size_t order() const = 0;
  virtual Index apply(Op op, std::span<const Index> args) const = 0;
  virtual std::string name() const = 0;
  virtual std::string element_name(Index a) const;

  // A small generating set. Fields return the generator of the extension
  // over the prime field.
  const std::vector<Index>& generators() const;

  Index constant(Op op) const { return apply(op, {}); }
  Index unary(Op op, Index a) const;
  Index binary(Op op, Index a, Index b) const;

  // Group conveniences (the group operation for group structures).
  Index identity() const { return constant(Op::identity); }
  Index product(Index a, Index b) const { return binary(Op::product, a, b); }
  Index inverse(Index a) const { return unary(Op::inverse, a); }
  std::uint64_t element_order(Index a) const;

 protected:
  explicit ExplicitStructure(StructureSignature signature)
      : signature_(std::move(signature)) {}

  // Default: a cyclic generator if one exists, else the first generating
  // pair among elements of largest order, else a greedy set.
  virtual std::vector<Index> compute_generators() const;

 private:
  StructureSignature signature_;
  mutable std::once_flag generators_once_;
  mutable std::vector<Index> generators_;
};

using ExplicitPtr = std::shared_ptr<const ExplicitStructure>;

// Order of the subgroup generated by gens (exhaustive, index arithmetic).
std::size_t subgroup_order(const ExplicitStructure& group,
                           std::span<const Index> gens);

// Polynomials over Z/pZ, coefficient lists from low to high degree.
namespace poly {

using Poly = std::vector<std::uint32_t>;

void trim(Poly& a);
Poly rem(Poly a, const Poly& m, std::uint32_t p);
Poly mul(const Poly& a, const Poly& b, std::uint32_t p);
bool is_irreducible(const Poly& m, std::uint32_t p);
// First monic irreducible of degree n in enumeration order of the lower
// coefficients read as a base-p number.
Poly first_irreducible(std::uint32_t p, std::uint32_t n);
// Accepts forms like "x^4+x+2", "x^2 + 2*x - 1", "3".
Poly parse(std::string_view text, std::uint32_t p);
std::string format(const Poly& a);

}  // namespace poly

bool is_prime(std::uint64_t n);

struct FieldSpec {
  std::uint32_t p = 2;
  std::uint32_t n = 1;
  poly::Poly modulus;  // monic, degree n

  std::uint64_t order() const;
  std::string to_string() const;  // "f:3^2/x^2+1"

  // Validates p prime, n >= 1 and modulus monic irreducible of degree n; an
  // empty modulus selects poly::first_irreducible.
  static FieldSpec make(std::uint32_t p, std::uint32_t n, poly::Poly modulus = {});
  // "f:p^n[/modulus]" or "f:p".
  static FieldSpec parse(std::string_view text);
};

// F_{p^n} as F_p[x]/(modulus). Element index = sum of c_i p^i.
class FiniteField final : public ExplicitStructure {
 public:
  explicit FiniteField(FieldSpec spec);

  const FieldSpec& spec() const { return spec_; }
  std::uint32_t characteristic() const { return spec_.p; }
  std::uint32_t degree() const { return spec_.n; }
  std::size_t order() const override { return order_; }
  Index apply(Op op, std::span<const Index> args) const override;
  std::string name() const override;
  std::string element_name(Index a) const override;

  Index zero() const { return 0; }
  Index one() const { return 1; }
  Index add(Index a, Index b) const;
  Index neg(Index a) const;
  Index sub(Index a, Index b) const { return add(a, neg(b)); }
  Index mul(Index a, Index b) const;
  Index inv(Index a) const;
  Index pow(Index a, std::uint64_t e) const;

  // m mod p as an element of the prime subfield.
  Index embed(std::uint64_t m) const { return static_cast<Index>(m % spec_.p); }
  Index from_coefficients(std::span<const std::uint32_t> c) const;
  poly::Poly coefficients(Index a) const;
  // The class of x.
  Index generator() const { return spec_.n == 1 ? 1 : spec_.p; }
  // a -> a^(p^k)
  Index frobenius(Index a, std::uint32_t k) const;
  // Evaluates a polynomial with prime-field coefficients at `at`.
  Index evaluate(const poly::Poly& f, Index at) const;
  Index primitive_element() const { return primitive_; }

 protected:
  std::vector<Index> compute_generators() const override;

 private:
  Index slow_mul(Index a, Index b) const;

  FieldSpec spec_;
  std::size_t order_;
  Index primitive_ = 1;
  std::vector<Index> exp_;   // exp_[i] = g^i
  std::vector<Index> log_;   // log_[g^i] = i, log_[0] unused
};

class CyclicGroup final : public ExplicitStructure {
 public:
  explicit CyclicGroup(std::uint64_t n);
  std::size_t order() const override { return n_; }
  Index apply(Op op, std::span<const Index> args) const override;
  std::string name() const override;

 private:
  std::uint64_t n_;
};

// (Z/nZ)^* ; element i is the i-th unit in increasing order.
class UnitGroup final : public ExplicitStructure {
 public:
  explicit UnitGroup(std::uint64_t n);
  std::size_t order() const override { return units_.size(); }
  Index apply(Op op, std::span<const Index> args) const override;
  std::string name() const override;
  std::string element_name(Index a) const override;
  std::uint64_t residue(Index a) const { return units_[a]; }
  Index index_of_residue(std::uint64_t r) const;

 private:
  std::uint64_t n_;
  std::vector<std::uint64_t> units_;
  std::vector<std::int64_t> position_;
  std::vector<Index> inverse_;
};

// Permutation group on {0..degree-1} given by generators. Products compose
// left to right: (a*b)(i) = b(a(i)).
class PermutationGroup final : public ExplicitStructure {
 public:
  using Perm = std::vector<std::uint8_t>;

  PermutationGroup(std::uint32_t degree, std::vector<Perm> gens, std::string name);

  static std::shared_ptr<PermutationGroup> symmetric(std::uint32_t n);
  static std::shared_ptr<PermutationGroup> alternating(std::uint32_t n);
  // Symmetries of the regular k-gon, order 2k.
  static std::shared_ptr<PermutationGroup> dihedral(std::uint32_t k);
  // 1-based cycle notation, e.g. "(1 2)(3 4)"; degree fixes the size.
  static Perm parse_cycles(std::string_view cycles, std::uint32_t degree);

  std::size_t order() const override { return perms_.size(); }
  Index apply(Op op, std::span<const Index> args) const override;
  std::string name() const override { return name_; }
  std::string element_name(Index a) const override;

  const Perm& perm(Index a) const { return perms_[a]; }
  Index index_of(const Perm& p) const;

 protected:
  std::vector<Index> compute_generators() const override { return gen_index_; }

 private:
  std::uint64_t key(const Perm& p) const;

  std::uint32_t degree_;
  std::string name_;
  std::vector<Perm> perms_;
  std::unordered_map<std::uint64_t, Index> by_key_;
  std::vector<Index> gen_index_;
  std::vector<Index> inverse_;
  std::vector<Index> table_;
};

enum class MatrixFamily { GL, SL, PGL };

// Enumerated GL/SL/PGL of dimension dim over F_q. PGL elements are matrices
// whose first nonzero entry is 1.
class MatrixGroup final : public ExplicitStructure {
 public:
  MatrixGroup(MatrixFamily family, std::uint32_t dim, FieldSpec spec,
              std::size_t cap = kEnumerationCap);

  // Group order from the closed formula.
  static std::uint64_t formula_order(MatrixFamily family, std::uint32_t dim,
                                     std::uint64_t q);

  std::size_t order() const override { return matrices_.size(); }
  Index apply(Op op, std::span<const Index> args) const override;
  std::string name() const override;
  std::string element_name(Index a) const override;

  const std::vector<Index>& matrix(Index a) const { return matrices_[a]; }
  Index index_of(const std::vector<Index>& m) const;
  const FiniteField& field() const { return field_; }

 private:
  std::vector<Index> multiply(const std::vector<Index>& a,
                              const std::vector<Index>& b) const;
  std::vector<Index> invert(const std::vector<Index>& a) const;
  Index determinant(std::vector<Index> a) const;
  void normalize(std::vector<Index>& a) const;
  std::uint64_t key(const std::vector<Index>& m) const;

  MatrixFamily family_;
  std::uint32_t dim_;
  FiniteField field_;
  std::vector<std::vector<Index>> matrices_;
  std::unordered_map<std::uint64_t, Index> by_key_;
  std::vector<Index> inverse_;
};

class DirectProductGroup final : public ExplicitStructure {
 public:
  DirectProductGroup(ExplicitPtr a, ExplicitPtr b);
  std::size_t order() const override { return a_->order() * b_->order(); }
  Index apply(Op op, std::span<const Index> args) const override;
  std::string name() const override;
  std::string element_name(Index x) const override;

 private:
  ExplicitPtr a_, b_;
};

ExplicitPtr make_cyclic_group(std::uint64_t n);
ExplicitPtr make_unit_group(std::uint64_t n);
std::shared_ptr<const FiniteField> make_field(const FieldSpec& spec);
ExplicitPtr make_matrix_group(MatrixFamily family, std::uint32_t dim,
                              const FieldSpec& spec,
                              std::size_t cap = kEnumerationCap);

// Structure descriptors: f:p^n[/modulus], z:n, units:n, s:n, a:n, d:k,
// (gl|sl|pgl)<dim>-<q>, and products joined by '*'. ':' and '-' are
// interchangeable after z/units/s/a/d. Throws UsageError with suggestions.
ExplicitPtr parse_structure(std::string_view descriptor);

// Exhaustively checks the signature's laws (intended for order <= 10^4).
// Returns an empty string on success, else a description of the failure.
std::string check_laws(const ExplicitStructure& s);

// Shared state between an encrypted box and its hidden oracle.
struct Codebook {
  ExplicitPtr plain;
  std::size_t masked_bits = 0;
  std::size_t bytes = 1;
  std::vector<std::uint64_t> codeword;
  std::unordered_map<std::uint64_t, Index> decode;
};

// A box over E(A). sample is exactly uniform, apply conjugates the plain
// operations by E, equal compares codewords.
class EncryptedBox final : public BlackBoxStructure {
 public:
  EncryptedBox(std::shared_ptr<const Codebook> book, std::uint64_t seed);

  bool bitwise_equality() const override { return true; }
  std::string sampler_provenance() const override;
  BoxPtr clone(std::uint64_t seed) const override;
  std::size_t masked_bits() const { return book_->masked_bits; }

 protected:
  CryptoElement do_sample() override;
  CryptoElement do_apply(Op op,
                         std::span<const CryptoElement* const> args) override;
  bool do_equal(const CryptoElement& x, const CryptoElement& y) override;

 private:
  Index decode(const CryptoElement& x) const;
  CryptoElement encode(Index a) const;

  std::shared_ptr<const Codebook> book_;
};

// Retains E and E^-1 for test and verification code. Attack code receives
// only the box.
class EncryptionOracle {
 public:
  explicit EncryptionOracle(std::shared_ptr<const Codebook> book);

  const ExplicitStructure& plain() const { return *book_->plain; }
  ExplicitPtr plain_ptr() const { return book_->plain; }
  CryptoElement encrypt(Index a) const;
  // The hidden inverse. Every call is counted.
  Index decrypt_hidden(const CryptoElement& x) const;
  std::uint64_t hidden_inverse_calls() const { return *inverse_calls_; }

 private:
  std::shared_ptr<const Codebook> book_;
  std::shared_ptr<std::uint64_t> inverse_calls_;
};

struct Encryption {
  BoxPtr box;
  EncryptionOracle oracle;
};

// E maps element i to a random distinct codeword of 2*ceil(log2 |A|) bits.
Encryption encrypt(ExplicitPtr plain, std::uint64_t seed);

// Unmasked box: codeword of element i is i itself.
BoxPtr plain_box(ExplicitPtr plain, std::uint64_t seed);

}  // namespace bba

#endif  // BBA_EXPLICIT_HPP_
