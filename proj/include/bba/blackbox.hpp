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

// Oracle contract of a black-box algebraic structure.
//
// A box hides a finite structure behind fixed-length strings. It exposes three
// oracles and nothing else:
//
//   sample()          random (almost) uniform element
//   apply(op, args)   the structure's operations on strings
//   equal(x, y)       whether two strings name the same hidden element
//
// Every oracle call is tallied in per-instance counters so that algorithms
// built on top can report their query cost.

#ifndef BBA_BLACKBOX_HPP_
#define BBA_BLACKBOX_HPP_

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bba/errors.hpp"
#include "bba/random.hpp"

namespace bba {

// Opaque string naming an element of a hidden structure. operator== compares
// raw bits only; semantic equality must go through the owning box.
class CryptoElement {
 public:
  CryptoElement() = default;
  explicit CryptoElement(std::vector<std::uint8_t> bytes)
      : bytes_(std::move(bytes)) {}

  std::span<const std::uint8_t> bytes() const { return bytes_; }
  std::size_t byte_length() const { return bytes_.size(); }
  std::size_t bit_length() const { return bytes_.size() * 8; }
  std::string hex() const;

  // Big-endian packing of an integer into a fixed number of bytes.
  static CryptoElement from_uint(std::uint64_t value, std::size_t bytes);
  std::uint64_t to_uint() const;

  // Concatenation and splitting, used by product boxes.
  static CryptoElement concat(const CryptoElement& a, const CryptoElement& b);
  CryptoElement slice(std::size_t offset, std::size_t length) const;

  friend bool operator==(const CryptoElement&, const CryptoElement&) = default;

 private:
  std::vector<std::uint8_t> bytes_;
};

struct CryptoElementHash {
  std::size_t operator()(const CryptoElement& x) const noexcept;
};

enum class StructureKind { group, ring, field };

enum class Op { product, inverse, identity, add, neg, zero, mul, inv, one };

std::string_view to_string(Op op);
std::string_view to_string(StructureKind kind);

struct OperationSpec {
  Op op;
  int arity;
  bool partial = false;  // undefined at some points (field inverse at zero)
};

class StructureSignature {
 public:
  static StructureSignature group();
  static StructureSignature field();

  StructureKind kind() const { return kind_; }
  const std::vector<OperationSpec>& operations() const { return ops_; }
  const OperationSpec* find(Op op) const;
  bool declares(Op op) const { return find(op) != nullptr; }

  friend bool operator==(const StructureSignature& a,
                         const StructureSignature& b) {
    return a.kind_ == b.kind_;
  }

 private:
  StructureSignature(StructureKind kind, std::vector<OperationSpec> ops)
      : kind_(kind), ops_(std::move(ops)) {}

  StructureKind kind_;
  std::vector<OperationSpec> ops_;
};

struct QueryCounters {
  std::uint64_t sample_calls = 0;
  std::uint64_t apply_calls = 0;
  std::uint64_t equal_calls = 0;

  QueryCounters operator-(const QueryCounters& o) const {
    return {sample_calls - o.sample_calls, apply_calls - o.apply_calls,
            equal_calls - o.equal_calls};
  }
  QueryCounters operator+(const QueryCounters& o) const {
    return {sample_calls + o.sample_calls, apply_calls + o.apply_calls,
            equal_calls + o.equal_calls};
  }
  friend bool operator==(const QueryCounters&, const QueryCounters&) = default;
};

struct QueryBudgetReport {
  std::uint64_t sample_calls = 0;
  std::uint64_t apply_calls = 0;
  std::uint64_t equal_calls = 0;
  double wall_time_s = 0.0;
};

class BlackBoxStructure {
 public:
  virtual ~BlackBoxStructure() = default;
  BlackBoxStructure(const BlackBoxStructure&) = delete;
  BlackBoxStructure& operator=(const BlackBoxStructure&) = delete;

  const StructureSignature& signature() const { return signature_; }
  StructureKind kind() const { return signature_.kind(); }

  // l(X) in bits; always a whole number of bytes.
  std::size_t string_length() const { return byte_length_ * 8; }
  std::size_t byte_length() const { return byte_length_; }

  CryptoElement sample();
  CryptoElement apply(Op op, std::span<const CryptoElement* const> args);
  CryptoElement apply(Op op);
  CryptoElement apply(Op op, const CryptoElement& x);
  CryptoElement apply(Op op, const CryptoElement& x, const CryptoElement& y);
  bool equal(const CryptoElement& x, const CryptoElement& y);

  const QueryCounters& counters() const { return counters_; }

  // Every box built here decides equality exactly.
  double equality_error_probability() const { return 0.0; }

  // True when equal(x, y) holds exactly when the raw bits agree. Lets
  // lookups hash codewords instead of scanning.
  virtual bool bitwise_equality() const = 0;

  // Where samples come from ("uniform codebook", "product replacement", ...).
  virtual std::string sampler_provenance() const = 0;

  // Independent instance over the same hidden structure with a fresh sampler.
  virtual std::shared_ptr<BlackBoxStructure> clone(std::uint64_t seed) const = 0;

  std::uint64_t seed() const { return seed_; }

 protected:
  BlackBoxStructure(StructureSignature signature, std::size_t byte_length,
                    std::uint64_t seed);

  virtual CryptoElement do_sample() = 0;
  virtual CryptoElement do_apply(Op op,
                                 std::span<const CryptoElement* const> args) = 0;
  virtual bool do_equal(const CryptoElement& x, const CryptoElement& y) = 0;

  Rng& rng() { return rng_; }

 private:
  StructureSignature signature_;
  std::size_t byte_length_;
  std::uint64_t seed_;
  Rng rng_;
  QueryCounters counters_;
};

using BoxPtr = std::shared_ptr<BlackBoxStructure>;

// Measures oracle traffic and wall time on one box between construction and
// report().
class BudgetMeter {
 public:
  explicit BudgetMeter(const BlackBoxStructure& box);
  QueryBudgetReport report() const;

 private:
  const BlackBoxStructure* box_;
  QueryCounters start_;
  std::chrono::steady_clock::time_point t0_;
};

// Which group structure of a box an algorithm works in. `automatic` is the
// group itself for group boxes and the multiplicative group for fields.
enum class Reduct { automatic, additive, multiplicative };

struct ReductOps {
  Op product;
  Op inverse;
  Op identity;
};

ReductOps reduct_ops(const StructureSignature& signature, Reduct reduct);

// Evaluates a nullary operation (identity, zero, one).
CryptoElement identity_element(BlackBoxStructure& box, Op constant);
CryptoElement identity_element(BlackBoxStructure& box,
                               Reduct reduct = Reduct::automatic);

// x composed with itself n times by square-and-multiply; negative n goes
// through the inverse. O(log |n|) apply calls.
CryptoElement power(BlackBoxStructure& box, const CryptoElement& x,
                    std::int64_t n, Reduct reduct = Reduct::automatic);

// Smallest m >= 1 with x^m = identity, given bound >= order.
std::uint64_t element_order(BlackBoxStructure& box, const CryptoElement& x,
                            std::uint64_t bound,
                            Reduct reduct = Reduct::automatic);

// Deduplicating list of elements of one box. Lookups hash raw bits when the
// box has bitwise equality (each hit is still confirmed by the oracle) and
// scan with the equality oracle otherwise. The box must outlive the index.
class ElementIndex {
 public:
  explicit ElementIndex(BlackBoxStructure& box) : box_(&box) {}

  std::optional<std::size_t> find(const CryptoElement& x) const;
  // Returns (index, inserted).
  std::pair<std::size_t, bool> insert(const CryptoElement& x);

  std::size_t size() const { return elements_.size(); }
  const CryptoElement& operator[](std::size_t i) const { return elements_[i]; }
  const std::vector<CryptoElement>& elements() const { return elements_; }
  BlackBoxStructure& box() const { return *box_; }

 private:
  BlackBoxStructure* box_;
  std::vector<CryptoElement> elements_;
  std::unordered_map<CryptoElement, std::size_t, CryptoElementHash> by_bits_;
};

// Breadth-first closure of gens (identity first). Throws CapExceededError with
// the partial list (cap + 1 distinct elements) once the cap is passed.
ElementIndex close_under(BlackBoxStructure& box,
                         std::span<const CryptoElement> gens, std::size_t cap,
                         Reduct reduct = Reduct::automatic);

std::vector<CryptoElement> enumerate_closure(
    BlackBoxStructure& box, std::span<const CryptoElement> gens,
    std::size_t cap, Reduct reduct = Reduct::automatic);

// A fully enumerated group seen through its box: elements are numbered and
// products are looked up (memoized) by index.
class EnumeratedGroup {
 public:
  EnumeratedGroup(BoxPtr box, ElementIndex elements,
                  Reduct reduct = Reduct::automatic);

  std::size_t size() const { return index_.size(); }
  const CryptoElement& element(std::size_t i) const { return index_[i]; }
  std::optional<std::size_t> index_of(const CryptoElement& x) const {
    return index_.find(x);
  }
  std::size_t identity() const { return identity_; }
  std::size_t product(std::size_t i, std::size_t j);
  std::size_t inverse(std::size_t i);
  std::size_t order(std::size_t i);
  BlackBoxStructure& box() const { return *box_; }

 private:
  std::size_t lookup(const CryptoElement& x) const;

  BoxPtr box_;
  ElementIndex index_;
  ReductOps ops_;
  std::size_t identity_ = 0;
  std::vector<std::int32_t> table_;  // size()^2 entries, -1 = unknown
  std::unordered_map<std::uint64_t, std::size_t> sparse_;
  std::vector<std::int32_t> inverse_;
  std::vector<std::uint32_t> order_;
};

// Prime factorization by trial division (distinct primes, ascending).
std::vector<std::uint64_t> prime_factors(std::uint64_t n);

}  // namespace bba

template <>
struct std::hash<bba::CryptoElement> : bba::CryptoElementHash {};

#endif  // BBA_BLACKBOX_HPP_
