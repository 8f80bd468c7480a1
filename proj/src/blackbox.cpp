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

#include "bba/blackbox.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <limits>

namespace bba {

CapExceededError::CapExceededError(const std::string& what,
                                   std::vector<CryptoElement> partial)
    : Error(what), partial_(std::move(partial)) {}

std::string CryptoElement::hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes_.size() * 2);
  for (std::uint8_t b : bytes_) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xf]);
  }
  return out;
}

CryptoElement CryptoElement::from_uint(std::uint64_t value, std::size_t bytes) {
  std::vector<std::uint8_t> out(bytes, 0);
  for (std::size_t i = 0; i < bytes && i < 8; ++i) {
    out[bytes - 1 - i] = static_cast<std::uint8_t>(value >> (8 * i));
  }
  return CryptoElement(std::move(out));
}

std::uint64_t CryptoElement::to_uint() const {
  if (bytes_.size() > 8) {
    throw ArgumentError("cryptoelement wider than 64 bits");
  }
  std::uint64_t v = 0;
  for (std::uint8_t b : bytes_) v = (v << 8) | b;
  return v;
}

CryptoElement CryptoElement::concat(const CryptoElement& a,
                                    const CryptoElement& b) {
  std::vector<std::uint8_t> out;
  out.reserve(a.bytes_.size() + b.bytes_.size());
  out.insert(out.end(), a.bytes_.begin(), a.bytes_.end());
  out.insert(out.end(), b.bytes_.begin(), b.bytes_.end());
  return CryptoElement(std::move(out));
}

CryptoElement CryptoElement::slice(std::size_t offset,
                                   std::size_t length) const {
  if (offset + length > bytes_.size()) {
    throw ArgumentError("cryptoelement slice out of range");
  }
  return CryptoElement(std::vector<std::uint8_t>(
      bytes_.begin() + static_cast<std::ptrdiff_t>(offset),
      bytes_.begin() + static_cast<std::ptrdiff_t>(offset + length)));
}

std::size_t CryptoElementHash::operator()(
    const CryptoElement& x) const noexcept {
  // FNV-1a
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::uint8_t b : x.bytes()) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return static_cast<std::size_t>(h);
}

std::string_view to_string(Op op) {
  switch (op) {
    case Op::product: return "product";
    case Op::inverse: return "inverse";
    case Op::identity: return "identity";
    case Op::add: return "add";
    case Op::neg: return "neg";
    case Op::zero: return "zero";
    case Op::mul: return "mul";
    case Op::inv: return "inv";
    case Op::one: return "one";
  }
  return "?";
}

std::string_view to_string(StructureKind kind) {
  switch (kind) {
    case StructureKind::group: return "group";
    case StructureKind::ring: return "ring";
    case StructureKind::field: return "field";
  }
  return "?";
}

StructureSignature StructureSignature::group() {
  return StructureSignature(StructureKind::group,
                            {{Op::product, 2}, {Op::inverse, 1}, {Op::identity, 0}});
}

StructureSignature StructureSignature::field() {
  return StructureSignature(StructureKind::field,
                            {{Op::add, 2},
                             {Op::neg, 1},
                             {Op::zero, 0},
                             {Op::mul, 2},
                             {Op::inv, 1, true},
                             {Op::one, 0}});
}

const OperationSpec* StructureSignature::find(Op op) const {
  for (const auto& spec : ops_) {
    if (spec.op == op) return &spec;
  }
  return nullptr;
}

BlackBoxStructure::BlackBoxStructure(StructureSignature signature,
                                     std::size_t byte_length,
                                     std::uint64_t seed)
    : signature_(std::move(signature)),
      byte_length_(byte_length),
      seed_(seed),
      rng_(seed) {}

CryptoElement BlackBoxStructure::sample() {
  ++counters_.sample_calls;
  return do_sample();
}

CryptoElement BlackBoxStructure::apply(
    Op op, std::span<const CryptoElement* const> args) {
  const OperationSpec* spec = signature_.find(op);
  if (spec == nullptr) {
    throw SignatureError(std::string(to_string(kind())) +
                         " box does not declare operation " +
                         std::string(to_string(op)));
  }
  if (static_cast<int>(args.size()) != spec->arity) {
    throw ArgumentError("operation " + std::string(to_string(op)) +
                        " expects " + std::to_string(spec->arity) +
                        " arguments, got " + std::to_string(args.size()));
  }
  for (const CryptoElement* a : args) {
    if (a->byte_length() != byte_length_) {
      throw ArgumentError("cryptoelement of length " +
                          std::to_string(a->bit_length()) +
                          " bits passed to a box of length " +
                          std::to_string(string_length()));
    }
  }
  ++counters_.apply_calls;
  return do_apply(op, args);
}

CryptoElement BlackBoxStructure::apply(Op op) {
  return apply(op, std::span<const CryptoElement* const>{});
}

CryptoElement BlackBoxStructure::apply(Op op, const CryptoElement& x) {
  const std::array<const CryptoElement*, 1> args{&x};
  return apply(op, args);
}

CryptoElement BlackBoxStructure::apply(Op op, const CryptoElement& x,
                                       const CryptoElement& y) {
  const std::array<const CryptoElement*, 2> args{&x, &y};
  return apply(op, args);
}

bool BlackBoxStructure::equal(const CryptoElement& x, const CryptoElement& y) {
  ++counters_.equal_calls;
  return do_equal(x, y);
}

BudgetMeter::BudgetMeter(const BlackBoxStructure& box)
    : box_(&box),
      start_(box.counters()),
      t0_(std::chrono::steady_clock::now()) {}

QueryBudgetReport BudgetMeter::report() const {
  const QueryCounters d = box_->counters() - start_;
  const std::chrono::duration<double> dt =
      std::chrono::steady_clock::now() - t0_;
  return {d.sample_calls, d.apply_calls, d.equal_calls, dt.count()};
}

ReductOps reduct_ops(const StructureSignature& signature, Reduct reduct) {
  if (signature.kind() == StructureKind::group) {
    if (reduct == Reduct::additive) {
      throw SignatureError("group boxes have no additive reduct");
    }
    return {Op::product, Op::inverse, Op::identity};
  }
  if (reduct == Reduct::additive) return {Op::add, Op::neg, Op::zero};
  return {Op::mul, Op::inv, Op::one};
}

CryptoElement identity_element(BlackBoxStructure& box, Op constant) {
  const OperationSpec* spec = box.signature().find(constant);
  if (spec == nullptr || spec->arity != 0) {
    throw SignatureError("signature lacks the constant " +
                         std::string(to_string(constant)));
  }
  return box.apply(constant);
}

CryptoElement identity_element(BlackBoxStructure& box, Reduct reduct) {
  return identity_element(box, reduct_ops(box.signature(), reduct).identity);
}

CryptoElement power(BlackBoxStructure& box, const CryptoElement& x,
                    std::int64_t n, Reduct reduct) {
  const ReductOps ops = reduct_ops(box.signature(), reduct);
  CryptoElement result = box.apply(ops.identity);
  if (n == 0) return result;
  CryptoElement base = n < 0 ? box.apply(ops.inverse, x) : x;
  // |INT64_MIN| does not fit in int64.
  std::uint64_t e = n < 0 ? ~static_cast<std::uint64_t>(n) + 1
                          : static_cast<std::uint64_t>(n);
  bool first = true;
  while (e != 0) {
    if (e & 1) {
      result = first ? base : box.apply(ops.product, result, base);
      first = false;
    }
    e >>= 1;
    if (e != 0) base = box.apply(ops.product, base, base);
  }
  return result;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

namespace {

// Trial division is fine up to this bound; beyond it element_order scans.
constexpr std::uint64_t kFactorBudget = std::uint64_t{1} << 40;

}  // namespace

std::uint64_t element_order(BlackBoxStructure& box, const CryptoElement& x,
                            std::uint64_t bound, Reduct reduct) {
  if (bound == 0) throw ArgumentError("element_order bound must be >= 1");
  const ReductOps ops = reduct_ops(box.signature(), reduct);
  const CryptoElement e = box.apply(ops.identity);
  if (bound <= kFactorBudget &&
      bound <= static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
    const auto as_exp = [](std::uint64_t m) { return static_cast<std::int64_t>(m); };
    if (box.equal(power(box, x, as_exp(bound), reduct), e)) {
      std::uint64_t m = bound;
      for (std::uint64_t p : prime_factors(bound)) {
        while (m % p == 0 && box.equal(power(box, x, as_exp(m / p), reduct), e)) {
          m /= p;
        }
      }
      return m;
    }
  }
  // The order does not divide bound (or bound is too large to factor).
  CryptoElement acc = x;
  for (std::uint64_t m = 1; m <= bound; ++m) {
    if (box.equal(acc, e)) return m;
    if (m < bound) acc = box.apply(ops.product, acc, x);
  }
  throw BoundExceededError("element order exceeds bound " +
                           std::to_string(bound));
}

std::optional<std::size_t> ElementIndex::find(const CryptoElement& x) const {
  if (box_->bitwise_equality()) {
    auto it = by_bits_.find(x);
    if (it == by_bits_.end()) return std::nullopt;
    if (box_->equal(elements_[it->second], x)) return it->second;
    return std::nullopt;
  }
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    if (box_->equal(elements_[i], x)) return i;
  }
  return std::nullopt;
}

std::pair<std::size_t, bool> ElementIndex::insert(const CryptoElement& x) {
  if (auto i = find(x)) return {*i, false};
  elements_.push_back(x);
  if (box_->bitwise_equality()) by_bits_.emplace(x, elements_.size() - 1);
  return {elements_.size() - 1, true};
}

ElementIndex close_under(BlackBoxStructure& box,
                         std::span<const CryptoElement> gens, std::size_t cap,
                         Reduct reduct) {
  const ReductOps ops = reduct_ops(box.signature(), reduct);
  ElementIndex index(box);
  const auto overflow = [&] {
    throw CapExceededError(
        "closure exceeds cap of " + std::to_string(cap) + " elements",
        index.elements());
  };
  index.insert(box.apply(ops.identity));
  for (const auto& g : gens) {
    index.insert(g);
    if (index.size() > cap) overflow();
  }
  // Right multiplication by generators reaches the whole (finite) subgroup.
  for (std::size_t i = 0; i < index.size(); ++i) {
    for (const auto& g : gens) {
      CryptoElement next = box.apply(ops.product, index[i], g);
      if (index.insert(next).second && index.size() > cap) overflow();
    }
  }
  return index;
}

std::vector<CryptoElement> enumerate_closure(BlackBoxStructure& box,
                                             std::span<const CryptoElement> gens,
                                             std::size_t cap, Reduct reduct) {
  return close_under(box, gens, cap, reduct).elements();
}

namespace {

constexpr std::size_t kDenseTableLimit = 4096;

}  // namespace

EnumeratedGroup::EnumeratedGroup(BoxPtr box, ElementIndex elements,
                                 Reduct reduct)
    : box_(std::move(box)),
      index_(std::move(elements)),
      ops_(reduct_ops(box_->signature(), reduct)) {
  identity_ = lookup(box_->apply(ops_.identity));
  if (size() <= kDenseTableLimit) table_.assign(size() * size(), -1);
  inverse_.assign(size(), -1);
  order_.assign(size(), 0);
}

std::size_t EnumeratedGroup::lookup(const CryptoElement& x) const {
  auto i = index_.find(x);
  if (!i) {
    throw ContractViolationError(
        "product left the enumerated element set (not closed)");
  }
  return *i;
}

std::size_t EnumeratedGroup::product(std::size_t i, std::size_t j) {
  const std::size_t n = size();
  if (!table_.empty()) {
    std::int32_t& slot = table_[i * n + j];
    if (slot < 0) {
      slot = static_cast<std::int32_t>(
          lookup(box_->apply(ops_.product, index_[i], index_[j])));
    }
    return static_cast<std::size_t>(slot);
  }
  const std::uint64_t key = static_cast<std::uint64_t>(i) * n + j;
  auto it = sparse_.find(key);
  if (it != sparse_.end()) return it->second;
  const std::size_t k = lookup(box_->apply(ops_.product, index_[i], index_[j]));
  sparse_.emplace(key, k);
  return k;
}

std::size_t EnumeratedGroup::inverse(std::size_t i) {
  if (inverse_[i] < 0) {
    inverse_[i] = static_cast<std::int32_t>(
        lookup(box_->apply(ops_.inverse, index_[i])));
  }
  return static_cast<std::size_t>(inverse_[i]);
}

std::size_t EnumeratedGroup::order(std::size_t i) {
  if (order_[i] == 0) {
    std::uint32_t m = 1;
    for (std::size_t acc = i; acc != identity_; acc = product(acc, i)) ++m;
    order_[i] = m;
  }
  return order_[i];
}

}  // namespace bba
