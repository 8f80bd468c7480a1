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

#include "bba/explicit.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <numeric>
#include <regex>
#include <sstream>
#include <unordered_set>

namespace bba {

namespace {

std::uint64_t ipow(std::uint64_t b, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

unsigned ceil_log2(std::uint64_t n) {
  unsigned bits = 0;
  while ((std::uint64_t{1} << bits) < n) ++bits;
  return bits;
}

std::uint32_t mod_inverse(std::uint32_t a, std::uint32_t p) {
  std::int64_t t = 0, new_t = 1, r = p, new_r = a % p;
  while (new_r != 0) {
    const std::int64_t q = r / new_r;
    t = std::exchange(new_t, t - q * new_t);
    r = std::exchange(new_r, r - q * new_r);
  }
  if (r != 1) throw PartialityError("no inverse modulo " + std::to_string(p));
  return static_cast<std::uint32_t>((t % p + p) % p);
}

}  // namespace

// ---------------------------------------------------------------------------
// ExplicitStructure

std::string ExplicitStructure::element_name(Index a) const {
  return std::to_string(a);
}

Index ExplicitStructure::unary(Op op, Index a) const {
  const std::array<Index, 1> args{a};
  return apply(op, args);
}

Index ExplicitStructure::binary(Op op, Index a, Index b) const {
  const std::array<Index, 2> args{a, b};
  return apply(op, args);
}

std::uint64_t ExplicitStructure::element_order(Index a) const {
  const Index e = identity();
  std::uint64_t m = 1;
  for (Index x = a; x != e; x = product(x, a)) ++m;
  return m;
}

const std::vector<Index>& ExplicitStructure::generators() const {
  std::call_once(generators_once_,
                 [this] { generators_ = compute_generators(); });
  return generators_;
}

std::size_t subgroup_order(const ExplicitStructure& group,
                           std::span<const Index> gens) {
  std::vector<bool> seen(group.order(), false);
  std::vector<Index> queue{group.identity()};
  seen[queue[0]] = true;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    for (Index g : gens) {
      const Index next = group.product(queue[i], g);
      if (!seen[next]) {
        seen[next] = true;
        queue.push_back(next);
      }
    }
  }
  return queue.size();
}

std::vector<Index> ExplicitStructure::compute_generators() const {
  const std::size_t n = order();
  if (n == 1) return {identity()};
  std::vector<std::pair<std::uint64_t, Index>> by_order;
  by_order.reserve(n);
  for (Index a = 0; a < n; ++a) {
    const std::uint64_t m = element_order(a);
    if (m == n) return {a};
    by_order.emplace_back(m, a);
  }
  std::stable_sort(by_order.begin(), by_order.end(),
                   [](const auto& l, const auto& r) { return l.first > r.first; });
  const std::size_t outer = std::min<std::size_t>(32, n);
  const std::size_t inner = std::min<std::size_t>(256, n);
  for (std::size_t i = 0; i < outer; ++i) {
    for (std::size_t j = i + 1; j < inner; ++j) {
      const std::array<Index, 2> pair{by_order[i].second, by_order[j].second};
      if (subgroup_order(*this, pair) == n) return {pair.begin(), pair.end()};
    }
  }
  std::vector<Index> gens;
  for (const auto& [m, a] : by_order) {
    const std::size_t before = subgroup_order(*this, gens);
    gens.push_back(a);
    const std::size_t after = subgroup_order(*this, gens);
    if (after == before) {
      gens.pop_back();
    } else if (after == n) {
      break;
    }
  }
  return gens;
}

// ---------------------------------------------------------------------------
// Polynomials over Z/pZ

namespace poly {

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly rem(Poly a, const Poly& m, std::uint32_t p) {
  Poly mm = m;
  trim(mm);
  trim(a);
  if (mm.empty()) throw ArgumentError("polynomial division by zero");
  const std::uint32_t lead_inv = mod_inverse(mm.back(), p);
  while (a.size() >= mm.size()) {
    const std::uint64_t factor = std::uint64_t{a.back()} * lead_inv % p;
    const std::size_t shift = a.size() - mm.size();
    for (std::size_t i = 0; i < mm.size(); ++i) {
      const std::uint64_t sub = factor * mm[i] % p;
      a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - sub) % p);
    }
    trim(a);
  }
  return a;
}

Poly mul(const Poly& a, const Poly& b, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      out[i + j] = static_cast<std::uint32_t>(
          (out[i + j] + std::uint64_t{a[i]} * b[j]) % p);
    }
  }
  trim(out);
  return out;
}

bool is_irreducible(const Poly& m, std::uint32_t p) {
  Poly mm = m;
  trim(mm);
  if (mm.size() < 2) return false;
  const std::size_t d = mm.size() - 1;
  if (d == 1) return true;
  for (std::size_t k = 1; k <= d / 2; ++k) {
    const std::uint64_t count = ipow(p, k);
    for (std::uint64_t v = 0; v < count; ++v) {
      Poly f(k + 1, 0);
      std::uint64_t t = v;
      for (std::size_t i = 0; i < k; ++i) {
        f[i] = static_cast<std::uint32_t>(t % p);
        t /= p;
      }
      f[k] = 1;
      if (rem(mm, f, p).empty()) return false;
    }
  }
  return true;
}

Poly first_irreducible(std::uint32_t p, std::uint32_t n) {
  const std::uint64_t count = ipow(p, n);
  for (std::uint64_t v = 0; v < count; ++v) {
    Poly f(n + 1, 0);
    std::uint64_t t = v;
    for (std::size_t i = 0; i < n; ++i) {
      f[i] = static_cast<std::uint32_t>(t % p);
      t /= p;
    }
    f[n] = 1;
    if (is_irreducible(f, p)) return f;
  }
  throw ValidationError("no irreducible polynomial found");
}

Poly parse(std::string_view text, std::uint32_t p) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  if (s.empty()) throw UsageError("empty polynomial");
  Poly out;
  std::size_t i = 0;
  const auto add_term = [&](std::int64_t coeff, std::size_t degree) {
    if (out.size() <= degree) out.resize(degree + 1, 0);
    const std::int64_t pp = p;
    out[degree] = static_cast<std::uint32_t>(
        ((out[degree] + coeff) % pp + pp) % pp);
  };
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    }
    std::int64_t coeff = 1;
    bool have_coeff = false;
    std::size_t j = i;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) {
      coeff = std::stoll(s.substr(i, j - i));
      have_coeff = true;
      i = j;
    }
    if (i < s.size() && s[i] == '*') ++i;
    std::size_t degree = 0;
    if (i < s.size() && s[i] == 'x') {
      ++i;
      degree = 1;
      if (i < s.size() && s[i] == '^') {
        ++i;
        j = i;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
        if (j == i) throw UsageError("bad exponent in polynomial '" + s + "'");
        degree = std::stoul(s.substr(i, j - i));
        i = j;
      }
    } else if (!have_coeff) {
      throw UsageError("cannot parse polynomial '" + s + "'");
    }
    if (i < s.size() && s[i] != '+' && s[i] != '-') {
      throw UsageError("cannot parse polynomial '" + s + "'");
    }
    add_term(sign * coeff, degree);
  }
  trim(out);
  return out;
}

std::string format(const Poly& a) {
  Poly t = a;
  trim(t);
  if (t.empty()) return "0";
  std::string out;
  for (std::size_t k = t.size(); k-- > 0;) {
    if (t[k] == 0) continue;
    if (!out.empty()) out += "+";
    if (k == 0) {
      out += std::to_string(t[k]);
      continue;
    }
    if (t[k] != 1) out += std::to_string(t[k]) + "*";
    out += "x";
    if (k > 1) out += "^" + std::to_string(k);
  }
  return out;
}

}  // namespace poly

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// FieldSpec / FiniteField

namespace {

constexpr std::uint64_t kMaxFieldOrder = std::uint64_t{1} << 22;

}  // namespace

std::uint64_t FieldSpec::order() const { return ipow(p, n); }

std::string FieldSpec::to_string() const {
  std::string out = "f:" + std::to_string(p) + "^" + std::to_string(n);
  if (!modulus.empty()) out += "/" + poly::format(modulus);
  return out;
}

FieldSpec FieldSpec::make(std::uint32_t p, std::uint32_t n, poly::Poly modulus) {
  if (!is_prime(p)) {
    throw ValidationError(std::to_string(p) + " is not prime");
  }
  if (n < 1) throw ValidationError("extension degree must be >= 1");
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < n; ++i) {
    q *= p;
    if (q > kMaxFieldOrder) {
      throw ValidationError("field order exceeds the enumeration limit");
    }
  }
  FieldSpec spec{p, n, {}};
  if (modulus.empty()) {
    spec.modulus = poly::first_irreducible(p, n);
    return spec;
  }
  for (auto& c : modulus) c %= p;
  poly::trim(modulus);
  if (modulus.size() != n + 1 || modulus.back() != 1) {
    throw ValidationError("modulus must be monic of degree " + std::to_string(n));
  }
  if (!poly::is_irreducible(modulus, p)) {
    throw ValidationError("modulus " + poly::format(modulus) +
                          " is reducible over F_" + std::to_string(p));
  }
  spec.modulus = std::move(modulus);
  return spec;
}

FieldSpec FieldSpec::parse(std::string_view text) {
  std::string s(text);
  if (s.rfind("f:", 0) != 0) {
    throw UsageError("field descriptor must start with 'f:' (got '" + s + "')");
  }
  s = s.substr(2);
  std::string mod_text;
  if (auto slash = s.find('/'); slash != std::string::npos) {
    mod_text = s.substr(slash + 1);
    s = s.substr(0, slash);
  }
  static const std::regex kPow(R"(^(\d+)(?:\^(\d+))?$)");
  std::smatch m;
  if (!std::regex_match(s, m, kPow)) {
    throw UsageError("field descriptor must look like f:p^n[/modulus] (got '" +
                     std::string(text) + "')");
  }
  const auto p = static_cast<std::uint32_t>(std::stoul(m[1].str()));
  const auto n = m[2].matched ? static_cast<std::uint32_t>(std::stoul(m[2].str())) : 1u;
  poly::Poly modulus;
  if (!mod_text.empty()) {
    if (p < 2) throw ValidationError("characteristic must be prime");
    modulus = poly::parse(mod_text, p);
  }
  return make(p, n, std::move(modulus));
}

FiniteField::FiniteField(FieldSpec spec)
    : ExplicitStructure(StructureSignature::field()),
      spec_(FieldSpec::make(spec.p, spec.n, spec.modulus)),
      order_(static_cast<std::size_t>(spec_.order())) {
  const std::uint64_t group = order_ - 1;
  if (group > 0) {
    const auto factors = prime_factors(group);
    const auto slow_pow = [this](Index a, std::uint64_t e) {
      Index r = 1;
      while (e != 0) {
        if (e & 1) r = slow_mul(r, a);
        a = slow_mul(a, a);
        e >>= 1;
      }
      return r;
    };
    for (Index g = 1; g < order_; ++g) {
      const bool primitive = std::all_of(
          factors.begin(), factors.end(),
          [&](std::uint64_t r) { return slow_pow(g, group / r) != 1; });
      if (primitive) {
        primitive_ = g;
        break;
      }
    }
    exp_.resize(group);
    log_.assign(order_, 0);
    Index x = 1;
    for (std::uint64_t i = 0; i < group; ++i) {
      exp_[i] = x;
      log_[x] = static_cast<Index>(i);
      x = slow_mul(x, primitive_);
    }
  }
}

std::string FiniteField::name() const {
  return "F_" + std::to_string(order_) + " (" + spec_.to_string() + ")";
}

std::string FiniteField::element_name(Index a) const {
  if (spec_.n == 1) return std::to_string(a);
  return poly::format(coefficients(a));
}

Index FiniteField::from_coefficients(std::span<const std::uint32_t> c) const {
  if (c.size() > spec_.n) {
    poly::Poly reduced = poly::rem(poly::Poly(c.begin(), c.end()), spec_.modulus, spec_.p);
    return from_coefficients(reduced);
  }
  std::uint64_t v = 0;
  for (std::size_t i = c.size(); i-- > 0;) v = v * spec_.p + c[i] % spec_.p;
  return static_cast<Index>(v);
}

poly::Poly FiniteField::coefficients(Index a) const {
  poly::Poly c(spec_.n, 0);
  for (std::size_t i = 0; i < spec_.n; ++i) {
    c[i] = a % spec_.p;
    a /= spec_.p;
  }
  return c;
}

Index FiniteField::add(Index a, Index b) const {
  if (spec_.n == 1) return static_cast<Index>((std::uint64_t{a} + b) % spec_.p);
  std::uint64_t out = 0, scale = 1;
  for (std::size_t i = 0; i < spec_.n; ++i) {
    out += ((a % spec_.p + b % spec_.p) % spec_.p) * scale;
    a /= spec_.p;
    b /= spec_.p;
    scale *= spec_.p;
  }
  return static_cast<Index>(out);
}

Index FiniteField::neg(Index a) const {
  std::uint64_t out = 0, scale = 1;
  for (std::size_t i = 0; i < spec_.n; ++i) {
    out += ((spec_.p - a % spec_.p) % spec_.p) * scale;
    a /= spec_.p;
    scale *= spec_.p;
  }
  return static_cast<Index>(out);
}

Index FiniteField::slow_mul(Index a, Index b) const {
  const poly::Poly prod = poly::mul(coefficients(a), coefficients(b), spec_.p);
  const poly::Poly r = poly::rem(prod, spec_.modulus, spec_.p);
  return from_coefficients(r);
}

Index FiniteField::mul(Index a, Index b) const {
  if (a == 0 || b == 0) return 0;
  const std::uint64_t group = order_ - 1;
  return exp_[(std::uint64_t{log_[a]} + log_[b]) % group];
}

Index FiniteField::inv(Index a) const {
  if (a == 0) throw PartialityError("field inverse of zero");
  const std::uint64_t group = order_ - 1;
  return exp_[(group - log_[a]) % group];
}

Index FiniteField::pow(Index a, std::uint64_t e) const {
  if (a == 0) return e == 0 ? 1 : 0;
  const std::uint64_t group = order_ - 1;
  return exp_[static_cast<std::size_t>(
      (static_cast<unsigned __int128>(log_[a]) * (e % group)) % group)];
}

Index FiniteField::frobenius(Index a, std::uint32_t k) const {
  for (std::uint32_t i = 0; i < k % spec_.n; ++i) a = pow(a, spec_.p);
  return a;
}

Index FiniteField::evaluate(const poly::Poly& f, Index at) const {
  Index acc = 0;
  for (std::size_t i = f.size(); i-- > 0;) {
    acc = add(mul(acc, at), embed(f[i]));
  }
  return acc;
}

Index FiniteField::apply(Op op, std::span<const Index> args) const {
  switch (op) {
    case Op::add: return add(args[0], args[1]);
    case Op::neg: return neg(args[0]);
    case Op::zero: return 0;
    case Op::mul: return mul(args[0], args[1]);
    case Op::inv: return inv(args[0]);
    case Op::one: return 1;
    default: break;
  }
  throw SignatureError("field does not declare " + std::string(to_string(op)));
}

std::vector<Index> FiniteField::compute_generators() const {
  return {generator()};
}

// ---------------------------------------------------------------------------
// Groups

namespace {

[[noreturn]] void not_a_group_op(Op op) {
  throw SignatureError("group does not declare " + std::string(to_string(op)));
}

}  // namespace

CyclicGroup::CyclicGroup(std::uint64_t n)
    : ExplicitStructure(StructureSignature::group()), n_(n) {
  if (n < 1 || n > kEnumerationCap) {
    throw ArgumentError("cyclic group order must be in [1, " +
                        std::to_string(kEnumerationCap) + "]");
  }
}

Index CyclicGroup::apply(Op op, std::span<const Index> args) const {
  switch (op) {
    case Op::product: return static_cast<Index>((std::uint64_t{args[0]} + args[1]) % n_);
    case Op::inverse: return static_cast<Index>((n_ - args[0]) % n_);
    case Op::identity: return 0;
    default: not_a_group_op(op);
  }
}

std::string CyclicGroup::name() const { return "Z_" + std::to_string(n_); }

UnitGroup::UnitGroup(std::uint64_t n)
    : ExplicitStructure(StructureSignature::group()), n_(n) {
  if (n < 2 || n > 4 * kEnumerationCap) {
    throw ArgumentError("unit group modulus out of range");
  }
  position_.assign(n, -1);
  for (std::uint64_t r = 1; r < n; ++r) {
    if (std::gcd(r, n) == 1) {
      position_[r] = static_cast<std::int64_t>(units_.size());
      units_.push_back(r);
    }
  }
  inverse_.resize(units_.size());
  for (std::size_t i = 0; i < units_.size(); ++i) {
    inverse_[i] = index_of_residue(
        mod_inverse(static_cast<std::uint32_t>(units_[i]),
                    static_cast<std::uint32_t>(n_)) % n_);
  }
}

Index UnitGroup::index_of_residue(std::uint64_t r) const {
  const std::int64_t pos = position_[r % n_];
  if (pos < 0) throw ArgumentError(std::to_string(r) + " is not a unit");
  return static_cast<Index>(pos);
}

Index UnitGroup::apply(Op op, std::span<const Index> args) const {
  switch (op) {
    case Op::product:
      return index_of_residue(units_[args[0]] * units_[args[1]] % n_);
    case Op::inverse: return inverse_[args[0]];
    case Op::identity: return index_of_residue(1);
    default: not_a_group_op(op);
  }
}

std::string UnitGroup::name() const {
  return "(Z/" + std::to_string(n_) + "Z)^*";
}

std::string UnitGroup::element_name(Index a) const {
  return std::to_string(units_[a]);
}

PermutationGroup::PermutationGroup(std::uint32_t degree, std::vector<Perm> gens,
                                   std::string name)
    : ExplicitStructure(StructureSignature::group()),
      degree_(degree),
      name_(std::move(name)) {
  if (degree < 1 || degree > 16) {
    throw ArgumentError("permutation degree must be in [1, 16]");
  }
  Perm id(degree);
  std::iota(id.begin(), id.end(), std::uint8_t{0});
  perms_.push_back(id);
  by_key_.emplace(key(id), 0);
  for (const auto& g : gens) {
    if (g.size() != degree) throw ArgumentError("generator has wrong degree");
  }
  const auto compose = [&](const Perm& a, const Perm& b) {
    Perm c(degree);
    for (std::uint32_t i = 0; i < degree; ++i) c[i] = b[a[i]];
    return c;
  };
  for (std::size_t i = 0; i < perms_.size(); ++i) {
    for (const auto& g : gens) {
      Perm next = compose(perms_[i], g);
      if (by_key_.emplace(key(next), static_cast<Index>(perms_.size())).second) {
        perms_.push_back(std::move(next));
        if (perms_.size() > kEnumerationCap) {
          throw CapExceededError("permutation group exceeds enumeration cap", {});
        }
      }
    }
  }
  for (const auto& g : gens) {
    const Index gi = index_of(g);
    if (std::find(gen_index_.begin(), gen_index_.end(), gi) == gen_index_.end() &&
        gi != 0) {
      gen_index_.push_back(gi);
    }
  }
  if (gen_index_.empty()) gen_index_.push_back(0);
  const std::size_t n = perms_.size();
  inverse_.resize(n);
  for (Index a = 0; a < n; ++a) {
    Perm inv(degree);
    for (std::uint32_t i = 0; i < degree; ++i) inv[perms_[a][i]] = static_cast<std::uint8_t>(i);
    inverse_[a] = index_of(inv);
  }
  if (n <= 2048) {
    table_.resize(n * n);
    for (Index a = 0; a < n; ++a) {
      for (Index b = 0; b < n; ++b) {
        table_[std::size_t{a} * n + b] = index_of(compose(perms_[a], perms_[b]));
      }
    }
  }
}

std::uint64_t PermutationGroup::key(const Perm& p) const {
  std::uint64_t k = 0;
  for (std::uint8_t v : p) k = (k << 4) | v;
  return k;
}

Index PermutationGroup::index_of(const Perm& p) const {
  auto it = by_key_.find(key(p));
  if (it == by_key_.end()) throw ArgumentError("permutation not in group");
  return it->second;
}

Index PermutationGroup::apply(Op op, std::span<const Index> args) const {
  switch (op) {
    case Op::product: {
      const std::size_t n = perms_.size();
      if (!table_.empty()) return table_[std::size_t{args[0]} * n + args[1]];
      const Perm& a = perms_[args[0]];
      const Perm& b = perms_[args[1]];
      Perm c(degree_);
      for (std::uint32_t i = 0; i < degree_; ++i) c[i] = b[a[i]];
      return index_of(c);
    }
    case Op::inverse: return inverse_[args[0]];
    case Op::identity: return 0;
    default: not_a_group_op(op);
  }
}

std::string PermutationGroup::element_name(Index a) const {
  const Perm& p = perms_[a];
  std::vector<bool> seen(degree_, false);
  std::string out;
  for (std::uint32_t i = 0; i < degree_; ++i) {
    if (seen[i] || p[i] == i) continue;
    out += "(";
    for (std::uint32_t j = i; !seen[j]; j = p[j]) {
      seen[j] = true;
      if (out.back() != '(') out += " ";
      out += std::to_string(j + 1);
    }
    out += ")";
  }
  return out.empty() ? "()" : out;
}

PermutationGroup::Perm PermutationGroup::parse_cycles(std::string_view cycles,
                                                      std::uint32_t degree) {
  Perm p(degree);
  std::iota(p.begin(), p.end(), std::uint8_t{0});
  std::vector<std::uint32_t> cycle;
  std::string num;
  const auto flush_num = [&] {
    if (num.empty()) return;
    const auto v = static_cast<std::uint32_t>(std::stoul(num));
    if (v < 1 || v > degree) throw ArgumentError("point out of range in cycle");
    cycle.push_back(v - 1);
    num.clear();
  };
  for (char c : cycles) {
    if (std::isdigit(static_cast<unsigned char>(c))) {
      num.push_back(c);
    } else if (c == ')') {
      flush_num();
      for (std::size_t i = 0; i < cycle.size(); ++i) {
        p[cycle[i]] = static_cast<std::uint8_t>(cycle[(i + 1) % cycle.size()]);
      }
      cycle.clear();
    } else {
      flush_num();
    }
  }
  return p;
}

std::shared_ptr<PermutationGroup> PermutationGroup::symmetric(std::uint32_t n) {
  std::vector<Perm> gens;
  if (n >= 2) {
    gens.push_back(parse_cycles("(1 2)", n));
    if (n >= 3) {
      std::string cyc = "(";
      for (std::uint32_t i = 1; i <= n; ++i) cyc += std::to_string(i) + " ";
      gens.push_back(parse_cycles(cyc + ")", n));
    }
  }
  return std::make_shared<PermutationGroup>(n, std::move(gens),
                                            "S_" + std::to_string(n));
}

std::shared_ptr<PermutationGroup> PermutationGroup::alternating(std::uint32_t n) {
  std::vector<Perm> gens;
  if (n >= 3) {
    gens.push_back(parse_cycles("(1 2 3)", n));
    if (n >= 4) {
      std::string cyc = "(";
      for (std::uint32_t i = (n % 2 == 1 ? 1 : 2); i <= n; ++i) {
        cyc += std::to_string(i) + " ";
      }
      gens.push_back(parse_cycles(cyc + ")", n));
    }
  }
  return std::make_shared<PermutationGroup>(n, std::move(gens),
                                            "A_" + std::to_string(n));
}

std::shared_ptr<PermutationGroup> PermutationGroup::dihedral(std::uint32_t k) {
  if (k < 3) throw ArgumentError("dihedral group needs k >= 3");
  Perm rot(k), refl(k);
  for (std::uint32_t i = 0; i < k; ++i) {
    rot[i] = static_cast<std::uint8_t>((i + 1) % k);
    refl[i] = static_cast<std::uint8_t>((k - i) % k);
  }
  return std::make_shared<PermutationGroup>(k, std::vector<Perm>{rot, refl},
                                            "D_" + std::to_string(k));
}

// ---------------------------------------------------------------------------
// Matrix groups

std::uint64_t MatrixGroup::formula_order(MatrixFamily family, std::uint32_t dim,
                                         std::uint64_t q) {
  const std::uint64_t qd = ipow(q, dim);
  std::uint64_t gl = 1;
  for (std::uint32_t i = 0; i < dim; ++i) gl *= qd - ipow(q, i);
  return family == MatrixFamily::GL ? gl : gl / (q - 1);
}

namespace {

std::string family_name(MatrixFamily f) {
  switch (f) {
    case MatrixFamily::GL: return "GL";
    case MatrixFamily::SL: return "SL";
    case MatrixFamily::PGL: return "PGL";
  }
  return "?";
}

}  // namespace

MatrixGroup::MatrixGroup(MatrixFamily family, std::uint32_t dim, FieldSpec spec,
                         std::size_t cap)
    : ExplicitStructure(StructureSignature::group()),
      family_(family),
      dim_(dim),
      field_(std::move(spec)) {
  if (dim < 1) throw ArgumentError("matrix dimension must be >= 1");
  const std::uint64_t q = field_.order();
  const std::uint64_t expected = formula_order(family, dim, q);
  if (expected > cap) {
    throw CapExceededError(name() + " has order " + std::to_string(expected) +
                               ", above the enumeration cap " + std::to_string(cap),
                           {});
  }
  const std::size_t entries = std::size_t{dim} * dim;
  std::vector<Index> m(entries, 0);
  // Odometer over all q^(dim^2) matrices.
  while (true) {
    bool keep = true;
    if (family == MatrixFamily::PGL) {
      auto first = std::find_if(m.begin(), m.end(), [](Index v) { return v != 0; });
      keep = first != m.end() && *first == 1;
    }
    if (keep) {
      const Index det = determinant(m);
      keep = det != 0 && (family != MatrixFamily::SL || det == 1);
    }
    if (keep) {
      by_key_.emplace(key(m), static_cast<Index>(matrices_.size()));
      matrices_.push_back(m);
    }
    std::size_t i = 0;
    while (i < entries && ++m[i] == q) m[i++] = 0;
    if (i == entries) break;
  }
  inverse_.resize(matrices_.size());
  for (Index a = 0; a < matrices_.size(); ++a) {
    inverse_[a] = index_of(invert(matrices_[a]));
  }
}

std::uint64_t MatrixGroup::key(const std::vector<Index>& m) const {
  std::uint64_t k = 0;
  for (Index v : m) k = k * field_.order() + v;
  return k;
}

Index MatrixGroup::index_of(const std::vector<Index>& m) const {
  std::vector<Index> n = m;
  normalize(n);
  auto it = by_key_.find(key(n));
  if (it == by_key_.end()) throw ArgumentError("matrix not in group");
  return it->second;
}

void MatrixGroup::normalize(std::vector<Index>& a) const {
  if (family_ != MatrixFamily::PGL) return;
  auto first = std::find_if(a.begin(), a.end(), [](Index v) { return v != 0; });
  if (first == a.end()) return;
  const Index s = field_.inv(*first);
  for (Index& v : a) v = field_.mul(v, s);
}

std::vector<Index> MatrixGroup::multiply(const std::vector<Index>& a,
                                         const std::vector<Index>& b) const {
  std::vector<Index> c(a.size(), 0);
  for (std::uint32_t i = 0; i < dim_; ++i) {
    for (std::uint32_t j = 0; j < dim_; ++j) {
      Index acc = 0;
      for (std::uint32_t k = 0; k < dim_; ++k) {
        acc = field_.add(acc, field_.mul(a[i * dim_ + k], b[k * dim_ + j]));
      }
      c[i * dim_ + j] = acc;
    }
  }
  return c;
}

Index MatrixGroup::determinant(std::vector<Index> a) const {
  Index det = 1;
  for (std::uint32_t col = 0; col < dim_; ++col) {
    std::uint32_t pivot = col;
    while (pivot < dim_ && a[pivot * dim_ + col] == 0) ++pivot;
    if (pivot == dim_) return 0;
    if (pivot != col) {
      for (std::uint32_t j = 0; j < dim_; ++j) {
        std::swap(a[pivot * dim_ + j], a[col * dim_ + j]);
      }
      det = field_.neg(det);
    }
    const Index pv = a[col * dim_ + col];
    det = field_.mul(det, pv);
    const Index pinv = field_.inv(pv);
    for (std::uint32_t r = col + 1; r < dim_; ++r) {
      const Index f = field_.mul(a[r * dim_ + col], pinv);
      if (f == 0) continue;
      for (std::uint32_t j = col; j < dim_; ++j) {
        a[r * dim_ + j] = field_.sub(a[r * dim_ + j], field_.mul(f, a[col * dim_ + j]));
      }
    }
  }
  return det;
}

std::vector<Index> MatrixGroup::invert(const std::vector<Index>& m) const {
  const std::uint32_t w = 2 * dim_;
  std::vector<Index> a(std::size_t{dim_} * w, 0);
  for (std::uint32_t i = 0; i < dim_; ++i) {
    for (std::uint32_t j = 0; j < dim_; ++j) a[i * w + j] = m[i * dim_ + j];
    a[i * w + dim_ + i] = 1;
  }
  for (std::uint32_t col = 0; col < dim_; ++col) {
    std::uint32_t pivot = col;
    while (pivot < dim_ && a[pivot * w + col] == 0) ++pivot;
    if (pivot == dim_) throw ArgumentError("singular matrix");
    for (std::uint32_t j = 0; j < w; ++j) std::swap(a[pivot * w + j], a[col * w + j]);
    const Index pinv = field_.inv(a[col * w + col]);
    for (std::uint32_t j = 0; j < w; ++j) a[col * w + j] = field_.mul(a[col * w + j], pinv);
    for (std::uint32_t r = 0; r < dim_; ++r) {
      if (r == col || a[r * w + col] == 0) continue;
      const Index f = a[r * w + col];
      for (std::uint32_t j = 0; j < w; ++j) {
        a[r * w + j] = field_.sub(a[r * w + j], field_.mul(f, a[col * w + j]));
      }
    }
  }
  std::vector<Index> out(m.size());
  for (std::uint32_t i = 0; i < dim_; ++i) {
    for (std::uint32_t j = 0; j < dim_; ++j) out[i * dim_ + j] = a[i * w + dim_ + j];
  }
  return out;
}

Index MatrixGroup::apply(Op op, std::span<const Index> args) const {
  switch (op) {
    case Op::product:
      return index_of(multiply(matrices_[args[0]], matrices_[args[1]]));
    case Op::inverse: return inverse_[args[0]];
    case Op::identity: {
      std::vector<Index> id(std::size_t{dim_} * dim_, 0);
      for (std::uint32_t i = 0; i < dim_; ++i) id[i * dim_ + i] = 1;
      return index_of(id);
    }
    default: not_a_group_op(op);
  }
}

std::string MatrixGroup::name() const {
  return family_name(family_) + "_" + std::to_string(dim_) + "(F_" +
         std::to_string(field_.order()) + ")";
}

std::string MatrixGroup::element_name(Index a) const {
  const auto& m = matrices_[a];
  std::string out = "[";
  for (std::uint32_t i = 0; i < dim_; ++i) {
    out += i ? ",[" : "[";
    for (std::uint32_t j = 0; j < dim_; ++j) {
      if (j) out += ",";
      out += field_.element_name(m[i * dim_ + j]);
    }
    out += "]";
  }
  return out + "]";
}

DirectProductGroup::DirectProductGroup(ExplicitPtr a, ExplicitPtr b)
    : ExplicitStructure(StructureSignature::group()),
      a_(std::move(a)),
      b_(std::move(b)) {
  if (a_->kind() != StructureKind::group || b_->kind() != StructureKind::group) {
    throw SignatureError("explicit direct products are defined for groups only");
  }
  if (a_->order() * b_->order() > kEnumerationCap) {
    throw CapExceededError("direct product exceeds enumeration cap", {});
  }
}

Index DirectProductGroup::apply(Op op, std::span<const Index> args) const {
  const auto nb = static_cast<Index>(b_->order());
  const auto pack = [nb](Index x, Index y) { return x * nb + y; };
  switch (op) {
    case Op::product:
      return pack(a_->product(args[0] / nb, args[1] / nb),
                  b_->product(args[0] % nb, args[1] % nb));
    case Op::inverse:
      return pack(a_->inverse(args[0] / nb), b_->inverse(args[0] % nb));
    case Op::identity: return pack(a_->identity(), b_->identity());
    default: not_a_group_op(op);
  }
}

std::string DirectProductGroup::name() const {
  return a_->name() + " x " + b_->name();
}

std::string DirectProductGroup::element_name(Index x) const {
  const auto nb = static_cast<Index>(b_->order());
  return "(" + a_->element_name(x / nb) + ", " + b_->element_name(x % nb) + ")";
}

// ---------------------------------------------------------------------------
// Factories and descriptors

ExplicitPtr make_cyclic_group(std::uint64_t n) {
  return std::make_shared<CyclicGroup>(n);
}

ExplicitPtr make_unit_group(std::uint64_t n) {
  return std::make_shared<UnitGroup>(n);
}

std::shared_ptr<const FiniteField> make_field(const FieldSpec& spec) {
  return std::make_shared<FiniteField>(spec);
}

ExplicitPtr make_matrix_group(MatrixFamily family, std::uint32_t dim,
                              const FieldSpec& spec, std::size_t cap) {
  return std::make_shared<MatrixGroup>(family, dim, spec, cap);
}

namespace {

constexpr std::string_view kDescriptorHelp =
    "f:p^n[/modulus], z:n, units:n, s:n, a:n, d:k, gl<d>-q, sl<d>-q, pgl<d>-q, "
    "or a product A*B";

std::uint64_t parse_count(const std::string& text, const std::string& whole) {
  if (text.empty() ||
      !std::all_of(text.begin(), text.end(),
                   [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    throw UsageError("bad number in structure descriptor '" + whole + "'");
  }
  return std::stoull(text);
}

FieldSpec prime_power_spec(std::uint64_t q, const std::string& whole) {
  for (std::uint32_t p = 2; p <= q; ++p) {
    if (q % p != 0) continue;
    std::uint32_t n = 0;
    std::uint64_t t = q;
    while (t % p == 0) {
      t /= p;
      ++n;
    }
    if (t != 1 || !is_prime(p)) break;
    return FieldSpec::make(p, n);
  }
  throw UsageError("'" + whole + "': " + std::to_string(q) +
                   " is not a prime power");
}

ExplicitPtr parse_single(const std::string& d) {
  if (d.rfind("f:", 0) == 0) return make_field(FieldSpec::parse(d));
  static const std::regex kFamily(R"(^(z|units|s|a|d)[:\-](\d+)$)");
  static const std::regex kMatrix(R"(^(gl|sl|pgl)(\d+)-(\d+)$)");
  std::smatch m;
  if (std::regex_match(d, m, kFamily)) {
    const std::string fam = m[1].str();
    const std::uint64_t n = parse_count(m[2].str(), d);
    try {
      if (fam == "z") return make_cyclic_group(n);
      if (fam == "units") return make_unit_group(n);
      if (n > 8 && (fam == "s" || fam == "a")) {
        throw UsageError("'" + d + "': degree too large to enumerate");
      }
      if (fam == "s") return PermutationGroup::symmetric(static_cast<std::uint32_t>(n));
      if (fam == "a") return PermutationGroup::alternating(static_cast<std::uint32_t>(n));
      return PermutationGroup::dihedral(static_cast<std::uint32_t>(n));
    } catch (const ArgumentError& e) {
      throw UsageError("'" + d + "': " + e.what());
    }
  }
  if (std::regex_match(d, m, kMatrix)) {
    const std::string fam = m[1].str();
    const auto dim = static_cast<std::uint32_t>(parse_count(m[2].str(), d));
    const std::uint64_t q = parse_count(m[3].str(), d);
    const MatrixFamily family = fam == "gl"   ? MatrixFamily::GL
                                : fam == "sl" ? MatrixFamily::SL
                                              : MatrixFamily::PGL;
    return make_matrix_group(family, dim, prime_power_spec(q, d));
  }
  std::string hint;
  for (std::string_view prefix : {"f:", "z:", "units:", "s:", "a:", "d:", "sl2-",
                                  "pgl2-", "gl2-"}) {
    if (!d.empty() && prefix.front() == d.front()) {
      hint += hint.empty() ? "; did you mean " : " or ";
      hint += std::string(prefix) + "...";
    }
  }
  throw UsageError("unknown structure descriptor '" + d + "'" + hint +
                   "; expected " + std::string(kDescriptorHelp));
}

}  // namespace

ExplicitPtr parse_structure(std::string_view descriptor) {
  std::string d;
  for (char c : descriptor) {
    if (!std::isspace(static_cast<unsigned char>(c))) {
      d.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  if (d.rfind("f:", 0) != 0 && d.find('*') != std::string::npos) {
    ExplicitPtr acc;
    std::stringstream ss(d);
    std::string part;
    while (std::getline(ss, part, '*')) {
      ExplicitPtr next = parse_single(part);
      acc = acc ? std::make_shared<DirectProductGroup>(acc, next) : next;
    }
    if (!acc) throw UsageError("empty structure descriptor");
    return acc;
  }
  return parse_single(d);
}

// ---------------------------------------------------------------------------
// Law checks

std::string check_laws(const ExplicitStructure& s) {
  const auto n = static_cast<Index>(s.order());
  std::ostringstream err;
  if (s.kind() == StructureKind::group) {
    const Index e = s.identity();
    for (Index a = 0; a < n; ++a) {
      if (s.product(e, a) != a || s.product(a, e) != a) {
        err << "identity law fails at " << s.element_name(a);
        return err.str();
      }
      if (s.product(a, s.inverse(a)) != e || s.product(s.inverse(a), a) != e) {
        err << "inverse law fails at " << s.element_name(a);
        return err.str();
      }
    }
    // (xy)g = x(yg) for all x, y and every generator g implies associativity
    // for all triples, by induction on word length in the generators.
    std::vector<Index> third;
    if (std::uint64_t{n} * n * n <= 20'000'000) {
      third.resize(n);
      std::iota(third.begin(), third.end(), Index{0});
    } else {
      third = s.generators();
    }
    for (Index a = 0; a < n; ++a) {
      for (Index b = 0; b < n; ++b) {
        const Index ab = s.product(a, b);
        for (Index c : third) {
          if (s.product(ab, c) != s.product(a, s.product(b, c))) {
            err << "associativity fails at (" << a << "," << b << "," << c << ")";
            return err.str();
          }
        }
      }
    }
    return {};
  }
  const auto& f = dynamic_cast<const FiniteField&>(s);
  for (Index a = 0; a < n; ++a) {
    if (f.add(a, 0) != a || f.mul(a, 1) != a || f.add(a, f.neg(a)) != 0) {
      err << "identity/negation law fails at " << a;
      return err.str();
    }
    if (a != 0 && f.mul(a, f.inv(a)) != 1) {
      err << "inverse law fails at " << a;
      return err.str();
    }
    for (Index b = 0; b < n; ++b) {
      if (f.add(a, b) != f.add(b, a) || f.mul(a, b) != f.mul(b, a)) {
        err << "commutativity fails at (" << a << "," << b << ")";
        return err.str();
      }
    }
  }
  // Triples: exhaustive while affordable, otherwise a fixed pseudo-random set.
  Rng rng(0x5eed);
  const bool exhaustive = std::uint64_t{n} * n * n <= 2'000'000;
  const std::uint64_t triples = exhaustive ? std::uint64_t{n} * n * n : 200'000;
  for (std::uint64_t t = 0; t < triples; ++t) {
    const Index a = exhaustive ? static_cast<Index>(t / (std::uint64_t{n} * n))
                               : static_cast<Index>(uniform_below(rng, n));
    const Index b = exhaustive ? static_cast<Index>(t / n % n)
                               : static_cast<Index>(uniform_below(rng, n));
    const Index c = exhaustive ? static_cast<Index>(t % n)
                               : static_cast<Index>(uniform_below(rng, n));
    if (f.mul(a, f.add(b, c)) != f.add(f.mul(a, b), f.mul(a, c)) ||
        f.mul(f.mul(a, b), c) != f.mul(a, f.mul(b, c)) ||
        f.add(f.add(a, b), c) != f.add(a, f.add(b, c))) {
      err << "ring law fails at (" << a << "," << b << "," << c << ")";
      return err.str();
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Encryption

EncryptedBox::EncryptedBox(std::shared_ptr<const Codebook> book,
                           std::uint64_t seed)
    : BlackBoxStructure(book->plain->signature(), book->bytes, seed),
      book_(std::move(book)) {}

std::string EncryptedBox::sampler_provenance() const {
  return "exactly uniform over the codebook";
}

BoxPtr EncryptedBox::clone(std::uint64_t seed) const {
  return std::make_shared<EncryptedBox>(book_, seed);
}

Index EncryptedBox::decode(const CryptoElement& x) const {
  auto it = book_->decode.find(x.to_uint());
  if (it == book_->decode.end()) {
    throw ArgumentError("string " + x.hex() + " is not a cryptoelement of this box");
  }
  return it->second;
}

CryptoElement EncryptedBox::encode(Index a) const {
  return CryptoElement::from_uint(book_->codeword[a], book_->bytes);
}

CryptoElement EncryptedBox::do_sample() {
  return encode(static_cast<Index>(uniform_below(rng(), book_->plain->order())));
}

CryptoElement EncryptedBox::do_apply(Op op,
                                     std::span<const CryptoElement* const> args) {
  std::array<Index, 2> plain{};
  for (std::size_t i = 0; i < args.size(); ++i) plain[i] = decode(*args[i]);
  return encode(book_->plain->apply(op, std::span<const Index>(plain.data(), args.size())));
}

bool EncryptedBox::do_equal(const CryptoElement& x, const CryptoElement& y) {
  return x == y;
}

EncryptionOracle::EncryptionOracle(std::shared_ptr<const Codebook> book)
    : book_(std::move(book)), inverse_calls_(std::make_shared<std::uint64_t>(0)) {}

CryptoElement EncryptionOracle::encrypt(Index a) const {
  if (a >= book_->codeword.size()) throw ArgumentError("plain index out of range");
  return CryptoElement::from_uint(book_->codeword[a], book_->bytes);
}

Index EncryptionOracle::decrypt_hidden(const CryptoElement& x) const {
  ++*inverse_calls_;
  auto it = book_->decode.find(x.to_uint());
  if (it == book_->decode.end()) {
    throw ArgumentError("string " + x.hex() + " is not a codeword");
  }
  return it->second;
}

namespace {

std::shared_ptr<Codebook> make_codebook(ExplicitPtr plain, bool masked,
                                        std::uint64_t seed) {
  const std::size_t n = plain->order();
  if (n > kEnumerationCap) {
    throw CapExceededError("structure too large to encrypt by codebook", {});
  }
  auto book = std::make_shared<Codebook>();
  book->plain = std::move(plain);
  book->masked_bits = masked ? 2 * ceil_log2(n) : ceil_log2(n);
  book->bytes = std::max<std::size_t>(1, (book->masked_bits + 7) / 8);
  book->codeword.resize(n);
  if (!masked) {
    for (Index i = 0; i < n; ++i) {
      book->codeword[i] = i;
      book->decode.emplace(i, i);
    }
    return book;
  }
  Rng rng(derive_seed(seed, 0));
  const std::uint64_t range = std::uint64_t{1} << book->masked_bits;
  for (Index i = 0; i < n; ++i) {
    std::uint64_t c;
    do {
      c = uniform_below(rng, range);
    } while (book->decode.count(c) != 0);
    book->codeword[i] = c;
    book->decode.emplace(c, i);
  }
  return book;
}

}  // namespace

Encryption encrypt(ExplicitPtr plain, std::uint64_t seed) {
  std::shared_ptr<const Codebook> book = make_codebook(std::move(plain), true, seed);
  return {std::make_shared<EncryptedBox>(book, derive_seed(seed, 1)),
          EncryptionOracle(book)};
}

BoxPtr plain_box(ExplicitPtr plain, std::uint64_t seed) {
  return std::make_shared<EncryptedBox>(make_codebook(std::move(plain), false, 0),
                                        seed);
}

}  // namespace bba
