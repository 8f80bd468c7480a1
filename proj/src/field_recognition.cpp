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

#include "bba/field_recognition.hpp"

#include <cmath>

namespace bba {

std::string_view to_string(InverseMethod m) {
  return m == InverseMethod::table ? "table" : "bsgs";
}

namespace {

void require_field(const BlackBoxStructure& k) {
  if (k.kind() != StructureKind::field) {
    throw SignatureError("field recognition needs a field box");
  }
}

std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e != 0) {
    if (e & 1) r = r * b % m;
    b = b * b % m;
    e >>= 1;
  }
  return r;
}

std::uint32_t primitive_root(std::uint32_t p) {
  if (p == 2) return 1;
  const auto factors = prime_factors(p - 1);
  for (std::uint32_t g = 2; g < p; ++g) {
    bool ok = true;
    for (std::uint64_t r : factors) {
      if (pow_mod(g, (p - 1) / r, p) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  return 1;
}

}  // namespace

std::uint32_t find_characteristic(BlackBoxStructure& k, std::uint64_t cap) {
  require_field(k);
  const CryptoElement zero = k.apply(Op::zero);
  const CryptoElement one = k.apply(Op::one);
  CryptoElement s = one;
  for (std::uint64_t m = 1; m <= cap; ++m) {
    if (k.equal(s, zero)) return static_cast<std::uint32_t>(m);
    s = k.apply(Op::add, s, one);
  }
  throw BoundExceededError("characteristic exceeds scan cap " + std::to_string(cap));
}

PrimeEmbedding::PrimeEmbedding(BoxPtr field, std::uint32_t p, InverseMethod method)
    : box_(std::move(field)), p_(p), method_(method) {
  require_field(*box_);
  BlackBoxStructure& k = *box_;
  if (!is_prime(p) ||
      !k.equal(power(k, k.apply(Op::one), p, Reduct::additive), k.apply(Op::zero))) {
    throw CharacteristicMismatchError(std::to_string(p) +
                                      " is not the characteristic of the box");
  }
  primitive_root_ = primitive_root(p);
  generator_ = image(primitive_root_);
  if (method_ == InverseMethod::table) {
    table_ = std::make_shared<ElementIndex>(k);
    const CryptoElement one = k.apply(Op::one);
    CryptoElement acc = k.apply(Op::zero);
    for (std::uint32_t m = 0; m < p; ++m) {
      table_->insert(acc);
      acc = k.apply(Op::add, acc, one);
    }
  }
}

CryptoElement PrimeEmbedding::image(std::uint64_t m) const {
  BlackBoxStructure& k = *box_;
  return power(k, k.apply(Op::one), static_cast<std::int64_t>(m % p_),
               Reduct::additive);
}

std::optional<std::uint32_t> PrimeEmbedding::preimage(const CryptoElement& x) const {
  if (method_ == InverseMethod::table) {
    if (auto i = table_->find(x)) return static_cast<std::uint32_t>(*i);
    return std::nullopt;
  }
  BlackBoxStructure& k = *box_;
  if (k.equal(x, k.apply(Op::zero))) return 0;
  try {
    const std::uint64_t e = discrete_log(*this, generator_, x);
    return static_cast<std::uint32_t>(pow_mod(primitive_root_, e, p_));
  } catch (const NoSolutionError&) {
    return std::nullopt;
  }
}

PrimeEmbedding embed_prime_field(BoxPtr k, std::uint32_t p, InverseMethod method) {
  return PrimeEmbedding(std::move(k), p, method);
}

std::uint64_t discrete_log(const PrimeEmbedding& k0, const CryptoElement& g,
                           const CryptoElement& x) {
  BlackBoxStructure& k = k0.box();
  if (k.equal(x, k.apply(Op::zero))) {
    throw DomainError("discrete logarithm of zero");
  }
  const std::uint64_t group = k0.characteristic() - 1;
  const auto m = static_cast<std::uint64_t>(
      std::ceil(std::sqrt(static_cast<double>(group))));
  ElementIndex baby(k);
  std::vector<std::uint64_t> exponent_of;
  CryptoElement acc = k.apply(Op::one);
  for (std::uint64_t j = 0; j < std::max<std::uint64_t>(m, 1); ++j) {
    if (baby.insert(acc).second) exponent_of.push_back(j);
    acc = k.apply(Op::mul, acc, g);
  }
  const CryptoElement giant =
      power(k, g, -static_cast<std::int64_t>(m), Reduct::multiplicative);
  CryptoElement y = x;
  for (std::uint64_t i = 0; i <= m; ++i) {
    if (auto j = baby.find(y)) {
      const std::uint64_t e = i * m + exponent_of[*j];
      if (e < std::max<std::uint64_t>(group, 1)) return e;
    }
    y = k.apply(Op::mul, y, giant);
  }
  throw NoSolutionError("element is not a power of the given base");
}

Index RecognitionResult::alpha(const CryptoElement& x) const {
  if (auto a = try_alpha(x)) return *a;
  throw ArgumentError("cryptoelement " + x.hex() + " is not in the recognized field");
}

std::optional<Index> RecognitionResult::try_alpha(const CryptoElement& x) const {
  if (auto i = alpha_->find(x)) return static_cast<Index>(*i);
  return std::nullopt;
}

namespace {

// Frobenius orbit theta, theta^p, ... until it closes; returns the orbit.
std::vector<CryptoElement> frobenius_orbit(BlackBoxStructure& k,
                                           const CryptoElement& theta,
                                           std::uint32_t p, std::size_t limit) {
  std::vector<CryptoElement> orbit{theta};
  while (orbit.size() <= limit) {
    CryptoElement next = power(k, orbit.back(), p, Reduct::multiplicative);
    if (k.equal(next, theta)) return orbit;
    orbit.push_back(std::move(next));
  }
  return orbit;
}

// prod (X - c) over the orbit, coefficients low to high, computed in K.
std::vector<CryptoElement> orbit_polynomial(BlackBoxStructure& k,
                                            const std::vector<CryptoElement>& orbit) {
  const CryptoElement zero = k.apply(Op::zero);
  std::vector<CryptoElement> coeffs{k.apply(Op::one)};
  for (const auto& c : orbit) {
    const CryptoElement minus_c = k.apply(Op::neg, c);
    std::vector<CryptoElement> next(coeffs.size() + 1, zero);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      next[i + 1] = k.apply(Op::add, next[i + 1], coeffs[i]);
      next[i] = k.apply(Op::add, next[i], k.apply(Op::mul, minus_c, coeffs[i]));
    }
    coeffs = std::move(next);
  }
  return coeffs;
}

}  // namespace

RecognitionResult recognize_field(BoxPtr k_ptr, const FieldSpec& spec,
                                  std::uint64_t seed, InverseMethod method) {
  require_field(*k_ptr);
  BlackBoxStructure& k = *k_ptr;
  const BudgetMeter meter(k);
  const std::uint32_t p = spec.p;
  const std::uint32_t n = spec.n;
  RecognitionResult out;
  out.field_ = make_field(spec);
  out.box_ = k_ptr;
  out.method_ = method;
  const FiniteField& target = *out.field_;
  const std::size_t q = target.order();

  const PrimeEmbedding k0 = embed_prime_field(k_ptr, p, method);
  std::vector<CryptoElement> prime_images(p);
  {
    const CryptoElement one = k.apply(Op::one);
    CryptoElement acc = k.apply(Op::zero);
    for (std::uint32_t m = 0; m < p; ++m) {
      prime_images[m] = acc;
      acc = k.apply(Op::add, acc, one);
    }
  }

  // beta(x): the image of the class of x under F_p[x]/(spec.modulus) -> K.
  CryptoElement beta_x = prime_images[n == 1 ? 1 % p : 0];
  if (n == 1) {
    out.minpoly_ = {0, 1};
  } else {
    (void)seed;  // sampling randomness belongs to the box
    std::optional<std::vector<CryptoElement>> orbit;
    const std::size_t budget = 8 * std::size_t{n};
    for (std::size_t attempt = 0; attempt < budget; ++attempt) {
      ++out.samples_used_;
      auto candidate = frobenius_orbit(k, k.sample(), p, n);
      if (candidate.size() > n) {
        throw ContractViolationError("box contains elements of degree > " +
                                     std::to_string(n) + " over F_" +
                                     std::to_string(p));
      }
      if (candidate.size() == n) {
        orbit = std::move(candidate);
        break;
      }
    }
    if (!orbit) {
      throw DegenerateSamplerError("no element of degree " + std::to_string(n) +
                                   " after " + std::to_string(budget) + " samples");
    }
    const CryptoElement& theta = orbit->front();
    const auto coeffs = orbit_polynomial(k, *orbit);
    poly::Poly minpoly(coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      const auto c = k0.preimage(coeffs[i]);
      if (!c) {
        throw ContractViolationError(
            "minimal polynomial coefficient outside the prime subfield");
      }
      minpoly[i] = *c;
    }
    out.minpoly_ = minpoly;
    // F_p[x]/(minpoly) ~ K via x -> theta. Map spec's generator to a root of
    // spec.modulus in that quotient.
    const FiniteField theta_field(FieldSpec::make(p, n, minpoly));
    std::optional<Index> root;
    for (Index r = 0; r < q; ++r) {
      if (theta_field.evaluate(spec.modulus, r) == 0) {
        root = r;
        break;
      }
    }
    if (!root) throw ContractViolationError("modulus has no root in the box field");
    const poly::Poly r_coeffs = theta_field.coefficients(*root);
    CryptoElement theta_pow = k.apply(Op::one);
    beta_x = k.apply(Op::zero);
    for (std::uint32_t i = 0; i < n; ++i) {
      if (r_coeffs[i] != 0) {
        beta_x = k.apply(Op::add, beta_x,
                         k.apply(Op::mul, prime_images[r_coeffs[i]], theta_pow));
      }
      theta_pow = k.apply(Op::mul, theta_pow, theta);
    }
  }

  std::vector<CryptoElement> x_powers{k.apply(Op::one)};
  for (std::uint32_t i = 1; i < n; ++i) {
    x_powers.push_back(k.apply(Op::mul, x_powers.back(), beta_x));
  }
  out.beta_.reserve(q);
  out.alpha_ = std::make_shared<ElementIndex>(k);
  for (Index a = 0; a < q; ++a) {
    const poly::Poly c = target.coefficients(a);
    CryptoElement acc = prime_images[c[0]];
    for (std::uint32_t i = 1; i < n; ++i) {
      if (c[i] != 0) {
        acc = k.apply(Op::add, acc, k.apply(Op::mul, prime_images[c[i]], x_powers[i]));
      }
    }
    if (!out.alpha_->insert(acc).second) {
      throw ContractViolationError("recognition map is not injective");
    }
    out.beta_.push_back(std::move(acc));
  }
  for (Index a = 0; a < q; ++a) {
    if (out.alpha(out.beta_[a]) != a) {
      throw ContractViolationError("alpha(beta(a)) != a");
    }
  }
  out.cost_ = meter.report();
  return out;
}

}  // namespace bba
