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

#include "bba/attack.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

#include "bba/field_recognition.hpp"
#include "bba/isomorphism.hpp"
#include "bba/random.hpp"

namespace bba {

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::success: return "success";
    case Outcome::insufficient_plaintext: return "insufficient_plaintext";
    case Outcome::recognition_inconsistency: return "recognition_inconsistency";
    case Outcome::wrong_structure: return "wrong_structure";
  }
  return "unknown";
}

std::string_view to_string(Verdict v) {
  return v == Verdict::composite ? "composite" : "probably_prime";
}

std::vector<KnownPair> known_pairs(const EncryptionOracle& oracle,
                                   std::span<const Index> plain) {
  std::vector<KnownPair> out;
  out.reserve(plain.size());
  for (Index a : plain) out.push_back({a, oracle.encrypt(a)});
  return out;
}

RecoveredCipher::RecoveredCipher(Locator alpha, std::vector<CryptoElement> beta,
                                 AutomorphismHypothesis delta)
    : alpha_(std::move(alpha)), beta_(std::move(beta)), delta_(std::move(delta)) {}

Index RecoveredCipher::decrypt(const CryptoElement& x) const {
  const auto a = alpha_(x);
  if (!a) throw ArgumentError("cryptoelement " + x.hex() + " is not in X");
  return delta_.inverse[*a];
}

const CryptoElement& RecoveredCipher::encrypt(Index a) const {
  if (a >= beta_.size()) throw ArgumentError("plaintext index out of range");
  return beta_[delta_.forward[a]];
}

namespace {

AttackResult failed(AttackReport report, Outcome outcome, std::string detail,
                    const BudgetMeter& meter) {
  report.outcome = outcome;
  report.detail = std::move(detail);
  report.budget = meter.report();
  return AttackResult{std::move(report), std::nullopt, {}};
}

std::string describe_group_map(const ExplicitStructure& a,
                               const std::vector<Index>& forward) {
  std::string out;
  for (Index g : a.generators()) {
    if (!out.empty()) out += ", ";
    out += a.element_name(g) + " -> " + a.element_name(forward[g]);
  }
  return out;
}

// Enumerates the group behind X from sampled generators. Returns nullopt when
// the closure outgrows target or stops growing before reaching it.
std::optional<ElementIndex> enumerate_box(BlackBoxStructure& x, std::size_t target,
                                          std::size_t stall_limit, std::string& why) {
  std::vector<CryptoElement> gens;
  ElementIndex closure = close_under(x, gens, target);
  std::size_t stall = 0;
  while (closure.size() < target) {
    CryptoElement s = x.sample();
    if (closure.find(s)) {
      if (++stall >= stall_limit) {
        why = "closure stopped growing at " + std::to_string(closure.size()) +
              " elements, expected " + std::to_string(target);
        return std::nullopt;
      }
      continue;
    }
    stall = 0;
    gens.push_back(std::move(s));
    try {
      closure = close_under(x, gens, target);
    } catch (const CapExceededError&) {
      why = "X has more than " + std::to_string(target) + " elements";
      return std::nullopt;
    }
  }
  // One extra sample guards against X being larger than a closed subgroup.
  for (std::size_t i = 0; i < 8; ++i) {
    if (!closure.find(x.sample())) {
      why = "X has more than " + std::to_string(target) + " elements";
      return std::nullopt;
    }
  }
  return closure;
}

AutomorphismHypothesis group_hypothesis(const ExplicitStructure& a,
                                        const std::vector<std::size_t>& map) {
  AutomorphismHypothesis h;
  h.forward.assign(map.begin(), map.end());
  h.inverse.assign(map.size(), 0);
  for (std::size_t i = 0; i < map.size(); ++i) h.inverse[map[i]] = static_cast<Index>(i);
  h.description = describe_group_map(a, h.forward);
  return h;
}

}  // namespace

AttackResult attack_field(BoxPtr x, const FieldSpec& spec,
                          std::span<const KnownPair> known, std::uint64_t seed) {
  const BudgetMeter meter(*x);
  AttackReport report;
  report.structure = spec.to_string();
  report.known_pairs_used = known.size();
  if (x->kind() != StructureKind::field) {
    return failed(std::move(report), Outcome::wrong_structure, "X is not a field box",
                  meter);
  }

  std::optional<RecognitionResult> rec;
  try {
    rec = recognize_field(x, spec, seed);
  } catch (const CharacteristicMismatchError& e) {
    return failed(std::move(report), Outcome::wrong_structure, e.what(), meter);
  } catch (const DegenerateSamplerError& e) {
    return failed(std::move(report), Outcome::recognition_inconsistency, e.what(), meter);
  } catch (const ContractViolationError& e) {
    return failed(std::move(report), Outcome::wrong_structure, e.what(), meter);
  }
  const FiniteField& f = rec->field();

  // alpha(E(a)) for each known pair, i.e. delta(a).
  std::vector<Index> delta_of(known.size());
  for (std::size_t i = 0; i < known.size(); ++i) {
    const auto d = rec->try_alpha(known[i].cipher);
    if (!d || known[i].plain >= f.order()) {
      return failed(std::move(report), Outcome::recognition_inconsistency,
                    "known pair outside the recognized field", meter);
    }
    delta_of[i] = *d;
  }

  const std::uint32_t n = spec.n;
  auto consistent = [&](std::uint32_t k, std::size_t prefix) {
    for (std::size_t i = 0; i < prefix; ++i) {
      if (f.frobenius(known[i].plain, k) != delta_of[i]) return false;
    }
    return true;
  };
  std::vector<std::uint32_t> alive;
  for (std::uint32_t k = 0; k < n; ++k) {
    if (consistent(k, known.size())) alive.push_back(k);
  }
  for (std::size_t prefix = 0; prefix <= known.size(); ++prefix) {
    std::size_t count = 0;
    for (std::uint32_t k = 0; k < n; ++k) count += consistent(k, prefix) ? 1 : 0;
    if (count == 1) {
      report.known_pairs_needed = prefix;
      break;
    }
  }

  AttackResult result;
  for (std::uint32_t k : alive) {
    AutomorphismHypothesis h;
    h.frobenius_exponent = k;
    h.description = "frobenius^" + std::to_string(k) + ": a -> a^(" +
                    std::to_string(spec.p) + "^" + std::to_string(k) + ")";
    h.forward.resize(f.order());
    h.inverse.resize(f.order());
    for (Index a = 0; a < f.order(); ++a) {
      h.forward[a] = f.frobenius(a, k);
      h.inverse[a] = f.frobenius(a, (n - k) % n);
    }
    report.survivors.push_back(h.description);
    result.survivors.push_back(std::move(h));
  }

  if (alive.empty()) {
    report.outcome = Outcome::recognition_inconsistency;
    report.detail = "no Frobenius exponent matches the known pairs";
  } else if (alive.size() > 1) {
    report.outcome = Outcome::insufficient_plaintext;
    report.detail = std::to_string(alive.size()) + " Frobenius exponents survive";
  } else {
    report.outcome = Outcome::success;
    report.delta = result.survivors.front().description;
    std::vector<CryptoElement> beta(f.order());
    for (Index a = 0; a < f.order(); ++a) beta[a] = rec->beta(a);
    result.cipher.emplace(
        [rec = *rec](const CryptoElement& c) { return rec.try_alpha(c); },
        std::move(beta), result.survivors.front());
  }
  report.budget = meter.report();
  result.report = std::move(report);
  return result;
}

AttackResult attack_group_small(BoxPtr x, ExplicitPtr a_ptr,
                                std::span<const KnownPair> known,
                                std::uint64_t /*seed*/, std::size_t cap) {
  const ExplicitStructure& a = *a_ptr;
  if (a.kind() != StructureKind::group) {
    throw ArgumentError("group attack needs a group, got " + a.name());
  }
  if (a.order() > cap) {
    throw ArgumentError(a.name() + " has order " + std::to_string(a.order()) +
                        " above the cap " + std::to_string(cap));
  }
  const BudgetMeter meter(*x);
  AttackReport report;
  report.structure = a.name();
  report.known_pairs_used = known.size();
  if (x->kind() != StructureKind::group) {
    return failed(std::move(report), Outcome::wrong_structure, "X is not a group box",
                  meter);
  }
  for (const auto& kp : known) {
    if (kp.plain >= a.order()) throw ArgumentError("known plaintext out of range");
  }

  std::string why;
  auto index = enumerate_box(*x, a.order(), 64, why);
  if (!index) return failed(std::move(report), Outcome::wrong_structure, why, meter);
  auto xg = std::make_shared<EnumeratedGroup>(x, std::move(*index));
  const FiniteGroupView x_view = view_of(*xg);

  std::vector<std::size_t> beta_map;
  for_each_isomorphism(a, x_view, {}, [&](const std::vector<std::size_t>& m) {
    beta_map = m;
    return false;
  });
  if (beta_map.empty()) {
    return failed(std::move(report), Outcome::wrong_structure,
                  "X is not isomorphic to " + a.name(), meter);
  }
  auto alpha_plain = std::make_shared<std::vector<Index>>(a.order());
  for (std::size_t i = 0; i < beta_map.size(); ++i) {
    (*alpha_plain)[beta_map[i]] = static_cast<Index>(i);
  }

  std::vector<MapConstraint> constraints;
  for (const auto& kp : known) {
    const auto pos = xg->index_of(kp.cipher);
    if (!pos) {
      return failed(std::move(report), Outcome::recognition_inconsistency,
                    "known ciphertext outside X", meter);
    }
    constraints.emplace_back(kp.plain, (*alpha_plain)[*pos]);
  }

  const FiniteGroupView a_view = view_of(a);
  AttackResult result;
  for_each_isomorphism(a, a_view, constraints, [&](const std::vector<std::size_t>& m) {
    if (result.survivors.size() == kSurvivorLimit) {
      report.survivors_truncated = true;
      return false;
    }
    result.survivors.push_back(group_hypothesis(a, m));
    report.survivors.push_back(result.survivors.back().description);
    return true;
  });
  for (std::size_t prefix = 0; prefix <= constraints.size(); ++prefix) {
    if (count_isomorphisms(a, a_view, std::span(constraints).first(prefix), 2) == 1) {
      report.known_pairs_needed = prefix;
      break;
    }
  }

  if (result.survivors.empty()) {
    report.outcome = Outcome::recognition_inconsistency;
    report.detail = "no automorphism of " + a.name() + " matches the known pairs";
  } else if (result.survivors.size() > 1) {
    report.outcome = Outcome::insufficient_plaintext;
    report.detail = (report.survivors_truncated ? "more than " : "") +
                    std::to_string(result.survivors.size()) + " automorphisms survive";
  } else {
    report.outcome = Outcome::success;
    report.delta = result.survivors.front().description;
    std::vector<CryptoElement> beta(a.order());
    for (std::size_t i = 0; i < beta.size(); ++i) beta[i] = xg->element(beta_map[i]);
    result.cipher.emplace(
        [xg, alpha_plain](const CryptoElement& c) -> std::optional<Index> {
          if (auto pos = xg->index_of(c)) return (*alpha_plain)[*pos];
          return std::nullopt;
        },
        std::move(beta), result.survivors.front());
  }
  report.budget = meter.report();
  result.report = std::move(report);
  return result;
}

VerificationSummary verify_recovery(const RecoveredCipher& cipher,
                                    const EncryptionOracle& oracle) {
  VerificationSummary s;
  const std::size_t n = oracle.plain().order();
  for (Index a = 0; a < n; ++a) {
    ++s.checked;
    const CryptoElement c = oracle.encrypt(a);
    bool ok = false;
    try {
      const CryptoElement& forged = cipher.encrypt(a);
      ok = cipher.decrypt(c) == a && forged == c && oracle.decrypt_hidden(forged) == a;
    } catch (const ArgumentError&) {
      ok = false;
    }
    if (!ok) ++s.mismatches;
  }
  return s;
}

void verify_into(AttackResult& result, const EncryptionOracle& oracle) {
  if (!result.cipher) return;
  result.report.verification = verify_recovery(*result.cipher, oracle);
}

bool verify_encrypts(BoxPtr x, ExplicitPtr a_ptr, std::size_t confidence,
                     std::uint64_t seed, std::size_t cap) {
  const ExplicitStructure& a = *a_ptr;
  if (x->kind() != a.kind()) return false;
  if (const auto* f = dynamic_cast<const FiniteField*>(&a)) {
    try {
      recognize_field(x, f->spec(), seed);
      return true;
    } catch (const Error&) {
      return false;
    }
  }
  if (a.kind() != StructureKind::group) {
    throw ArgumentError("verification supports groups and fields");
  }
  if (a.order() <= cap) {
    std::string why;
    auto index = enumerate_box(*x, a.order(), std::max<std::size_t>(64, confidence), why);
    if (!index) return false;
    EnumeratedGroup xg(x, std::move(*index));
    const FiniteGroupView view = view_of(xg);
    return count_isomorphisms(a, view, {}, 1) == 1;
  }
  const auto& gens = a.generators();
  if (gens.size() != 1 || a.element_order(gens.front()) != a.order()) {
    throw ArgumentError(a.name() + " is neither enumerable nor cyclic");
  }
  // Every element of a cyclic group of order m satisfies x^m = 1.
  const auto m = static_cast<std::int64_t>(a.order());
  const CryptoElement e = identity_element(*x);
  for (std::size_t i = 0; i < confidence; ++i) {
    if (!x->equal(power(*x, x->sample(), m), e)) return false;
  }
  return true;
}

namespace {

std::size_t residue_bytes(std::uint64_t n) {
  std::size_t bits = 0;
  for (std::uint64_t v = n - 1; v != 0; v >>= 1) ++bits;
  return std::max<std::size_t>(1, (bits + 7) / 8);
}

std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t n) {
  std::int64_t t = 0, new_t = 1;
  auto r = static_cast<std::int64_t>(n), new_r = static_cast<std::int64_t>(a);
  while (new_r != 0) {
    const std::int64_t q = r / new_r;
    t = std::exchange(new_t, t - q * new_t);
    r = std::exchange(new_r, r - q * new_r);
  }
  if (r != 1) throw ArgumentError("residue is not a unit");
  return static_cast<std::uint64_t>(t < 0 ? t + static_cast<std::int64_t>(n) : t);
}

}  // namespace

ResidueUnitsBox::ResidueUnitsBox(std::uint64_t n, std::uint64_t seed)
    : BlackBoxStructure(StructureSignature::group(), residue_bytes(n), seed), n_(n) {
  if (n < 2 || n >= (std::uint64_t{1} << 32)) {
    throw ArgumentError("units box needs 2 <= n < 2^32");
  }
}

CryptoElement ResidueUnitsBox::from_residue(std::uint64_t r) const {
  r %= n_;
  if (std::gcd(r, n_) != 1) throw ArgumentError("residue is not a unit");
  return CryptoElement::from_uint(r, byte_length());
}

std::string ResidueUnitsBox::sampler_provenance() const {
  return "uniform over units of Z/" + std::to_string(n_) + "Z by rejection";
}

BoxPtr ResidueUnitsBox::clone(std::uint64_t seed) const {
  return std::make_shared<ResidueUnitsBox>(n_, seed);
}

CryptoElement ResidueUnitsBox::do_sample() {
  for (;;) {
    const std::uint64_t r = uniform_below(rng(), n_);
    if (std::gcd(r, n_) == 1) return CryptoElement::from_uint(r, byte_length());
  }
}

CryptoElement ResidueUnitsBox::do_apply(Op op,
                                        std::span<const CryptoElement* const> args) {
  std::uint64_t r[2] = {0, 0};
  for (std::size_t i = 0; i < args.size(); ++i) {
    r[i] = args[i]->to_uint();
    if (r[i] >= n_) throw ArgumentError("string is not a residue mod " + std::to_string(n_));
  }
  switch (op) {
    case Op::identity: return from_residue(1);
    case Op::product: return CryptoElement::from_uint(r[0] * r[1] % n_, byte_length());
    case Op::inverse: return from_residue(inverse_mod(r[0], n_));
    default: throw SignatureError("units box has no " + std::string(to_string(op)));
  }
}

MillerRabinResult miller_rabin_bb(std::uint64_t n, std::size_t rounds,
                                  std::uint64_t seed) {
  if (n < 3 || n % 2 == 0 || n >= (std::uint64_t{1} << 32)) {
    throw ArgumentError("Miller-Rabin needs odd 3 <= n < 2^32, got " + std::to_string(n));
  }
  auto box = std::make_shared<ResidueUnitsBox>(n, seed);
  const BudgetMeter meter(*box);
  std::uint64_t d = n - 1;
  std::size_t s = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++s;
  }
  const CryptoElement one = box->apply(Op::identity);
  const CryptoElement minus_one = box->from_residue(n - 1);

  MillerRabinResult out;
  for (std::size_t round = 0; round < rounds; ++round) {
    ++out.rounds_run;
    const CryptoElement w = box->sample();
    CryptoElement y = power(*box, w, static_cast<std::int64_t>(d));
    if (box->equal(y, one) || box->equal(y, minus_one)) continue;
    bool passed = false;
    for (std::size_t i = 1; i < s && !passed; ++i) {
      y = box->apply(Op::product, y, y);
      if (box->equal(y, minus_one)) passed = true;
      if (box->equal(y, one)) break;
    }
    if (!passed) {
      out.verdict = Verdict::composite;
      out.witness = box->residue(w);
      out.error_bound = 0.0;
      out.budget = meter.report();
      return out;
    }
  }
  out.verdict = Verdict::probably_prime;
  out.error_bound = std::pow(4.0, -static_cast<double>(rounds));
  out.budget = meter.report();
  return out;
}

}  // namespace bba
