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

#include "bba/constructions.hpp"

#include <array>
#include <cmath>

#include "bba/explicit.hpp"

namespace bba {

namespace {

void require_group(const BlackBoxStructure& box, const char* what) {
  if (box.kind() != StructureKind::group) {
    throw SignatureError(std::string(what) + " requires group boxes, got a " +
                         std::string(to_string(box.kind())) + " box");
  }
}

CryptoElement group_product(BlackBoxStructure& box, const CryptoElement& a,
                            const CryptoElement& b) {
  return box.apply(Op::product, a, b);
}

}  // namespace

// ---------------------------------------------------------------------------
// Direct product

DirectProductBox::DirectProductBox(BoxPtr left, BoxPtr right, std::uint64_t seed)
    : BlackBoxStructure(left->signature(), left->byte_length() + right->byte_length(),
                        seed),
      left_(std::move(left)),
      right_(std::move(right)) {
  if (!(left_->signature() == right_->signature())) {
    throw SignatureError("direct product of a " +
                         std::string(to_string(left_->kind())) + " and a " +
                         std::string(to_string(right_->kind())) + " box");
  }
  require_group(*left_, "direct_product");
}

CryptoElement DirectProductBox::pair(const CryptoElement& x,
                                     const CryptoElement& y) const {
  return CryptoElement::concat(x, y);
}

CryptoElement DirectProductBox::first(const CryptoElement& z) const {
  return z.slice(0, left_->byte_length());
}

CryptoElement DirectProductBox::second(const CryptoElement& z) const {
  return z.slice(left_->byte_length(), right_->byte_length());
}

bool DirectProductBox::bitwise_equality() const {
  return left_->bitwise_equality() && right_->bitwise_equality();
}

std::string DirectProductBox::sampler_provenance() const {
  return "independent pair of (" + left_->sampler_provenance() + ", " +
         right_->sampler_provenance() + ")";
}

BoxPtr DirectProductBox::clone(std::uint64_t seed) const {
  return std::make_shared<DirectProductBox>(left_->clone(derive_seed(seed, 1)),
                                            right_->clone(derive_seed(seed, 2)),
                                            seed);
}

CryptoElement DirectProductBox::do_sample() {
  return pair(left_->sample(), right_->sample());
}

CryptoElement DirectProductBox::do_apply(
    Op op, std::span<const CryptoElement* const> args) {
  std::array<CryptoElement, 2> xs, ys;
  std::array<const CryptoElement*, 2> xp{}, yp{};
  for (std::size_t i = 0; i < args.size(); ++i) {
    xs[i] = first(*args[i]);
    ys[i] = second(*args[i]);
    xp[i] = &xs[i];
    yp[i] = &ys[i];
  }
  const std::span<const CryptoElement* const> xa(xp.data(), args.size());
  const std::span<const CryptoElement* const> ya(yp.data(), args.size());
  return pair(left_->apply(op, xa), right_->apply(op, ya));
}

bool DirectProductBox::do_equal(const CryptoElement& x, const CryptoElement& y) {
  return left_->equal(first(x), first(y)) && right_->equal(second(x), second(y));
}

std::shared_ptr<DirectProductBox> direct_product(BoxPtr x, BoxPtr y,
                                                 std::uint64_t seed) {
  return std::make_shared<DirectProductBox>(std::move(x), std::move(y), seed);
}

// ---------------------------------------------------------------------------
// Homomorphic image

HomomorphicImageBox::HomomorphicImageBox(BoxPtr parent, Congruence eq,
                                         std::uint64_t seed)
    : BlackBoxStructure(parent->signature(), parent->byte_length(), seed),
      parent_(std::move(parent)),
      eq_(std::move(eq)) {}

std::string HomomorphicImageBox::sampler_provenance() const {
  return "parent sampler (" + parent_->sampler_provenance() + ")";
}

BoxPtr HomomorphicImageBox::clone(std::uint64_t seed) const {
  return std::make_shared<HomomorphicImageBox>(parent_->clone(derive_seed(seed, 1)),
                                               eq_, seed);
}

std::shared_ptr<HomomorphicImageBox> homomorphic_image(BoxPtr x, Congruence eq,
                                                       std::uint64_t seed,
                                                       std::size_t pool) {
  BlackBoxStructure& box = *x;
  std::vector<CryptoElement> elems;
  for (const auto& spec : box.signature().operations()) {
    if (spec.arity == 0) elems.push_back(box.apply(spec.op));
  }
  for (std::size_t i = 0; i < pool; ++i) elems.push_back(box.sample());
  Rng rng(derive_seed(seed, 7));
  const auto violation = [](const std::string& what) {
    throw ContractViolationError("supplied equality is not a congruence: " + what);
  };
  for (const auto& a : elems) {
    if (!eq(a, a)) violation("not reflexive");
  }
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (std::size_t j = 0; j < elems.size(); ++j) {
      if (i == j || !eq(elems[i], elems[j])) continue;
      const CryptoElement& a = elems[i];
      const CryptoElement& b = elems[j];
      if (!eq(b, a)) violation("not symmetric");
      const CryptoElement& c = elems[uniform_below(rng, elems.size())];
      for (const auto& spec : box.signature().operations()) {
        try {
          if (spec.arity == 1) {
            if (!eq(box.apply(spec.op, a), box.apply(spec.op, b))) {
              violation(std::string(to_string(spec.op)));
            }
          } else if (spec.arity == 2) {
            if (!eq(box.apply(spec.op, a, c), box.apply(spec.op, b, c)) ||
                !eq(box.apply(spec.op, c, a), box.apply(spec.op, c, b))) {
              violation(std::string(to_string(spec.op)));
            }
          }
        } catch (const PartialityError&) {
          // inverse of (an element congruent to) zero
        }
      }
    }
  }
  return std::make_shared<HomomorphicImageBox>(std::move(x), std::move(eq), seed);
}

// ---------------------------------------------------------------------------
// Generated subgroup

GeneratedSubgroupBox::GeneratedSubgroupBox(BoxPtr parent,
                                           std::vector<CryptoElement> gens,
                                           std::uint64_t seed)
    : BlackBoxStructure(parent->signature(), parent->byte_length(), seed),
      parent_(std::move(parent)),
      gens_(std::move(gens)),
      pr_(pr_init(parent_, gens_, 0, kDefaultBurnIn, derive_seed(seed, 3))) {
  require_group(*parent_, "generated_subgroup");
}

std::string GeneratedSubgroupBox::sampler_provenance() const {
  return "product replacement over " + std::to_string(gens_.size()) +
         " generators";
}

BoxPtr GeneratedSubgroupBox::clone(std::uint64_t seed) const {
  return std::make_shared<GeneratedSubgroupBox>(parent_, gens_, seed);
}

std::shared_ptr<GeneratedSubgroupBox> generated_subgroup(
    BoxPtr x, std::vector<CryptoElement> gens, std::uint64_t seed) {
  if (gens.empty()) throw ArgumentError("generated_subgroup needs generators");
  return std::make_shared<GeneratedSubgroupBox>(std::move(x), std::move(gens), seed);
}

// ---------------------------------------------------------------------------
// Graph subgroups

namespace {

std::vector<CryptoElement> pack_pairs(const DirectProductBox& ambient,
                                      const std::vector<ElementPair>& pairs) {
  std::vector<CryptoElement> out;
  out.reserve(pairs.size());
  for (const auto& [x, y] : pairs) out.push_back(ambient.pair(x, y));
  return out;
}

}  // namespace

GraphSubgroup::GraphSubgroup(BoxPtr x, BoxPtr y, std::vector<ElementPair> pairs,
                             std::uint64_t seed)
    : domain_(std::move(x)),
      codomain_(std::move(y)),
      pairs_(std::move(pairs)),
      cache_(std::make_shared<Cache>()) {
  if (pairs_.empty()) throw ArgumentError("graph_subgroup needs at least one pair");
  ambient_ = direct_product(domain_, codomain_, derive_seed(seed, 1));
  box_ = generated_subgroup(ambient_, pack_pairs(*ambient_, pairs_),
                            derive_seed(seed, 2));
}

ElementPair GraphSubgroup::sample() {
  const CryptoElement z = box_->sample();
  return {ambient_->first(z), ambient_->second(z)};
}

const ElementIndex& GraphSubgroup::members(std::size_t cap) const {
  if (!cache_->members) {
    const auto gens = pack_pairs(*ambient_, pairs_);
    cache_->members.emplace(close_under(*ambient_, gens, cap));
  }
  return *cache_->members;
}

bool GraphSubgroup::contains(const CryptoElement& x, const CryptoElement& y,
                             std::size_t cap) const {
  return members(cap).find(ambient_->pair(x, y)).has_value();
}

std::optional<CryptoElement> GraphSubgroup::image(const CryptoElement& x,
                                                  std::size_t cap) const {
  if (!cache_->firsts) {
    const ElementIndex& all = members(cap);
    ElementIndex firsts(*domain_);
    std::vector<CryptoElement> seconds;
    for (const auto& z : all.elements()) {
      if (firsts.insert(ambient_->first(z)).second) {
        seconds.push_back(ambient_->second(z));
      }
    }
    cache_->firsts.emplace(std::move(firsts));
    cache_->seconds = std::move(seconds);
  }
  if (auto i = cache_->firsts->find(x)) return cache_->seconds[*i];
  return std::nullopt;
}

GraphSubgroup graph_subgroup(BoxPtr x, BoxPtr y, std::vector<ElementPair> pairs,
                             std::uint64_t seed) {
  return GraphSubgroup(std::move(x), std::move(y), std::move(pairs), seed);
}

namespace {

// (x, y) and (x, y') with y != y' exist in a subgroup exactly when some
// (e, y'') with y'' != e does.
FunctionCheck exhaustive_function_check(const GraphSubgroup& g,
                                        const ElementIndex& members,
                                        bool forward) {
  BlackBoxStructure& src = forward ? *g.domain() : *g.codomain();
  BlackBoxStructure& dst = forward ? *g.codomain() : *g.domain();
  const CryptoElement e_src = identity_element(src);
  const CryptoElement e_dst = identity_element(dst);
  FunctionCheck out;
  out.exhaustive = true;
  for (const auto& z : members.elements()) {
    ++out.members_examined;
    const CryptoElement a = forward ? g.ambient()->first(z) : g.ambient()->second(z);
    const CryptoElement b = forward ? g.ambient()->second(z) : g.ambient()->first(z);
    if (src.equal(a, e_src) && !dst.equal(b, e_dst)) {
      out.holds = false;
      return out;
    }
  }
  return out;
}

FunctionCheck sampled_function_check(const std::vector<ElementPair>& samples,
                                     BlackBoxStructure& src,
                                     BlackBoxStructure& dst, bool forward) {
  FunctionCheck out;
  out.members_examined = samples.size();
  std::size_t tests = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (std::size_t j = i + 1; j < samples.size(); ++j) {
      const auto& [xi, yi] = samples[i];
      const auto& [xj, yj] = samples[j];
      const CryptoElement& ai = forward ? xi : yi;
      const CryptoElement& aj = forward ? xj : yj;
      if (!src.equal(ai, aj)) continue;
      ++tests;
      if (!dst.equal(forward ? yi : xi, forward ? yj : xj)) {
        out.holds = false;
        out.confidence = 1.0;
        return out;
      }
    }
  }
  out.confidence = 1.0 - std::pow(2.0, -static_cast<double>(tests));
  return out;
}

}  // namespace

FunctionCheck check_function(const GraphSubgroup& g, std::size_t trials,
                             Direction direction, std::size_t cap) {
  if (direction == Direction::unset) direction = Direction::forward;
  const bool fwd = direction == Direction::forward || direction == Direction::both;
  const bool bwd = direction == Direction::backward || direction == Direction::both;
  const ElementIndex* members = nullptr;
  try {
    members = &g.members(cap);
  } catch (const CapExceededError&) {
    members = nullptr;
  }
  if (members != nullptr) {
    FunctionCheck out;
    out.exhaustive = true;
    if (fwd) out = exhaustive_function_check(g, *members, true);
    if (out.holds && bwd) out = exhaustive_function_check(g, *members, false);
    return out;
  }
  GraphSubgroup sampler = g;
  std::vector<ElementPair> samples;
  samples.reserve(trials);
  for (std::size_t i = 0; i < trials; ++i) samples.push_back(sampler.sample());
  FunctionCheck out;
  if (fwd) out = sampled_function_check(samples, *g.domain(), *g.codomain(), true);
  if (out.holds && bwd) {
    const FunctionCheck back =
        sampled_function_check(samples, *g.codomain(), *g.domain(), false);
    out.holds = back.holds;
    out.confidence = std::min(out.confidence, back.confidence);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Proto-involutions

ProtoInvolution ProtoInvolution::validate(GraphSubgroup graph, std::size_t samples,
                                          std::size_t cap) {
  if (graph.domain() != graph.codomain()) {
    throw ContractViolationError("a proto-involution lives in X x X");
  }
  BlackBoxStructure& x = *graph.domain();
  const FunctionCheck fn = check_function(graph, samples, Direction::both, cap);
  if (!fn.holds) {
    throw ContractViolationError("graph is not the graph of a bijection");
  }
  if (fn.exhaustive) {
    const ElementIndex& members = graph.members(cap);
    for (const auto& z : members.elements()) {
      const CryptoElement swapped =
          graph.ambient()->pair(graph.ambient()->second(z), graph.ambient()->first(z));
      if (!members.find(swapped)) {
        throw ContractViolationError("encoded automorphism is not an involution");
      }
    }
    graph.set_direction(Direction::both);
    return ProtoInvolution(std::move(graph), true);
  }
  // phi(x_i) = x_j  =>  phi(x_j) = x_i for involutive phi.
  std::vector<ElementPair> drawn;
  for (std::size_t i = 0; i < samples; ++i) drawn.push_back(graph.sample());
  for (const auto& [xi, yi] : drawn) {
    for (const auto& [xj, yj] : drawn) {
      if (x.equal(yi, xj) && !x.equal(yj, xi)) {
        throw ContractViolationError("encoded automorphism is not an involution");
      }
    }
  }
  graph.set_direction(Direction::both);
  return ProtoInvolution(std::move(graph), false);
}

std::variant<ProtoInvolution, GraphSubgroup> conjugation_graph(
    BoxPtr x_box, const CryptoElement& x, std::span<const CryptoElement> gens,
    std::uint64_t seed) {
  BlackBoxStructure& box = *x_box;
  require_group(box, "conjugation_graph");
  if (gens.empty()) throw ArgumentError("conjugation_graph needs generators");
  const CryptoElement x_inv = box.apply(Op::inverse, x);
  std::vector<ElementPair> pairs;
  pairs.reserve(gens.size());
  for (const auto& g : gens) {
    pairs.emplace_back(g, group_product(box, group_product(box, x_inv, g), x));
  }
  GraphSubgroup graph(x_box, x_box, std::move(pairs), seed);
  const CryptoElement x2 = group_product(box, x, x);
  bool central = true;
  for (const auto& g : gens) {
    if (!box.equal(group_product(box, x2, g), group_product(box, g, x2))) {
      central = false;
      break;
    }
  }
  if (!central) return graph;
  graph.set_direction(Direction::both);
  return ProtoInvolution::validate(std::move(graph));
}

ProtoInvolution amalgamate(std::span<const ProtoInvolution> parts,
                           std::uint64_t seed, std::size_t cap) {
  if (parts.empty()) throw ArgumentError("amalgamate needs at least one part");
  const BoxPtr& x = parts.front().domain();
  std::vector<ElementPair> pairs;
  for (const auto& part : parts) {
    if (part.domain() != x) {
      throw ArgumentError("amalgamated proto-involutions must share one box");
    }
    const auto& p = part.graph().pairs();
    pairs.insert(pairs.end(), p.begin(), p.end());
  }
  GraphSubgroup graph(x, x, std::move(pairs), seed);
  const FunctionCheck fn =
      check_function(graph, kDefaultValidationSamples, Direction::both, cap);
  if (!fn.holds) {
    throw InconsistencyError(
        "the local involutions do not extend to one automorphism");
  }
  try {
    return ProtoInvolution::validate(std::move(graph), kDefaultValidationSamples, cap);
  } catch (const ContractViolationError& e) {
    throw InconsistencyError(std::string("amalgam is not an involution: ") + e.what());
  }
}

CryptoElement reify(BoxPtr x_box, const ProtoInvolution& f, std::size_t cap) {
  BlackBoxStructure& box = *x_box;
  require_group(box, "reify");
  std::vector<CryptoElement> gens;
  for (const auto& [a, b] : f.graph().pairs()) {
    gens.push_back(a);
    gens.push_back(b);
  }
  // Candidates outside the span of F's generators live elsewhere in X.
  for (int i = 0; i < 8; ++i) gens.push_back(box.sample());
  const ElementIndex candidates = close_under(box, gens, cap);
  const CryptoElement e = identity_element(box);
  bool inner_but_not_involution = false;
  for (const auto& t : candidates.elements()) {
    const CryptoElement t_inv = box.apply(Op::inverse, t);
    bool matches = true;
    for (const auto& [g, image] : f.graph().pairs()) {
      if (!box.equal(group_product(box, group_product(box, t_inv, g), t), image)) {
        matches = false;
        break;
      }
    }
    if (!matches) continue;
    if (box.equal(group_product(box, t, t), e)) return t;
    inner_but_not_involution = true;
  }
  if (inner_but_not_involution) {
    throw NotInnerError(
        "automorphism is inner but no involution of the box induces it");
  }
  throw NotInnerError("no element of the box induces the automorphism by conjugation");
}

// ---------------------------------------------------------------------------
// Semidirect product

SemidirectProductBox::SemidirectProductBox(BoxPtr normal, BoxPtr acting,
                                           Action action, std::uint64_t seed)
    : BlackBoxStructure(StructureSignature::group(),
                        normal->byte_length() + acting->byte_length(), seed),
      normal_(std::move(normal)),
      acting_(std::move(acting)),
      action_(std::move(action)) {
  require_group(*normal_, "semidirect_product");
  require_group(*acting_, "semidirect_product");
}

CryptoElement SemidirectProductBox::pair(const CryptoElement& x,
                                         const CryptoElement& y) const {
  return CryptoElement::concat(x, y);
}

CryptoElement SemidirectProductBox::first(const CryptoElement& z) const {
  return z.slice(0, normal_->byte_length());
}

CryptoElement SemidirectProductBox::second(const CryptoElement& z) const {
  return z.slice(normal_->byte_length(), acting_->byte_length());
}

bool SemidirectProductBox::bitwise_equality() const {
  return normal_->bitwise_equality() && acting_->bitwise_equality();
}

std::string SemidirectProductBox::sampler_provenance() const {
  return "independent pair of (" + normal_->sampler_provenance() + ", " +
         acting_->sampler_provenance() + ")";
}

BoxPtr SemidirectProductBox::clone(std::uint64_t seed) const {
  return std::make_shared<SemidirectProductBox>(normal_->clone(derive_seed(seed, 1)),
                                                acting_->clone(derive_seed(seed, 2)),
                                                action_, seed);
}

CryptoElement SemidirectProductBox::do_sample() {
  return pair(normal_->sample(), acting_->sample());
}

CryptoElement SemidirectProductBox::do_apply(
    Op op, std::span<const CryptoElement* const> args) {
  BlackBoxStructure& nx = *normal_;
  BlackBoxStructure& ay = *acting_;
  switch (op) {
    case Op::identity:
      return pair(nx.apply(Op::identity), ay.apply(Op::identity));
    case Op::inverse: {
      const CryptoElement x = first(*args[0]);
      const CryptoElement y = second(*args[0]);
      return pair(action_(nx.apply(Op::inverse, x), y), ay.apply(Op::inverse, y));
    }
    case Op::product: {
      const CryptoElement x1 = first(*args[0]);
      const CryptoElement y1 = second(*args[0]);
      const CryptoElement x2 = first(*args[1]);
      const CryptoElement y2 = second(*args[1]);
      const CryptoElement twisted = action_(x2, ay.apply(Op::inverse, y1));
      return pair(nx.apply(Op::product, x1, twisted), ay.apply(Op::product, y1, y2));
    }
    default:
      throw SignatureError("semidirect product does not declare " +
                           std::string(to_string(op)));
  }
}

bool SemidirectProductBox::do_equal(const CryptoElement& x,
                                    const CryptoElement& y) {
  return normal_->equal(first(x), first(y)) && acting_->equal(second(x), second(y));
}

std::shared_ptr<SemidirectProductBox> semidirect_product(BoxPtr x, BoxPtr y,
                                                         Action action,
                                                         std::uint64_t seed,
                                                         std::size_t samples) {
  require_group(*x, "semidirect_product");
  require_group(*y, "semidirect_product");
  for (std::size_t i = 0; i < samples; ++i) {
    const CryptoElement x1 = x->sample();
    const CryptoElement x2 = x->sample();
    const CryptoElement y1 = y->sample();
    const CryptoElement y2 = y->sample();
    const CryptoElement lhs = action(group_product(*x, x1, x2), y1);
    const CryptoElement rhs = group_product(*x, action(x1, y1), action(x2, y1));
    if (!x->equal(lhs, rhs)) {
      throw ContractViolationError("action does not preserve products");
    }
    if (!x->equal(action(action(x1, y1), y2), action(x1, group_product(*y, y1, y2)))) {
      throw ContractViolationError("action is not a right action");
    }
  }
  return std::make_shared<SemidirectProductBox>(std::move(x), std::move(y),
                                                std::move(action), seed);
}

std::shared_ptr<SemidirectProductBox> augment(const ProtoInvolution& f,
                                              std::uint64_t seed) {
  const GraphSubgroup& graph = f.graph();
  BoxPtr f_box = graph.box()->clone(derive_seed(seed, 1));
  BoxPtr flip = plain_box(make_cyclic_group(2), derive_seed(seed, 2));
  const CryptoElement flip_identity = identity_element(*flip);
  std::shared_ptr<DirectProductBox> ambient = graph.ambient();
  Action swap = [ambient, flip, flip_identity](const CryptoElement& z,
                                              const CryptoElement& y) {
    if (flip->equal(y, flip_identity)) return z;
    return ambient->pair(ambient->second(z), ambient->first(z));
  };
  return semidirect_product(std::move(f_box), std::move(flip), std::move(swap),
                            seed);
}

}  // namespace bba
