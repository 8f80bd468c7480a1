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

// Boxes built from other boxes. None of these look inside their parents:
// every operation is a composition of the parents' oracles.

#ifndef BBA_CONSTRUCTIONS_HPP_
#define BBA_CONSTRUCTIONS_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "bba/blackbox.hpp"
#include "bba/sampling.hpp"

namespace bba {

inline constexpr std::size_t kDefaultMemberCap = 100000;
inline constexpr std::size_t kDefaultValidationSamples = 200;

// Pairs (x, y) stored as the concatenation of the two strings.
class DirectProductBox final : public BlackBoxStructure {
 public:
  DirectProductBox(BoxPtr left, BoxPtr right, std::uint64_t seed);

  CryptoElement pair(const CryptoElement& x, const CryptoElement& y) const;
  CryptoElement first(const CryptoElement& z) const;
  CryptoElement second(const CryptoElement& z) const;
  const BoxPtr& left() const { return left_; }
  const BoxPtr& right() const { return right_; }

  bool bitwise_equality() const override;
  std::string sampler_provenance() const override;
  BoxPtr clone(std::uint64_t seed) const override;

 protected:
  CryptoElement do_sample() override;
  CryptoElement do_apply(Op op,
                         std::span<const CryptoElement* const> args) override;
  bool do_equal(const CryptoElement& x, const CryptoElement& y) override;

 private:
  BoxPtr left_, right_;
};

std::shared_ptr<DirectProductBox> direct_product(BoxPtr x, BoxPtr y,
                                                 std::uint64_t seed = 0);

using Congruence =
    std::function<bool(const CryptoElement&, const CryptoElement&)>;

// Same strings and operations as the parent, equality replaced by a
// congruence.
class HomomorphicImageBox final : public BlackBoxStructure {
 public:
  HomomorphicImageBox(BoxPtr parent, Congruence eq, std::uint64_t seed);

  const BoxPtr& parent() const { return parent_; }
  bool bitwise_equality() const override { return false; }
  std::string sampler_provenance() const override;
  BoxPtr clone(std::uint64_t seed) const override;

 protected:
  CryptoElement do_sample() override { return parent_->sample(); }
  CryptoElement do_apply(Op op,
                         std::span<const CryptoElement* const> args) override {
    return parent_->apply(op, args);
  }
  bool do_equal(const CryptoElement& x, const CryptoElement& y) override {
    return eq_(x, y);
  }

 private:
  BoxPtr parent_;
  Congruence eq_;
};

// Validates eq on a pool of samples (reflexivity and compatibility with every
// declared operation) and throws ContractViolationError on a violation.
std::shared_ptr<HomomorphicImageBox> homomorphic_image(
    BoxPtr x, Congruence eq, std::uint64_t seed = 0,
    std::size_t pool = 32);

// Subgroup <gens> of a group box, sampled by product replacement.
class GeneratedSubgroupBox final : public BlackBoxStructure {
 public:
  GeneratedSubgroupBox(BoxPtr parent, std::vector<CryptoElement> gens,
                       std::uint64_t seed);

  const BoxPtr& parent() const { return parent_; }
  const std::vector<CryptoElement>& generators() const { return gens_; }
  bool bitwise_equality() const override { return parent_->bitwise_equality(); }
  std::string sampler_provenance() const override;
  BoxPtr clone(std::uint64_t seed) const override;

 protected:
  CryptoElement do_sample() override { return pr_.next(); }
  CryptoElement do_apply(Op op,
                         std::span<const CryptoElement* const> args) override {
    return parent_->apply(op, args);
  }
  bool do_equal(const CryptoElement& x, const CryptoElement& y) override {
    return parent_->equal(x, y);
  }

 private:
  BoxPtr parent_;
  std::vector<CryptoElement> gens_;
  PRState pr_;
};

std::shared_ptr<GeneratedSubgroupBox> generated_subgroup(
    BoxPtr x, std::vector<CryptoElement> gens, std::uint64_t seed = 0);

// forward: X -> Y, backward: Y -> X.
enum class Direction { unset, forward, backward, both };

struct FunctionCheck {
  bool holds = true;
  bool exhaustive = false;
  std::size_t members_examined = 0;
  // 1 for exhaustive checks; 1 - 2^-tests for sampled ones, where each test
  // is a pair of samples with equal first components.
  double confidence = 1.0;
};

using ElementPair = std::pair<CryptoElement, CryptoElement>;

// Z = <(x_1,y_1), ..., (x_k,y_k)> <= X x Y. Copies share their member cache.
class GraphSubgroup {
 public:
  GraphSubgroup(BoxPtr x, BoxPtr y, std::vector<ElementPair> pairs,
                std::uint64_t seed);

  const BoxPtr& domain() const { return domain_; }
  const BoxPtr& codomain() const { return codomain_; }
  const std::shared_ptr<DirectProductBox>& ambient() const { return ambient_; }
  const std::shared_ptr<GeneratedSubgroupBox>& box() const { return box_; }
  const std::vector<ElementPair>& pairs() const { return pairs_; }

  Direction direction() const { return direction_; }
  void set_direction(Direction d) { direction_ = d; }

  // A random member: x with its image already attached.
  ElementPair sample();

  // Exhaustive member list of Z in the ambient product; throws
  // CapExceededError above cap. Cached.
  const ElementIndex& members(std::size_t cap = kDefaultMemberCap) const;
  bool contains(const CryptoElement& x, const CryptoElement& y,
                std::size_t cap = kDefaultMemberCap) const;
  // y with (x, y) in Z, if any (first match on enumerable Z).
  std::optional<CryptoElement> image(const CryptoElement& x,
                                     std::size_t cap = kDefaultMemberCap) const;

 private:
  struct Cache {
    std::optional<ElementIndex> members;
    std::optional<ElementIndex> firsts;
    std::vector<CryptoElement> seconds;
  };

  BoxPtr domain_, codomain_;
  std::shared_ptr<DirectProductBox> ambient_;
  std::shared_ptr<GeneratedSubgroupBox> box_;
  std::vector<ElementPair> pairs_;
  Direction direction_ = Direction::unset;
  std::shared_ptr<Cache> cache_;
};

GraphSubgroup graph_subgroup(BoxPtr x, BoxPtr y, std::vector<ElementPair> pairs,
                             std::uint64_t seed = 0);

// Whether Z is the graph of a function in the given direction. Exhaustive
// when Z is enumerable within cap, otherwise by `trials` samples.
FunctionCheck check_function(const GraphSubgroup& g,
                             std::size_t trials = kDefaultValidationSamples,
                             Direction direction = Direction::forward,
                             std::size_t cap = kDefaultMemberCap);

// A graph subgroup of X x X encoding an involutive automorphism.
class ProtoInvolution {
 public:
  // Checks function-ness both ways and membership symmetry
  // (x, x') in F => (x', x) in F. Exhaustive when enumerable, otherwise on
  // `samples` sampled members. Throws ContractViolationError.
  static ProtoInvolution validate(GraphSubgroup graph,
                                  std::size_t samples = kDefaultValidationSamples,
                                  std::size_t cap = kDefaultMemberCap);

  const GraphSubgroup& graph() const { return graph_; }
  const BoxPtr& domain() const { return graph_.domain(); }
  std::optional<CryptoElement> image(const CryptoElement& x,
                                     std::size_t cap = kDefaultMemberCap) const {
    return graph_.image(x, cap);
  }
  bool exhaustively_validated() const { return exhaustive_; }

 private:
  ProtoInvolution(GraphSubgroup graph, bool exhaustive)
      : graph_(std::move(graph)), exhaustive_(exhaustive) {}

  GraphSubgroup graph_;
  bool exhaustive_;
};

// C_x = {(y, x^-1 y x)} generated by the pairs over gens. Returned as a
// ProtoInvolution when x^2 commutes with every generator (x has order <= 2
// modulo the center), otherwise as a plain GraphSubgroup.
std::variant<ProtoInvolution, GraphSubgroup> conjugation_graph(
    BoxPtr x_box, const CryptoElement& x, std::span<const CryptoElement> gens,
    std::uint64_t seed = 0);

// F = <F_1, ..., F_k>. Throws InconsistencyError when the union is not the
// graph of a single map.
ProtoInvolution amalgamate(std::span<const ProtoInvolution> parts,
                           std::uint64_t seed = 0,
                           std::size_t cap = kDefaultMemberCap);

// An element t of order dividing 2 with t^-1 g t = phi(g) on every generating
// pair of F, found by exhaustive search over the enumerated box.
// Throws NotInnerError when no such element exists.
CryptoElement reify(BoxPtr x_box, const ProtoInvolution& f,
                    std::size_t cap = kDefaultMemberCap);

// action(x, y) = x^y, a right action of Y on X by automorphisms.
using Action = std::function<CryptoElement(const CryptoElement&, const CryptoElement&)>;

// X x| Y with (x1,y1)(x2,y2) = (x1 * x2^(y1^-1), y1 y2) and
// (x,y)^-1 = ((x^-1)^y, y^-1).
class SemidirectProductBox final : public BlackBoxStructure {
 public:
  SemidirectProductBox(BoxPtr normal, BoxPtr acting, Action action,
                       std::uint64_t seed);

  CryptoElement pair(const CryptoElement& x, const CryptoElement& y) const;
  CryptoElement first(const CryptoElement& z) const;
  CryptoElement second(const CryptoElement& z) const;
  const BoxPtr& normal() const { return normal_; }
  const BoxPtr& acting() const { return acting_; }

  bool bitwise_equality() const override;
  std::string sampler_provenance() const override;
  BoxPtr clone(std::uint64_t seed) const override;

 protected:
  CryptoElement do_sample() override;
  CryptoElement do_apply(Op op,
                         std::span<const CryptoElement* const> args) override;
  bool do_equal(const CryptoElement& x, const CryptoElement& y) override;

 private:
  BoxPtr normal_, acting_;
  Action action_;
};

// Validates on `samples` random triples that the action preserves products
// and composes as a right action; throws ContractViolationError.
std::shared_ptr<SemidirectProductBox> semidirect_product(
    BoxPtr x, BoxPtr y, Action action, std::uint64_t seed = 0,
    std::size_t samples = kDefaultValidationSamples);

// F x| {1, phi} with phi(x, x') = (x', x).
std::shared_ptr<SemidirectProductBox> augment(const ProtoInvolution& f,
                                              std::uint64_t seed = 0);

}  // namespace bba

#endif  // BBA_CONSTRUCTIONS_HPP_
