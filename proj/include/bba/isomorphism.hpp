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

// Brute-force isomorphism search between small groups given by tables.

#ifndef BBA_ISOMORPHISM_HPP_
#define BBA_ISOMORPHISM_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "bba/blackbox.hpp"
#include "bba/explicit.hpp"

namespace bba {

// A finite group on {0, ..., size-1}.
struct FiniteGroupView {
  std::size_t size = 0;
  std::size_t identity = 0;
  std::function<std::size_t(std::size_t, std::size_t)> product;
  std::vector<std::uint64_t> orders;
};

FiniteGroupView view_of(const ExplicitStructure& group);
// Queries the box for every product it needs (memoized by the group).
FiniteGroupView view_of(EnumeratedGroup& group);

// (a, t): the map must send a in A to t in the target.
using MapConstraint = std::pair<Index, std::size_t>;

// Calls visit(map) for each isomorphism A -> target satisfying every
// constraint, where map[a] is the image of a. Images of A.generators() are
// chosen among target elements of matching order and pruned by the orders of
// pairwise products; the extension to all of A is checked edge by edge on
// the Cayley graph. Stops early when visit returns false.
void for_each_isomorphism(
    const ExplicitStructure& a, const FiniteGroupView& target,
    std::span<const MapConstraint> constraints,
    const std::function<bool(const std::vector<std::size_t>&)>& visit);

// Number of isomorphisms satisfying the constraints, counting at most limit.
std::size_t count_isomorphisms(const ExplicitStructure& a,
                               const FiniteGroupView& target,
                               std::span<const MapConstraint> constraints,
                               std::size_t limit);

}  // namespace bba

#endif  // BBA_ISOMORPHISM_HPP_
