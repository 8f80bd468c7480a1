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

#include "bba/isomorphism.hpp"

#include <limits>
#include <optional>

namespace bba {

FiniteGroupView view_of(const ExplicitStructure& group) {
  if (group.kind() != StructureKind::group) {
    throw SignatureError("isomorphism search needs a group");
  }
  FiniteGroupView v;
  v.size = group.order();
  v.identity = group.identity();
  v.product = [&group](std::size_t i, std::size_t j) {
    return static_cast<std::size_t>(
        group.product(static_cast<Index>(i), static_cast<Index>(j)));
  };
  v.orders.resize(v.size);
  for (std::size_t i = 0; i < v.size; ++i) {
    v.orders[i] = group.element_order(static_cast<Index>(i));
  }
  return v;
}

FiniteGroupView view_of(EnumeratedGroup& group) {
  FiniteGroupView v;
  v.size = group.size();
  v.identity = group.identity();
  v.product = [&group](std::size_t i, std::size_t j) { return group.product(i, j); };
  v.orders.resize(v.size);
  for (std::size_t i = 0; i < v.size; ++i) v.orders[i] = group.order(i);
  return v;
}

namespace {

constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();

// BFS spanning tree of the Cayley graph of A on its generators.
struct CayleyTree {
  std::vector<Index> order;    // BFS order, identity first
  std::vector<Index> parent;   // a = parent[a] * gens[label[a]]
  std::vector<std::size_t> label;
};

CayleyTree spanning_tree(const ExplicitStructure& a, std::span<const Index> gens) {
  const std::size_t n = a.order();
  CayleyTree t;
  t.parent.assign(n, 0);
  t.label.assign(n, kUnset);
  std::vector<bool> seen(n, false);
  const Index e = a.identity();
  seen[e] = true;
  t.order.push_back(e);
  for (std::size_t head = 0; head < t.order.size(); ++head) {
    const Index x = t.order[head];
    for (std::size_t g = 0; g < gens.size(); ++g) {
      const Index y = a.product(x, gens[g]);
      if (!seen[y]) {
        seen[y] = true;
        t.parent[y] = x;
        t.label[y] = g;
        t.order.push_back(y);
      }
    }
  }
  if (t.order.size() != n) {
    throw ContractViolationError("generators of " + a.name() + " do not generate it");
  }
  return t;
}

class Search {
 public:
  Search(const ExplicitStructure& a, const FiniteGroupView& target,
         std::span<const MapConstraint> constraints,
         const std::function<bool(const std::vector<std::size_t>&)>& visit)
      : a_(a), t_(target), constraints_(constraints), visit_(visit),
        gens_(a.generators()), tree_(spanning_tree(a, gens_)) {
    const std::size_t r = gens_.size();
    gen_orders_.resize(r);
    for (std::size_t i = 0; i < r; ++i) gen_orders_[i] = a.element_order(gens_[i]);
    pair_orders_.assign(r * r, 0);
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        pair_orders_[i * r + j] = a.element_order(a.product(gens_[j], gens_[i]));
      }
    }
    pinned_.assign(r, kUnset);
    for (const auto& [x, y] : constraints_) {
      for (std::size_t i = 0; i < r; ++i) {
        if (gens_[i] == x) {
          if (pinned_[i] != kUnset && pinned_[i] != y) contradictory_ = true;
          pinned_[i] = y;
        }
      }
    }
    images_.assign(r, 0);
  }

  void run() {
    if (contradictory_ || a_.order() != t_.size) return;
    choose(0);
  }

 private:
  bool choose(std::size_t i) {
    if (i == gens_.size()) return extend();
    auto consider = [&](std::size_t c) {
      if (t_.orders[c] != gen_orders_[i]) return true;
      for (std::size_t j = 0; j < i; ++j) {
        if (t_.orders[t_.product(images_[j], c)] != pair_orders_[i * gens_.size() + j]) {
          return true;
        }
      }
      images_[i] = c;
      return choose(i + 1);
    };
    if (pinned_[i] != kUnset) return pinned_[i] < t_.size ? consider(pinned_[i]) : true;
    for (std::size_t c = 0; c < t_.size; ++c) {
      if (!consider(c)) return false;
    }
    return true;
  }

  // Extends the generator images along the spanning tree and checks every
  // Cayley edge; returns false to stop the whole search.
  bool extend() {
    const std::size_t n = a_.order();
    std::vector<std::size_t> map(n, kUnset);
    std::vector<bool> hit(t_.size, false);
    for (Index x : tree_.order) {
      const std::size_t y = tree_.label[x] == kUnset
                                ? t_.identity
                                : t_.product(map[tree_.parent[x]], images_[tree_.label[x]]);
      if (hit[y]) return true;
      hit[y] = true;
      map[x] = y;
    }
    for (Index x : tree_.order) {
      for (std::size_t g = 0; g < gens_.size(); ++g) {
        if (map[a_.product(x, gens_[g])] != t_.product(map[x], images_[g])) return true;
      }
    }
    for (const auto& [x, y] : constraints_) {
      if (map[x] != y) return true;
    }
    return visit_(map);
  }

  const ExplicitStructure& a_;
  const FiniteGroupView& t_;
  std::span<const MapConstraint> constraints_;
  const std::function<bool(const std::vector<std::size_t>&)>& visit_;
  std::vector<Index> gens_;
  CayleyTree tree_;
  std::vector<std::uint64_t> gen_orders_;
  std::vector<std::uint64_t> pair_orders_;
  std::vector<std::size_t> pinned_;
  std::vector<std::size_t> images_;
  bool contradictory_ = false;
};

}  // namespace

void for_each_isomorphism(
    const ExplicitStructure& a, const FiniteGroupView& target,
    std::span<const MapConstraint> constraints,
    const std::function<bool(const std::vector<std::size_t>&)>& visit) {
  if (a.kind() != StructureKind::group) {
    throw SignatureError("isomorphism search needs a group");
  }
  Search(a, target, constraints, visit).run();
}

std::size_t count_isomorphisms(const ExplicitStructure& a,
                               const FiniteGroupView& target,
                               std::span<const MapConstraint> constraints,
                               std::size_t limit) {
  std::size_t count = 0;
  for_each_isomorphism(a, target, constraints, [&](const std::vector<std::size_t>&) {
    return ++count < limit;
  });
  return count;
}

}  // namespace bba
