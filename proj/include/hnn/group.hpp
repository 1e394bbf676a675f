#pragma once

#include <compare>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hnn/error.hpp"

namespace hnn {

// Elements of a finite group are dense indices 0..order-1.
using Elem = int;
// A permutation of 0..n-1 in one-line notation: p[i] is the image of i.
using Perm = std::vector<int>;

struct Limits {
  int subgroup_order = 256;   // all_subgroups and friends
  int aut_order = 128;        // largest group whose Aut is enumerated
  int probe_order = 60;       // largest probe group
  int table_order = 5040;     // largest group materialized from permutations
  std::size_t max_automorphisms = 400000;
};

class Group {
 public:
  // The trivial group.
  Group();

  int order() const noexcept;
  Elem identity() const noexcept;
  Elem mul(Elem a, Elem b) const noexcept { return table_[static_cast<std::size_t>(a) * n_ + b]; }
  Elem inv(Elem a) const noexcept;
  Elem pow(Elem a, long long k) const;
  int element_order(Elem a) const noexcept;
  // x^g = g^-1 x g
  Elem conj(Elem x, Elem g) const noexcept { return mul(mul(inv(g), x), g); }
  // tau_g(x) = g x g^-1
  Elem tau(Elem g, Elem x) const noexcept { return mul(mul(g, x), inv(g)); }

  const std::string& name() const noexcept;
  const std::string& label(Elem a) const;
  // Looks up an element by label, falling back to a decimal index.
  std::optional<Elem> find(std::string_view token) const;

  // Canonical generating set, chosen greedily (largest closure gain first).
  const std::vector<Elem>& generators() const noexcept;
  const std::vector<Perm>& perm_generators() const noexcept;
  int perm_degree() const noexcept;
  bool is_abelian() const noexcept;

  bool same_law(const Group& other) const noexcept;
  bool operator==(const Group& other) const noexcept { return same_law(other); }
  const std::vector<Elem>& table() const noexcept;

  // Builds a group from a table already known to be a group law.
  static Group from_trusted_table(int order, std::vector<Elem> table, std::string name,
                                  std::vector<std::string> labels,
                                  std::vector<Perm> perm_generators = {}, int perm_degree = 0);

  struct Data;

 private:
  std::shared_ptr<const Data> d_;
  const Elem* table_ = nullptr;
  std::size_t n_ = 1;
};

class Subgroup {
 public:
  // Trivial subgroup of G.
  explicit Subgroup(const Group& G);
  // Validates that `elements` is a subgroup of G.
  static Subgroup from_elements(const Group& G, std::vector<Elem> elements);

  const Group& parent() const noexcept { return parent_; }
  int order() const noexcept { return static_cast<int>(elements_.size()); }
  const std::vector<Elem>& elements() const noexcept { return elements_; }
  Elem element(int i) const { return elements_[static_cast<std::size_t>(i)]; }
  bool contains(Elem x) const noexcept { return pos_[x] >= 0; }
  // Position of x in elements(), or -1.
  int position(Elem x) const noexcept { return pos_[x]; }
  bool is_subset_of(const Subgroup& other) const noexcept;

  // The subgroup as a group in its own right; local index i is element(i).
  const Group& as_group() const;
  // Canonical generators of as_group(), as elements of the parent.
  std::vector<Elem> generators() const;

  bool operator==(const Subgroup& other) const noexcept { return elements_ == other.elements_; }
  std::strong_ordering operator<=>(const Subgroup& other) const noexcept;

 private:
  struct State;
  Subgroup(Group parent, std::vector<Elem> sorted_elements);

  Group parent_;
  std::vector<Elem> elements_;
  std::shared_ptr<State> state_;
  const int* pos_ = nullptr;  // state_->pos.data()

  friend Subgroup subgroup_closure(const Group& G, std::span<const Elem> seeds);
};

struct SubgroupClass {
  Subgroup representative;
  std::vector<Subgroup> members;  // canonical order
  std::vector<Elem> witnesses;    // members[i] == representative^witnesses[i]
};

Group make_group_from_table(int order, const std::vector<std::vector<Elem>>& table,
                            std::string name = {}, std::vector<std::string> labels = {});
// Elements are enumerated in lexicographic order of their image arrays; the
// product is composition with maps acting on the left: (p*q)(i) = p(q(i)).
Group group_from_permutations(int degree, const std::vector<Perm>& generators,
                              std::string name = {}, const Limits& limits = {});

Group cyclic_group(int n);
Group dihedral_group(int order);
Group dicyclic_group(int order);
Group symmetric_group(int degree);
Group alternating_group(int degree);
Group elementary_abelian_group(int p, int k);
Group direct_product(const Group& a, const Group& b);
// C_n x| C_m where the generator y of C_m acts by y x y^-1 = x^action.
Group semidirect_cyclic(int n, int m, int action);
// A x| C_m where the generator y acts by y a y^-1 = alpha(a); alpha is a full
// image array with alpha^m = id. Element (a, y^j) is index a + |A|*j.
Group semidirect_by_automorphism(const Group& A, std::span<const Elem> alpha, int m, std::string name = {});

Subgroup subgroup_closure(const Group& G, std::span<const Elem> seeds);
inline Subgroup subgroup_closure(const Group& G, std::initializer_list<Elem> seeds) {
  return subgroup_closure(G, std::span<const Elem>(seeds.begin(), seeds.size()));
}
std::vector<Subgroup> all_subgroups(const Group& G, const Limits& limits = {});
std::vector<SubgroupClass> conjugacy_classes_of_subgroups(const Group& G, const Limits& limits = {});
// Same, reusing an already computed all_subgroups(G).
std::vector<SubgroupClass> conjugacy_classes_of_subgroups(const Group& G,
                                                          const std::vector<Subgroup>& subgroups);

Subgroup normalizer(const Group& G, const Subgroup& H);
Subgroup centralizer(const Group& G, const Subgroup& H);
Subgroup center(const Group& G);
Subgroup whole_group(const Group& G);
bool is_normal(const Group& G, const Subgroup& H);
// H^g = g^-1 H g
Subgroup conjugate(const Subgroup& H, Elem g);
// Least g with H^g = K (the identity when H == K).
std::optional<Elem> is_conjugate_subgroups(const Group& G, const Subgroup& H, const Subgroup& K);
// Image of H under a map given by its full image array on the parent.
Subgroup image_subgroup(const Subgroup& H, std::span<const Elem> images);

// Cycle notation, "1" for the identity.
std::string cycle_label(const Perm& p);
Perm compose(const Perm& p, const Perm& q);  // p after q
Perm inverse(const Perm& p);

}  // namespace hnn
