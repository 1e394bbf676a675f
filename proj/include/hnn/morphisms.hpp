#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "hnn/group.hpp"

namespace hnn {

enum class MapKind { Hom, Iso, Aut };

struct GroupMap {
  Group domain;
  Group codomain;
  std::vector<Elem> images;
  MapKind kind = MapKind::Hom;

  Elem operator()(Elem x) const { return images[static_cast<std::size_t>(x)]; }
};

// Full check of the homomorphism property on all pairs.
bool is_homomorphism(const Group& G, const Group& Q, std::span<const Elem> images);
bool is_bijective(std::span<const Elem> images, int codomain_order);

// Visits every homomorphism G -> Q (only injective ones when asked) in
// canonical order: lexicographic on the images of G.generators(). The visitor
// gets the full image array and returns false to stop early.
void for_each_hom(const Group& G, const Group& Q, bool injective,
                  const std::function<bool(const std::vector<Elem>&)>& visit);

std::vector<GroupMap> enumerate_homs(const Group& G, const Group& Q, const Limits& limits = {});
std::uint64_t count_homs(const Group& G, const Group& Q, const Limits& limits = {});
std::vector<GroupMap> enumerate_isomorphisms(const Group& H, const Group& K);
bool are_isomorphic(const Group& H, const Group& K);

// An injective map from a subgroup H into the ambient group: images[i] is the
// image of H.element(i).
struct SubMap {
  std::vector<Elem> images;

  Elem at(const Subgroup& H, Elem h) const { return images[static_cast<std::size_t>(H.position(h))]; }
  auto operator<=>(const SubMap&) const = default;
};

// Iso(H, K) for subgroups of a common group, in canonical order.
std::vector<SubMap> enumerate_isomorphisms(const Subgroup& H, const Subgroup& K);
// Extends an assignment on a generating set of H to a homomorphism H -> G.
// Throws NotAHomomorphism when no extension exists.
SubMap extend_to_hom(const Subgroup& H, std::span<const std::pair<Elem, Elem>> assignment);
SubMap identity_submap(const Subgroup& H);
// Image subgroup of a SubMap.
Subgroup submap_image(const Subgroup& H, const SubMap& f);
// Inverse of an isomorphism f: H -> K, as a SubMap on K.
SubMap invert_submap(const Subgroup& H, const Subgroup& K, const SubMap& f);

class OutGroup {
 public:
  explicit OutGroup(const Group& H, const Limits& limits = {});

  const Group& base() const noexcept { return base_; }

  // Aut(H), canonically ordered.
  int aut_order() const noexcept { return static_cast<int>(maps_.size()); }
  const std::vector<Elem>& aut(int a) const { return maps_[static_cast<std::size_t>(a)]; }
  GroupMap aut_map(int a) const;
  std::vector<GroupMap> aut_elements() const;
  int identity_aut() const noexcept { return identity_; }
  int compose(int a, int b) const;  // a after b
  int inverse_aut(int a) const { return inverse_[static_cast<std::size_t>(a)]; }
  // Index of an automorphism given by its full image array.
  std::optional<int> find(std::span<const Elem> images) const;
  // Same, from the images of key_generators() only (no validation).
  std::optional<int> find_by_generator_images(const std::vector<Elem>& images) const;
  const std::vector<Elem>& key_generators() const noexcept { return gens_; }
  int inner(Elem h) const { return inner_of_[static_cast<std::size_t>(h)]; }  // tau_h
  const std::vector<int>& inn_subset() const noexcept { return inn_; }

  // Out(H) = Aut(H)/Inn(H); coset c is ordered by its least member.
  int out_order() const noexcept { return static_cast<int>(cosets_.size()); }
  const std::vector<std::vector<int>>& cosets() const noexcept { return cosets_; }
  int coset_of(int a) const { return coset_of_[static_cast<std::size_t>(a)]; }
  int representative(int c) const { return cosets_[static_cast<std::size_t>(c)].front(); }
  int out_identity() const { return coset_of(identity_); }
  int out_mul(int c1, int c2) const { return coset_of(compose(representative(c1), representative(c2))); }
  int out_inv(int c) const { return coset_of(inverse_aut(representative(c))); }
  int out_element_order(int c) const;
  bool out_is_abelian() const;

 private:
  Group base_;
  std::vector<std::vector<Elem>> maps_;
  std::vector<Elem> gens_;
  std::map<std::vector<Elem>, int> by_key_;
  std::vector<int> inverse_;
  int identity_ = 0;
  std::vector<int> inner_of_;
  std::vector<int> inn_;
  std::vector<std::vector<int>> cosets_;
  std::vector<int> coset_of_;
};

OutGroup aut_group(const Group& H, const Limits& limits = {});

struct RestrictionImages {
  Group ambient;
  Subgroup subgroup;
  std::shared_ptr<const OutGroup> out;  // Aut/Out of subgroup.as_group()
  std::vector<int> aut_G1_H;            // indices into Aut(ambient)
  std::vector<int> aut_bar;             // indices into out->aut
  std::vector<int> aut_tilde;           // indices into Out
  std::vector<int> n_bar;
  std::vector<int> n_tilde;
};

// Restriction of an automorphism of the ambient group (full image array) to H,
// as an index into out.
int restrict_to(const Subgroup& H, const OutGroup& out, std::span<const Elem> alpha);
// tau_{x^-1} restricted to H, for x normalizing H.
int conjugation_on(const Subgroup& H, const OutGroup& out, Elem x);

RestrictionImages restriction_images(const Group& G1, const Subgroup& H, const OutGroup& aut_G1,
                                     std::shared_ptr<const OutGroup> out_H);
RestrictionImages restriction_images(const Group& G1, const Subgroup& H, const Limits& limits = {});

// Helpers for subgroups of small abstract groups given by a product on indices.
using IndexMul = std::function<int(int, int)>;
std::vector<int> generate(int identity, const std::vector<int>& gens, const IndexMul& mul);
// Greedy generating set of the subgroup with the given element set.
std::vector<int> generating_set(int identity, const std::vector<int>& elements, const IndexMul& mul);

class UnionFind {
 public:
  explicit UnionFind(std::size_t n);
  std::size_t find(std::size_t x);
  void unite(std::size_t a, std::size_t b);
  // Block id per element; blocks numbered by their least member.
  std::vector<int> blocks();

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace hnn
