#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hnn/morphisms.hpp"

namespace hnn {

// HNN(G1, H, K, f, t): G1 plus a stable letter t with t h t^-1 = f(h), h in H.
struct HnnData {
  Group base;
  Subgroup H;
  Subgroup K;
  SubMap f;  // f.images[i] = f(H.element(i)), an element of K
  std::string label;

  Elem apply(Elem h) const { return f.at(H, h); }
  bool same_data(const HnnData& o) const { return base == o.base && H == o.H && K == o.K && f == o.f; }
};

// Validates subgroups and that f is an isomorphism onto K.
HnnData make_hnn(const Group& base, const Subgroup& H, const Subgroup& K, SubMap f, std::string label = {});
// f given on generators of H (any generating assignment).
HnnData make_hnn(const Group& base, const Subgroup& H, const Subgroup& K,
                 std::span<const std::pair<Elem, Elem>> assignment, std::string label = {});

// Shared, lazily filled caches for one base group. Copies share state;
// every accessor is safe to call from several threads.
class BaseContext {
 public:
  struct SubgroupData {
    Subgroup subgroup;
    Subgroup normalizer;
    std::shared_ptr<const OutGroup> out;  // Aut(H) / Out(H)
    RestrictionImages images;             // images.aut_G1_H = stabilizer of H in Aut(G1)
  };

  explicit BaseContext(const Group& G1, const Limits& limits = {});

  const Group& group() const noexcept;
  const Limits& limits() const noexcept;
  const OutGroup& aut() const;  // Aut(G1); CapExceeded past limits.aut_order
  const SubgroupData& info(const Subgroup& H) const;
  const std::vector<Subgroup>& subgroups() const;
  const std::vector<SubgroupClass>& classes() const;

  struct Impl;
  Impl& impl() const { return *impl_; }

 private:
  std::shared_ptr<Impl> impl_;
};

// An isomorphism HNN(G1,H_a,K_a,f_a,t_a) -> HNN(G1,H_b,K_b,f_b,t_b) of the form
// g -> psi(g) on the base, t_a -> pre * t_b^eps * post.
struct HnnMorphism {
  std::vector<Elem> psi;  // automorphism of G1 as a full image array
  Elem pre = 0;
  int eps = 1;
  Elem post = 0;

  static HnnMorphism identity(const Group& G);
  bool operator==(const HnnMorphism&) const = default;
};

// second after first
HnnMorphism compose(const Group& G, const HnnMorphism& second, const HnnMorphism& first);
HnnMorphism inverse(const Group& G, const HnnMorphism& m);

struct RelationCheck {
  std::string what;
  bool ok = true;

  bool operator==(const RelationCheck&) const = default;
};

// Checks that m and its inverse both respect every defining relation, which
// makes m an isomorphism. Every relation check performed is listed.
std::vector<RelationCheck> verify_isomorphism(const HnnData& a, const HnnData& b, const HnnMorphism& m);
bool all_ok(const std::vector<RelationCheck>& checks);

struct NormalizedHnn {
  HnnData data;          // K == H, f in Aut(H)
  Elem g1 = 0;           // H^g1 = K in the input
  HnnMorphism to_normal; // input -> data
};

// K = H^g with g least: f becomes tau_g o f, t becomes g^-1 s.
NormalizedHnn normalize_with_witness(const HnnData& d);
HnnData normalize_hnn(const HnnData& d);
// (H, K, f) -> (K, H, f^-1), t -> s^-1.
std::pair<HnnData, HnnMorphism> swap_hnn(const HnnData& d);

// (g1, alpha) . f = tau_g1 alpha f alpha^-1, as a map from H onto [alpha(X)]^(g1^-1).
// alpha is a full image array of an automorphism of the parent of H.
SubMap gamma_action(const Subgroup& H, Elem g1, std::span<const Elem> alpha, const Subgroup& X, const SubMap& f);

// psi(H) = K and psi(K) = H^g1 with g1 least.
struct SwapAutomorphism {
  std::vector<Elem> psi;
  Elem g1 = 0;

  bool operator==(const SwapAutomorphism&) const = default;
};

// In canonical Aut(G1) order, at most `limit` of them.
std::vector<SwapAutomorphism> swap_automorphisms(const BaseContext& ctx, const Subgroup& H, const Subgroup& K,
                                                 std::size_t limit);
// The swap used for iota: psi = id, g1 = 1 when H == K, else the first in
// canonical order.
std::optional<SwapAutomorphism> find_swap(const BaseContext& ctx, const Subgroup& H, const Subgroup& K);

// The permutation group on Iso(H, K) generated by the twisted-conjugation
// action and, when a swap exists, the involution iota.
struct GammaBarGroup {
  Subgroup H, K;
  std::vector<Elem> h_generators{};
  std::shared_ptr<const OutGroup> out_H{}, out_K{};
  std::vector<SubMap> iso_set{};  // canonical order

  // The action factors through pairs (a, b) in Aut(H) x Aut(K) acting by
  // f -> b f a^-1; pair_elements is that image group.
  std::vector<std::pair<int, int>> pair_elements{};
  std::vector<std::pair<int, int>> pair_generators{};
  std::vector<Perm> generators{};

  std::optional<SwapAutomorphism> swap{};
  std::optional<Perm> iota{};

  std::vector<int> orbit_of{};         // orbit id per iso index, ids ordered by least member
  std::vector<int> representatives{};  // least iso index of each orbit

  int orbit_count() const { return static_cast<int>(representatives.size()); }
  std::optional<int> index_of(const SubMap& f) const;
  Perm pair_permutation(int a, int b) const;
  Perm iota_permutation(const SwapAutomorphism& s) const;
  // Realized by some element of the twisted-conjugation part.
  bool in_tilde(const Perm& p) const;
  // Member of the whole group, using that it is tilde-part union tilde-part * iota.
  bool contains(const Perm& p) const;
  // The same group with iota taken from another swap automorphism.
  GammaBarGroup with_swap(const Group& G1, const SwapAutomorphism& s) const;
  // Every permutation of the group; CapExceeded beyond `cap` elements.
  std::vector<Perm> closure(std::size_t cap) const;

  std::map<std::vector<Elem>, int> index{};  // key: images of h_generators
};

GammaBarGroup build_gamma_bar(const BaseContext& ctx, const Subgroup& H, const Subgroup& K);
// Cached in ctx.
std::shared_ptr<const GammaBarGroup> gamma_bar(const BaseContext& ctx, const Subgroup& H, const Subgroup& K);

struct IsoClassCount {
  int count = 0;
  std::vector<SubMap> representatives;

  bool operator==(const IsoClassCount&) const = default;
};
IsoClassCount iso_class_count(const BaseContext& ctx, const Subgroup& H, const Subgroup& K);

struct IsoWitness {
  HnnMorphism map;
  std::vector<std::string> path;
  std::vector<RelationCheck> checks;

  bool operator==(const IsoWitness&) const = default;
};

// Independent decision procedure: normalize, transport by an automorphism
// of G1, then search psi and a conjugator directly, in both orientations.
std::optional<IsoWitness> hnn_isomorphic(const BaseContext& ctx, const HnnData& a, const HnnData& b);
std::optional<IsoWitness> hnn_isomorphic(const HnnData& a, const HnnData& b);

// Orbits of Out(H) under left multiplication by Ñ_G1(H), conjugation by
// Ãut_G1(H) and inversion.
int double_coset_count(const BaseContext& ctx, const Subgroup& H);
// The same orbits as ids per Out(H) element, numbered by least member.
std::vector<int> double_coset_orbits(const BaseContext& ctx, const Subgroup& H);

// (n + d) / 2
std::int64_t closed_form_g1(std::int64_t n, std::int64_t d);
// Checks that Ãut_G1(H) is central in Out(H), then reads n = |Out/Ñ| and d =
// elements of order <= 2 of Out/Ñ. HypothesisNotVerified otherwise.
std::int64_t closed_form_g1(const BaseContext& ctx, const Subgroup& H);

struct SylowFactor {
  int p = 2;
  int m = 1;
};
// Count of normal HNN classes over a central cyclic H with the given Sylow orders p^m.
std::int64_t closed_form_central_cyclic(std::span<const SylowFactor> sylow);
// Checks H is cyclic and central, factors |H|. HypothesisNotVerified otherwise.
std::int64_t closed_form_central_cyclic(const BaseContext& ctx, const Subgroup& H);
std::vector<SylowFactor> sylow_factors(int n);

struct PairOrbit {
  int class_h = 0, class_k = 0;  // indices into ctx.classes()
  Subgroup H, K;                 // class representatives
  bool isomorphic = false;
  int count = 0;                 // isomorphism classes with this pair, 0 when H and K differ
  int orbit_size = 1;            // unordered class pairs in this Aut(G1)-orbit
};

struct PairOrbitCatalog {
  std::vector<PairOrbit> pairs;
  std::int64_t total = 0;
};

// One representative per Aut(G1)-orbit of unordered pairs of subgroup
// conjugacy classes, optionally only classes isomorphic to `iso_type`.
PairOrbitCatalog pair_orbit_catalog(const BaseContext& ctx, const Group* iso_type = nullptr);
std::int64_t total_iso_count(const BaseContext& ctx);

}  // namespace hnn
