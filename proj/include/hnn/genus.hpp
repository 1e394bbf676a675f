#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hnn/hnn.hpp"

namespace hnn {

// Image of N_G(H) in Out(H) for G = HNN(G1, H, K, f, t) with finite G1.
struct NOutData {
  enum class Construction { Normal, NonConjugate };

  Construction construction = Construction::Normal;
  std::shared_ptr<const OutGroup> out;  // Out(H)
  std::vector<int> n_tilde_G1;          // sorted Out indices
  std::vector<int> n_tilde_G;           // sorted Out indices, contains n_tilde_G1
  // |Ñ_G(H)| / |Ñ_G1(H)| when Ñ_G1(H) is normal in Ñ_G(H).
  std::optional<int> quotient_order;
};

// Normal case: <Ñ_G1(H), f~>. Non-conjugate case: <Ñ_G1(H), f^-1 Ñ_G1(K) f>.
// Conjugate but distinct H, K are normalized first (same H, same group).
NOutData n_out_image(const BaseContext& ctx, const HnnData& d);

enum class GenusKind { Exact, Bounds };

struct RuleCheck {
  std::string rule;
  std::string hypothesis;
  bool verdict = false;

  bool operator==(const RuleCheck&) const = default;
};

// Plain HNN datum by element indices, so reports serialize without groups.
struct Companion {
  std::vector<Elem> H, K;
  std::vector<std::pair<Elem, Elem>> f;  // (h, f(h)) for every h in H

  bool operator==(const Companion&) const = default;
};

Companion companion_of(const HnnData& d);
HnnData companion_data(const Group& G, const Companion& c);

struct GenusReport {
  GenusKind kind = GenusKind::Bounds;
  std::int64_t lo = 1;
  std::int64_t hi = 1;  // Exact: lo == hi
  std::string rule;
  std::vector<RuleCheck> checks;
  std::vector<Companion> companions;

  std::int64_t value() const { return lo; }
  bool exact() const { return kind == GenusKind::Exact; }
  bool operator==(const GenusReport&) const = default;
};

// Exactness rules are tried in a fixed order; the first that verifies wins.
//   conjugate H, K (after normalizing):
//     |Out(H)| ≤ 2; Ñ_G(H) = Ñ_G1(H); Aut(H) abelian with Ñ_G1(H) = 1
//     (genus φ(|f~|)/2); cyclic quotient Ñ_G(H)/Ñ_G1(H) of order ≤ 2;
//   non-conjugate H, K:
//     Ñ_G1(H) = Out(H); f extends to Aut(G1); N(K) = K·C(K) or
//     N(H) = H·C(H); f^-1 Ñ_G1(K) f ⊆ Ñ_G1(H).
// Otherwise the candidate classes are bounded (κ~ of Ñ_G(H), or the
// generator fiber of the cyclic quotient, or the Γ̄-orbits of f·N̄_G(H)),
// and candidates whose own genus is certified 1 are removed: a class with
// genus {B} cannot share a genus with anything else.
GenusReport genus_report(const BaseContext& ctx, const HnnData& d);
// Finite base: k(G1, H, K) = 1, so the class-A genus is the genus above.
GenusReport genus_in_class_A(const BaseContext& ctx, const HnnData& d);

struct KInvariant {
  int value = 1;
  int l_H = 1, l_K = 1;          // Aut(G1)-orbits meeting the Aut-class of H (resp. K)
  int orbit_H = 1, orbit_K = 1;  // subgroups in Aut(G1)·H (resp. K)

  bool operator==(const KInvariant&) const = default;
};
KInvariant k_invariant(const BaseContext& ctx, const Subgroup& H, const Subgroup& K);

// φ(n)
std::int64_t euler_phi(std::int64_t n);

}  // namespace hnn
