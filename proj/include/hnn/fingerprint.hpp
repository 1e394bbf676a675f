#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hnn/hnn.hpp"

namespace hnn {

struct Probe {
  std::string label;
  Group group;
};

// Ordered by (order, insertion); no two probes are isomorphic.
struct ProbeSet {
  std::vector<Probe> probes;
  int order_bound = 60;

  // Appends Q unless it is too large or isomorphic to a probe already present.
  bool add(const Group& Q, std::string label);
  void sort();
};

// Cyclic, dihedral, dicyclic, symmetric, alternating, elementary abelian,
// abelian of rank 2 and 3, metacyclic C_n:C_m, C2 x X / C3 x X for the small
// nonabelian X already in the set, then A:C_m<c> (A twisted by the
// representative of class c of Out(A)) for every probe A so far; everything
// of order <= order_bound.
ProbeSet probe_catalog(int order_bound = 60);

// |Hom(HNN(G1,H,K,f,t), Q)|: pairs (φ, q) with q φ(h) q^-1 = φ(f(h)) on gen(H).
std::uint64_t hom_count_hnn(const HnnData& d, const Group& Q, const Limits& limits = {});
// Same counts for several data over one base; Hom(G1, Q) is walked once.
std::vector<std::uint64_t> hom_counts_bulk(std::span<const HnnData> data, const Group& Q, const Limits& limits = {});

struct FingerprintVector {
  std::vector<std::string> labels;
  std::vector<int> orders;
  std::vector<std::uint64_t> counts;

  bool operator==(const FingerprintVector&) const = default;
};

FingerprintVector fingerprint(const HnnData& d, const ProbeSet& probes, int threads = 1, const Limits& limits = {});
// One vector per datum; all data must share a base group.
std::vector<FingerprintVector> fingerprints(std::span<const HnnData> data, const ProbeSet& probes, int threads = 1,
                                            const Limits& limits = {});

struct FingerprintComparison {
  bool equal = true;
  // Least-order probe with differing counts.
  std::optional<std::string> first_difference;
  int order = 0;
  std::uint64_t count_a = 0, count_b = 0;

  bool operator==(const FingerprintComparison&) const = default;
};

// Vectors must come from the same probe set.
FingerprintComparison compare(const FingerprintVector& a, const FingerprintVector& b);

}  // namespace hnn
