#pragma once

// Shared fixtures for the test binaries: a catalog of every group of order
// at most 16 and a few brute-force oracles.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "hnn/group.hpp"

namespace hnn::testing {

inline Group from_function(int n, const std::function<int(int, int)>& mul, const std::string& name) {
  std::vector<std::vector<Elem>> t(static_cast<std::size_t>(n), std::vector<Elem>(static_cast<std::size_t>(n)));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) t[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = mul(a, b);
  return make_group_from_table(n, t, name);
}

// i^k X^a Z^b with XZ = -ZX: the central product C4 o D8.
inline Group pauli_group() {
  auto idx = [](int k, int a, int b) { return k + 4 * a + 8 * b; };
  return from_function(
      16,
      [&](int u, int v) {
        int k = u % 4, a = (u / 4) % 2, b = u / 8;
        int l = v % 4, c = (v / 4) % 2, d = v / 8;
        return idx((k + l + 2 * b * c) % 4, (a + c) % 2, (b + d) % 2);
      },
      "C4oD8");
}

// <a,b,c | a^4 = b^2 = c^2 = 1, ab = ba, bc = cb, cac = ab>
inline Group c2sq_by_c4() {
  Group A = direct_product(cyclic_group(4), cyclic_group(2));  // a = 1, b = 4
  std::vector<Elem> alpha(8);
  for (int x = 0; x < 8; ++x) {
    int i = x % 4, j = x / 4;
    // a^i b^j -> (ab)^i b^j = a^i b^(i+j)
    alpha[static_cast<std::size_t>(x)] = i + 4 * ((i + j) % 2);
  }
  return hnn::semidirect_by_automorphism(A, alpha, 2, "(C4xC2):C2");
}

// One representative of every isomorphism type of order <= max_order (<= 16).
inline std::vector<Group> small_groups(int max_order) {
  std::vector<Group> out;
  auto add = [&](int order, auto make) {
    if (order <= max_order) out.push_back(make());
  };
  add(1, [] { return cyclic_group(1); });
  add(2, [] { return cyclic_group(2); });
  add(3, [] { return cyclic_group(3); });
  add(4, [] { return cyclic_group(4); });
  add(4, [] { return elementary_abelian_group(2, 2); });
  add(5, [] { return cyclic_group(5); });
  add(6, [] { return cyclic_group(6); });
  add(6, [] { return dihedral_group(6); });
  add(7, [] { return cyclic_group(7); });
  add(8, [] { return cyclic_group(8); });
  add(8, [] { return direct_product(cyclic_group(4), cyclic_group(2)); });
  add(8, [] { return elementary_abelian_group(2, 3); });
  add(8, [] { return dihedral_group(8); });
  add(8, [] { return dicyclic_group(8); });
  add(9, [] { return cyclic_group(9); });
  add(9, [] { return elementary_abelian_group(3, 2); });
  add(10, [] { return cyclic_group(10); });
  add(10, [] { return dihedral_group(10); });
  add(11, [] { return cyclic_group(11); });
  add(12, [] { return cyclic_group(12); });
  add(12, [] { return direct_product(cyclic_group(6), cyclic_group(2)); });
  add(12, [] { return dihedral_group(12); });
  add(12, [] { return dicyclic_group(12); });
  add(12, [] { return alternating_group(4); });
  add(13, [] { return cyclic_group(13); });
  add(14, [] { return cyclic_group(14); });
  add(14, [] { return dihedral_group(14); });
  add(15, [] { return cyclic_group(15); });
  add(16, [] { return cyclic_group(16); });
  add(16, [] { return direct_product(cyclic_group(4), cyclic_group(4)); });
  add(16, [] { return c2sq_by_c4(); });
  add(16, [] { return semidirect_cyclic(4, 4, 3); });
  add(16, [] { return direct_product(cyclic_group(8), cyclic_group(2)); });
  add(16, [] { return semidirect_cyclic(8, 2, 5); });
  add(16, [] { return dihedral_group(16); });
  add(16, [] { return semidirect_cyclic(8, 2, 3); });
  add(16, [] { return dicyclic_group(16); });
  add(16, [] { return direct_product(direct_product(cyclic_group(4), cyclic_group(2)), cyclic_group(2)); });
  add(16, [] { return direct_product(dihedral_group(8), cyclic_group(2)); });
  add(16, [] { return direct_product(dicyclic_group(8), cyclic_group(2)); });
  add(16, [] { return pauli_group(); });
  add(16, [] { return elementary_abelian_group(2, 4); });
  return out;
}

// Every subset closed under the law, by exhaustive search (order <= 16).
inline std::vector<std::vector<Elem>> brute_subgroups(const Group& G) {
  const int n = G.order();
  std::vector<std::vector<Elem>> out;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (!(mask >> G.identity() & 1u)) continue;
    bool closed = true;
    for (int a = 0; a < n && closed; ++a)
      if (mask >> a & 1u)
        for (int b = 0; b < n && closed; ++b)
          if (mask >> b & 1u) closed = mask >> G.mul(a, b) & 1u;
    if (!closed) continue;
    std::vector<Elem> s;
    for (int a = 0; a < n; ++a)
      if (mask >> a & 1u) s.push_back(a);
    out.push_back(s);
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    return x.size() != y.size() ? x.size() < y.size() : x < y;
  });
  return out;
}

inline Subgroup sub(const Group& G, std::initializer_list<const char*> labels) {
  std::vector<Elem> seeds;
  for (const char* l : labels) seeds.push_back(G.find(l).value());
  return subgroup_closure(G, seeds);
}

}  // namespace hnn::testing
