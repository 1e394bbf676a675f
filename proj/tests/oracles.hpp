#pragma once

// Brute-force oracles shared by the unit tests and the acceptance binary.

#include <algorithm>
#include <deque>
#include <set>
#include <vector>

#include "hnn/genus.hpp"

namespace hnn::testing {

// Every HNN datum over G: ordered pairs of isomorphic subgroups, every f.
inline std::vector<HnnData> all_data(const Group& G) {
  std::vector<HnnData> out;
  const auto subs = all_subgroups(G);
  for (const auto& H : subs)
    for (const auto& K : subs) {
      if (H.order() != K.order()) continue;
      for (auto& f : enumerate_isomorphisms(H, K)) out.push_back(HnnData{G, H, K, f, {}});
    }
  return out;
}

// Exhaustive: psi in Aut(G1), t -> pre t^eps post with pre, post ranging
// over G1, checked by the relation verifier. Any isomorphism of HNN groups
// over a common finite base can be brought to this shape.
inline bool brute_isomorphic(const OutGroup& A, const HnnData& a, const HnnData& b) {
  const Group& G = a.base;
  const SubMap b_inv = invert_submap(b.H, b.K, b.f);
  for (int ai = 0; ai < A.aut_order(); ++ai)
    for (int eps : {1, -1})
      for (Elem pre = 0; pre < G.order(); ++pre)
        for (Elem post = 0; post < G.order(); ++post) {
          const auto& psi = A.aut(ai);
          // Cheap forward screen before the full two-sided verification.
          bool fwd = true;
          for (Elem h : a.H.elements()) {
            const Elem y = G.tau(post, psi[static_cast<std::size_t>(h)]);
            const Subgroup& dom = eps == 1 ? b.H : b.K;
            if (!dom.contains(y)) {
              fwd = false;
              break;
            }
            const Elem img = eps == 1 ? b.apply(y) : b_inv.at(b.K, y);
            if (G.tau(pre, img) != psi[static_cast<std::size_t>(a.apply(h))]) {
              fwd = false;
              break;
            }
          }
          if (fwd && all_ok(verify_isomorphism(a, b, HnnMorphism{psi, pre, eps, post}))) return true;
        }
  return false;
}

inline int out_class(const Subgroup& H, const OutGroup& out, const std::vector<Elem>& phi_on_H) {
  std::vector<Elem> local(static_cast<std::size_t>(H.order()));
  for (int i = 0; i < H.order(); ++i) local[static_cast<std::size_t>(i)] = H.position(phi_on_H[static_cast<std::size_t>(i)]);
  return out.coset_of(out.find(local).value());
}

// Image of N_G(H) in Out(H) by walking words in G1 and t^{±1}. A state is
// (X, φ) with X = w^-1 H w and φ(h) = w^-1 h w; t^{±1} steps are only legal
// when X is the matching associated subgroup, so every reachable state is a
// genuine element of G conjugating H into G1.
inline std::set<int> brute_n_out(const HnnData& d, const OutGroup& out) {
  const Group& G = d.base;
  const Subgroup& H = d.H;
  using State = std::pair<std::vector<Elem>, std::vector<Elem>>;  // (X elements, φ images)
  std::set<State> seen;
  std::deque<State> queue;
  State start{H.elements(), H.elements()};
  seen.insert(start);
  queue.push_back(start);
  std::set<int> result;
  const SubMap f_inv = invert_submap(d.H, d.K, d.f);
  while (!queue.empty()) {
    auto [X, phi] = queue.front();
    queue.pop_front();
    if (X == H.elements()) result.insert(out_class(H, out, phi));
    auto push = [&](State s) {
      if (seen.insert(s).second) queue.push_back(std::move(s));
    };
    for (Elem g : G.generators()) {
      std::vector<Elem> Y, psi;
      for (Elem x : X) Y.push_back(G.conj(x, g));
      for (Elem y : phi) psi.push_back(G.conj(y, g));
      std::sort(Y.begin(), Y.end());
      push({Y, psi});
    }
    if (X == d.K.elements()) {  // t^-1 k t = f^-1(k)
      std::vector<Elem> Y, psi;
      for (Elem y : phi) psi.push_back(f_inv.at(d.K, y));
      Y = d.H.elements();
      push({Y, psi});
    }
    if (X == d.H.elements()) {  // t h t^-1 = f(h)
      std::vector<Elem> psi;
      for (Elem y : phi) psi.push_back(d.apply(y));
      push({d.K.elements(), psi});
    }
  }
  return result;
}

}  // namespace hnn::testing
