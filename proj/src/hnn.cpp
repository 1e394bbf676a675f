#include "hnn/hnn.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <set>

namespace hnn {

namespace {

std::vector<Elem> inverse_array(std::span<const Elem> a) {
  std::vector<Elem> inv(a.size());
  for (std::size_t x = 0; x < a.size(); ++x) inv[static_cast<std::size_t>(a[x])] = static_cast<Elem>(x);
  return inv;
}

std::vector<Elem> identity_array(const Group& G) {
  std::vector<Elem> id(static_cast<std::size_t>(G.order()));
  std::iota(id.begin(), id.end(), 0);
  return id;
}

bool maps_into(const Subgroup& X, std::span<const Elem> alpha, const Subgroup& Y) {
  for (Elem x : X.elements())
    if (!Y.contains(alpha[static_cast<std::size_t>(x)])) return false;
  return true;
}

// f^-1 as an array indexed by positions in K.
std::vector<Elem> inverse_on_K(const HnnData& d) {
  std::vector<Elem> inv(static_cast<std::size_t>(d.K.order()));
  for (int i = 0; i < d.H.order(); ++i)
    inv[static_cast<std::size_t>(d.K.position(d.f.images[static_cast<std::size_t>(i)]))] = d.H.element(i);
  return inv;
}

void require_in(const Group& G, const Subgroup& S, const char* what) {
  if (!(S.parent() == G)) fail(ErrorCode::NotASubgroup, std::string(what) + " is not a subgroup of the base group");
}

using SubsetPair = std::pair<std::vector<Elem>, std::vector<Elem>>;

}  // namespace

// ------------------------------------------------------------------ HnnData

HnnData make_hnn(const Group& base, const Subgroup& H, const Subgroup& K, SubMap f, std::string label) {
  require_in(base, H, "H");
  require_in(base, K, "K");
  if (H.order() != K.order())
    fail(ErrorCode::NotAHomomorphism, "H and K have different orders (" + std::to_string(H.order()) + " vs " +
                                          std::to_string(K.order()) + ")");
  if (f.images.size() != static_cast<std::size_t>(H.order()))
    fail(ErrorCode::NotAHomomorphism, "f must give one image per element of H");
  std::vector<char> hit(static_cast<std::size_t>(K.order()), 0);
  for (Elem y : f.images) {
    if (y < 0 || y >= base.order() || !K.contains(y))
      fail(ErrorCode::NotAHomomorphism, "f sends an element outside K");
    if (hit[static_cast<std::size_t>(K.position(y))]++) fail(ErrorCode::NotAHomomorphism, "f is not injective");
  }
  for (Elem x : H.elements())
    for (Elem y : H.elements())
      if (f.at(H, base.mul(x, y)) != base.mul(f.at(H, x), f.at(H, y)))
        fail(ErrorCode::NotAHomomorphism,
             "f(" + base.label(x) + "*" + base.label(y) + ") != f(" + base.label(x) + ")*f(" + base.label(y) + ")");
  return HnnData{base, H, K, std::move(f), std::move(label)};
}

HnnData make_hnn(const Group& base, const Subgroup& H, const Subgroup& K,
                 std::span<const std::pair<Elem, Elem>> assignment, std::string label) {
  require_in(base, H, "H");
  return make_hnn(base, H, K, extend_to_hom(H, assignment), std::move(label));
}

// -------------------------------------------------------------- BaseContext

struct DirectCandidates {
  // One entry per distinct restriction of psi to H ("left"); `by_c` maps the
  // restriction of tau_{p^-1} psi to K (on K's generators) to a witness.
  struct Left {
    std::vector<Elem> left;  // psi(H.element(i))
    std::map<std::vector<Elem>, std::pair<int, Elem>> by_c;
  };
  std::vector<Elem> k_generators;
  std::vector<Left> keep;  // psi(H) = H, p K p^-1 = psi(K)
  std::vector<Left> swap;  // psi(H) = K, p H p^-1 = psi(K)
};

struct BaseContext::Impl {
  Group G;
  Limits limits;
  std::recursive_mutex mu;
  std::unique_ptr<OutGroup> aut;
  std::unique_ptr<std::vector<Subgroup>> subs;
  std::unique_ptr<std::vector<SubgroupClass>> classes;
  std::map<std::vector<Elem>, std::unique_ptr<SubgroupData>> info;
  std::map<SubsetPair, std::shared_ptr<const GammaBarGroup>> gamma;
  std::map<SubsetPair, std::shared_ptr<const DirectCandidates>> direct;
  std::map<SubsetPair, std::optional<Elem>> conj;
  std::map<std::vector<Elem>, std::vector<int>> coset_orbits;

  // Least x with X^x = Y.
  std::optional<Elem> conjugator(const Subgroup& X, const Subgroup& Y) {
    std::lock_guard lock(mu);
    SubsetPair key{X.elements(), Y.elements()};
    auto it = conj.find(key);
    if (it != conj.end()) return it->second;
    auto r = is_conjugate_subgroups(G, X, Y);
    conj.emplace(std::move(key), r);
    return r;
  }
};

BaseContext::BaseContext(const Group& G1, const Limits& limits) : impl_(std::make_shared<Impl>()) {
  impl_->G = G1;
  impl_->limits = limits;
}

const Group& BaseContext::group() const noexcept { return impl_->G; }
const Limits& BaseContext::limits() const noexcept { return impl_->limits; }

const OutGroup& BaseContext::aut() const {
  std::lock_guard lock(impl_->mu);
  if (!impl_->aut) impl_->aut = std::make_unique<OutGroup>(impl_->G, impl_->limits);
  return *impl_->aut;
}

const BaseContext::SubgroupData& BaseContext::info(const Subgroup& H) const {
  require_in(impl_->G, H, "subgroup");
  std::lock_guard lock(impl_->mu);
  auto it = impl_->info.find(H.elements());
  if (it != impl_->info.end()) return *it->second;
  auto out = std::make_shared<const OutGroup>(H.as_group(), impl_->limits);
  auto images = restriction_images(impl_->G, H, aut(), out);
  auto data = std::make_unique<SubgroupData>(SubgroupData{H, normalizer(impl_->G, H), out, std::move(images)});
  return *impl_->info.emplace(H.elements(), std::move(data)).first->second;
}

const std::vector<Subgroup>& BaseContext::subgroups() const {
  std::lock_guard lock(impl_->mu);
  if (!impl_->subs) impl_->subs = std::make_unique<std::vector<Subgroup>>(all_subgroups(impl_->G, impl_->limits));
  return *impl_->subs;
}

const std::vector<SubgroupClass>& BaseContext::classes() const {
  std::lock_guard lock(impl_->mu);
  if (!impl_->classes)
    impl_->classes =
        std::make_unique<std::vector<SubgroupClass>>(conjugacy_classes_of_subgroups(impl_->G, subgroups()));
  return *impl_->classes;
}

// -------------------------------------------------------------- morphisms

HnnMorphism HnnMorphism::identity(const Group& G) { return {identity_array(G), G.identity(), 1, G.identity()}; }

HnnMorphism compose(const Group& G, const HnnMorphism& second, const HnnMorphism& first) {
  auto psi2 = [&](Elem x) { return second.psi[static_cast<std::size_t>(x)]; };
  HnnMorphism r;
  r.psi.resize(first.psi.size());
  for (std::size_t x = 0; x < first.psi.size(); ++x) r.psi[x] = psi2(first.psi[x]);
  const bool plain = first.eps == 1;
  r.pre = G.mul(psi2(first.pre), plain ? second.pre : G.inv(second.post));
  r.eps = first.eps * second.eps;
  r.post = G.mul(plain ? second.post : G.inv(second.pre), psi2(first.post));
  return r;
}

HnnMorphism inverse(const Group& G, const HnnMorphism& m) {
  HnnMorphism r;
  r.psi = inverse_array(m.psi);
  auto back = [&](Elem x) { return r.psi[static_cast<std::size_t>(x)]; };
  r.eps = m.eps;
  if (m.eps == 1) {
    r.pre = back(G.inv(m.pre));
    r.post = back(G.inv(m.post));
  } else {
    r.pre = back(m.post);
    r.post = back(m.pre);
  }
  return r;
}

namespace {

// First relation t_a h t_a^-1 = f_a(h) whose image fails in b, if any.
std::optional<std::string> relation_failure(const HnnData& a, const HnnData& b, const HnnMorphism& m) {
  const Group& G = a.base;
  const auto b_inv = inverse_on_K(b);
  for (Elem h : a.H.elements()) {
    const Elem y = G.tau(m.post, m.psi[static_cast<std::size_t>(h)]);
    Elem got;
    if (m.eps == 1) {
      if (!b.H.contains(y)) return "post*psi(" + G.label(h) + ")*post^-1 is not in H_b";
      got = b.apply(y);
    } else {
      if (!b.K.contains(y)) return "post*psi(" + G.label(h) + ")*post^-1 is not in K_b";
      got = b_inv[static_cast<std::size_t>(b.K.position(y))];
    }
    if (G.tau(m.pre, got) != m.psi[static_cast<std::size_t>(a.apply(h))])
      return "relation for h = " + G.label(h) + " is not preserved";
  }
  return std::nullopt;
}

}  // namespace

std::vector<RelationCheck> verify_isomorphism(const HnnData& a, const HnnData& b, const HnnMorphism& m) {
  std::vector<RelationCheck> checks;
  const Group& G = a.base;
  if (!(a.base == b.base)) {
    checks.push_back({"bases are the same group", false});
    return checks;
  }
  const bool auto_ok = (m.eps == 1 || m.eps == -1) && is_bijective(m.psi, G.order()) && is_homomorphism(G, G, m.psi);
  checks.push_back({"psi is an automorphism of G1 and eps = +-1", auto_ok});
  if (!auto_ok) return checks;
  auto fwd = relation_failure(a, b, m);
  checks.push_back({"forward: t h t^-1 = f(h) holds in the target for all " + std::to_string(a.H.order()) +
                        " elements of H" + (fwd ? " (" + *fwd + ")" : ""),
                    !fwd});
  HnnMorphism inv = inverse(G, m);
  auto bwd = relation_failure(b, a, inv);
  checks.push_back({"backward: the inverse map respects t h t^-1 = f(h) for all " + std::to_string(b.H.order()) +
                        " elements of H" + (bwd ? " (" + *bwd + ")" : ""),
                    !bwd});
  return checks;
}

bool all_ok(const std::vector<RelationCheck>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const RelationCheck& c) { return c.ok; });
}

// ------------------------------------------------------------ normalization

NormalizedHnn normalize_with_witness(const HnnData& d) {
  const Group& G = d.base;
  if (d.H == d.K) return {d, G.identity(), HnnMorphism::identity(G)};
  auto g = is_conjugate_subgroups(G, d.H, d.K);
  if (!g) fail(ErrorCode::NotConjugate, "associated subgroups are not conjugate in the base group");
  SubMap f1;
  for (Elem y : d.f.images) f1.images.push_back(G.tau(*g, y));
  std::string label = (d.label.empty() ? "" : d.label + " ") + "[normalized by g1=" + G.label(*g) + "]";
  HnnData out{G, d.H, d.H, std::move(f1), std::move(label)};
  HnnMorphism m{identity_array(G), G.inv(*g), 1, G.identity()};
  return {std::move(out), *g, std::move(m)};
}

HnnData normalize_hnn(const HnnData& d) { return normalize_with_witness(d).data; }

std::pair<HnnData, HnnMorphism> swap_hnn(const HnnData& d) {
  const Group& G = d.base;
  HnnData s{G, d.K, d.H, invert_submap(d.H, d.K, d.f), d.label.empty() ? "" : d.label + " [swapped]"};
  return {std::move(s), HnnMorphism{identity_array(G), G.identity(), -1, G.identity()}};
}

SubMap gamma_action(const Subgroup& H, Elem g1, std::span<const Elem> alpha, const Subgroup& X, const SubMap& f) {
  const Group& G = H.parent();
  if (alpha.size() != static_cast<std::size_t>(G.order()))
    fail(ErrorCode::AlphaDoesNotPreserveH, "alpha is not a map on the base group");
  if (!maps_into(H, alpha, H)) fail(ErrorCode::AlphaDoesNotPreserveH, "alpha(H) != H");
  for (Elem y : f.images)
    if (!X.contains(y)) fail(ErrorCode::NotAHomomorphism, "f does not map into the given subgroup");
  auto alpha_inv = inverse_array(alpha);
  SubMap r;
  for (Elem h : H.elements()) {
    const Elem x = alpha_inv[static_cast<std::size_t>(h)];
    r.images.push_back(G.tau(g1, alpha[static_cast<std::size_t>(f.at(H, x))]));
  }
  return r;
}

// ---------------------------------------------------------------- swaps

std::vector<SwapAutomorphism> swap_automorphisms(const BaseContext& ctx, const Subgroup& H, const Subgroup& K,
                                                 std::size_t limit) {
  std::vector<SwapAutomorphism> out;
  if (H.order() != K.order()) return out;
  const OutGroup& A = ctx.aut();
  for (int ai = 0; ai < A.aut_order() && out.size() < limit; ++ai) {
    const auto& psi = A.aut(ai);
    if (!maps_into(H, psi, K)) continue;
    Subgroup Y = image_subgroup(K, psi);
    if (auto g1 = ctx.impl().conjugator(H, Y)) out.push_back({psi, *g1});
  }
  return out;
}

std::optional<SwapAutomorphism> find_swap(const BaseContext& ctx, const Subgroup& H, const Subgroup& K) {
  if (H == K) return SwapAutomorphism{identity_array(ctx.group()), ctx.group().identity()};
  auto all = swap_automorphisms(ctx, H, K, 1);
  if (all.empty()) return std::nullopt;
  return all.front();
}

// ---------------------------------------------------------------- Gamma bar

namespace {

std::vector<Elem> map_key(const GammaBarGroup& g, const SubMap& f) {
  std::vector<Elem> key;
  key.reserve(g.h_generators.size());
  for (Elem h : g.h_generators) key.push_back(f.at(g.H, h));
  return key;
}

void compute_orbits(GammaBarGroup& g) {
  UnionFind uf(g.iso_set.size());
  for (const Perm& p : g.generators)
    for (std::size_t i = 0; i < p.size(); ++i) uf.unite(i, static_cast<std::size_t>(p[i]));
  if (g.iota)
    for (std::size_t i = 0; i < g.iota->size(); ++i) uf.unite(i, static_cast<std::size_t>((*g.iota)[i]));
  g.orbit_of = uf.blocks();
  g.representatives.clear();
  for (std::size_t i = 0; i < g.orbit_of.size(); ++i)
    if (static_cast<std::size_t>(g.orbit_of[i]) == g.representatives.size()) g.representatives.push_back(static_cast<int>(i));
}

// Index of b f_i a^-1 given a^-1 as an automorphism index.
int pair_image(const GammaBarGroup& g, int a_inv, int b, std::size_t i, std::vector<Elem>& key) {
  const auto& A = g.out_H->aut(a_inv);
  const auto& B = g.out_K->aut(b);
  for (std::size_t j = 0; j < g.h_generators.size(); ++j) {
    const Elem x = g.H.element(A[static_cast<std::size_t>(g.H.position(g.h_generators[j]))]);
    const Elem y = g.iso_set[i].at(g.H, x);
    key[j] = g.K.element(B[static_cast<std::size_t>(g.K.position(y))]);
  }
  return g.index.at(key);
}

}  // namespace

std::optional<int> GammaBarGroup::index_of(const SubMap& f) const {
  if (f.images.size() != static_cast<std::size_t>(H.order())) return std::nullopt;
  auto it = index.find(map_key(*this, f));
  if (it == index.end() || iso_set[static_cast<std::size_t>(it->second)] != f) return std::nullopt;
  return it->second;
}

Perm GammaBarGroup::pair_permutation(int a, int b) const {
  const int a_inv = out_H->inverse_aut(a);
  std::vector<Elem> key(h_generators.size());
  Perm p(iso_set.size());
  for (std::size_t i = 0; i < iso_set.size(); ++i) p[i] = pair_image(*this, a_inv, b, i, key);
  return p;
}

Perm GammaBarGroup::iota_permutation(const SwapAutomorphism& s) const {
  const Group& G = H.parent();
  const auto psi_inv = inverse_array(s.psi);
  Perm p(iso_set.size());
  std::vector<Elem> key(h_generators.size());
  std::vector<Elem> f_inv(static_cast<std::size_t>(K.order()));
  for (std::size_t i = 0; i < iso_set.size(); ++i) {
    for (int j = 0; j < H.order(); ++j)
      f_inv[static_cast<std::size_t>(K.position(iso_set[i].images[static_cast<std::size_t>(j)]))] = H.element(j);
    // iota(f) = psi^-1 o tau_{g1^-1} o f^-1 o psi
    for (std::size_t j = 0; j < h_generators.size(); ++j) {
      const Elem k = s.psi[static_cast<std::size_t>(h_generators[j])];
      const Elem x = f_inv[static_cast<std::size_t>(K.position(k))];
      key[j] = psi_inv[static_cast<std::size_t>(G.conj(x, s.g1))];
    }
    p[i] = index.at(key);
  }
  return p;
}

bool GammaBarGroup::in_tilde(const Perm& p) const {
  if (p.size() != iso_set.size()) return false;
  std::vector<Elem> key(h_generators.size());
  for (auto [a, b] : pair_elements) {
    const int a_inv = out_H->inverse_aut(a);
    if (pair_image(*this, a_inv, b, 0, key) != p[0]) continue;
    bool same = true;
    for (std::size_t i = 1; i < p.size() && same; ++i) same = pair_image(*this, a_inv, b, i, key) == p[i];
    if (same) return true;
  }
  return false;
}

bool GammaBarGroup::contains(const Perm& p) const {
  if (in_tilde(p)) return true;
  return iota && in_tilde(compose(p, inverse(*iota)));
}

GammaBarGroup GammaBarGroup::with_swap(const Group& G1, const SwapAutomorphism& s) const {
  (void)G1;
  GammaBarGroup g = *this;
  g.swap = s;
  g.iota = iota_permutation(s);
  compute_orbits(g);
  return g;
}

std::vector<Perm> GammaBarGroup::closure(std::size_t cap) const {
  std::vector<Perm> gens = generators;
  if (iota) gens.push_back(*iota);
  Perm id(iso_set.size());
  std::iota(id.begin(), id.end(), 0);
  std::vector<Perm> out{id};
  std::set<Perm> seen{id};
  for (std::size_t i = 0; i < out.size(); ++i)
    for (const Perm& s : gens) {
      Perm z = compose(out[i], s);
      if (seen.insert(z).second) {
        out.push_back(std::move(z));
        if (out.size() > cap) fail(ErrorCode::CapExceeded, "permutation group larger than " + std::to_string(cap));
      }
    }
  std::sort(out.begin(), out.end());
  return out;
}

GammaBarGroup build_gamma_bar(const BaseContext& ctx, const Subgroup& H, const Subgroup& K) {
  const Group& G = ctx.group();
  require_in(G, H, "H");
  require_in(G, K, "K");
  GammaBarGroup g{.H = H, .K = K};
  g.iso_set = enumerate_isomorphisms(H, K);
  if (g.iso_set.empty()) fail(ErrorCode::EmptyIsoSet, "H and K are not isomorphic");
  g.h_generators = H.generators();
  for (std::size_t i = 0; i < g.iso_set.size(); ++i) g.index.emplace(map_key(g, g.iso_set[i]), static_cast<int>(i));

  const auto& iH = ctx.info(H);
  const auto& iK = ctx.info(K);
  g.out_H = iH.out;
  g.out_K = iK.out;
  const OutGroup& A = ctx.aut();
  const OutGroup& oH = *g.out_H;
  const OutGroup& oK = *g.out_K;

  // Pairs (alpha|_H, (tau_g alpha)|_K) with g alpha(K) g^-1 = K. For a fixed
  // alpha the admissible g form a coset of N(K), whose contribution is the
  // pair (1, N̄(K)) added below.
  std::set<std::pair<int, int>> seeds;
  std::vector<Elem> local(static_cast<std::size_t>(K.order()));
  for (int ai : iH.images.aut_G1_H) {
    const auto& alpha = A.aut(ai);
    Subgroup Y = image_subgroup(K, alpha);
    auto x = ctx.impl().conjugator(Y, K);  // x^-1 Y x = K
    if (!x) continue;
    const Elem gg = G.inv(*x);
    const int a = restrict_to(H, oH, alpha);
    for (int i = 0; i < K.order(); ++i)
      local[static_cast<std::size_t>(i)] = K.position(G.tau(gg, alpha[static_cast<std::size_t>(K.element(i))]));
    seeds.emplace(a, oK.find(local).value());
  }
  for (int nu : iK.images.n_bar) seeds.emplace(oH.identity_aut(), nu);

  // Greedy generators of the pair group, closing as we go.
  const std::pair<int, int> one{oH.identity_aut(), oK.identity_aut()};
  auto mul = [&](std::pair<int, int> x, std::pair<int, int> y) {
    return std::pair<int, int>{oH.compose(x.first, y.first), oK.compose(x.second, y.second)};
  };
  std::vector<std::pair<int, int>> elems{one};
  std::set<std::pair<int, int>> seen{one};
  for (const auto& s : seeds) {
    if (seen.count(s)) continue;
    g.pair_generators.push_back(s);
    for (std::size_t i = 0; i < elems.size(); ++i)
      for (const auto& gen : g.pair_generators) {
        auto z = mul(elems[i], gen);
        if (seen.insert(z).second) elems.push_back(z);
      }
  }
  std::sort(elems.begin(), elems.end());
  g.pair_elements = std::move(elems);
  for (auto [a, b] : g.pair_generators) g.generators.push_back(g.pair_permutation(a, b));

  g.swap = find_swap(ctx, H, K);
  if (g.swap) g.iota = g.iota_permutation(*g.swap);
  compute_orbits(g);
  return g;
}

std::shared_ptr<const GammaBarGroup> gamma_bar(const BaseContext& ctx, const Subgroup& H, const Subgroup& K) {
  auto& impl = ctx.impl();
  std::lock_guard lock(impl.mu);
  SubsetPair key{H.elements(), K.elements()};
  auto it = impl.gamma.find(key);
  if (it != impl.gamma.end()) return it->second;
  auto g = std::make_shared<const GammaBarGroup>(build_gamma_bar(ctx, H, K));
  impl.gamma.emplace(std::move(key), g);
  return g;
}

IsoClassCount iso_class_count(const BaseContext& ctx, const Subgroup& H, const Subgroup& K) {
  auto g = gamma_bar(ctx, H, K);
  IsoClassCount r;
  r.count = g->orbit_count();
  for (int i : g->representatives) r.representatives.push_back(g->iso_set[static_cast<std::size_t>(i)]);
  return r;
}

// --------------------------------------------------------- hnn_isomorphic

namespace {

std::shared_ptr<const DirectCandidates> direct_candidates(const BaseContext& ctx, const Subgroup& H,
                                                          const Subgroup& K) {
  auto& impl = ctx.impl();
  std::lock_guard lock(impl.mu);
  SubsetPair key{H.elements(), K.elements()};
  auto it = impl.direct.find(key);
  if (it != impl.direct.end()) return it->second;

  const Group& G = ctx.group();
  const OutGroup& A = ctx.aut();
  const Subgroup& NH = ctx.info(H).normalizer;
  const Subgroup& NK = ctx.info(K).normalizer;
  auto dc = std::make_shared<DirectCandidates>();
  dc->k_generators = K.generators();
  std::map<std::vector<Elem>, std::size_t> keep_at, swap_at;

  auto add = [&](std::vector<DirectCandidates::Left>& list, std::map<std::vector<Elem>, std::size_t>& at, int ai,
                 const std::vector<Elem>& psi, Elem p0, const Subgroup& N) {
    std::vector<Elem> left;
    for (Elem h : H.elements()) left.push_back(psi[static_cast<std::size_t>(h)]);
    auto [pos, fresh] = at.emplace(left, list.size());
    if (fresh) list.push_back({std::move(left), {}});
    auto& by_c = list[pos->second].by_c;
    std::vector<Elem> c(dc->k_generators.size());
    for (Elem n : N.elements()) {
      const Elem p = G.mul(p0, n);
      for (std::size_t j = 0; j < c.size(); ++j)
        c[j] = G.conj(psi[static_cast<std::size_t>(dc->k_generators[j])], p);  // p^-1 psi(k) p
      by_c.emplace(c, std::pair<int, Elem>{ai, p});
    }
  };

  for (int ai = 0; ai < A.aut_order(); ++ai) {
    const auto& psi = A.aut(ai);
    const bool keeps = maps_into(H, psi, H);
    const bool swaps = maps_into(H, psi, K);
    if (!keeps && !swaps) continue;
    Subgroup Y = image_subgroup(K, psi);
    if (keeps)
      if (auto x = impl.conjugator(Y, K)) add(dc->keep, keep_at, ai, psi, *x, NK);  // x K x^-1 = Y
    if (swaps)
      if (auto x = impl.conjugator(Y, H)) add(dc->swap, swap_at, ai, psi, *x, NH);  // x H x^-1 = Y
  }
  impl.direct.emplace(std::move(key), dc);
  return dc;
}

// s and b share (H, K). Searches psi, p with either
//   psi(H) = H, p K p^-1 = psi(K), p f_b(psi(h)) p^-1 = psi(f_s(h))    (t -> p t_b)
//   psi(H) = K, p H p^-1 = psi(K), p f_b^-1(psi(h)) p^-1 = psi(f_s(h)) (t -> p t_b^-1)
std::optional<std::pair<HnnMorphism, std::string>> direct_search(const BaseContext& ctx, const HnnData& s,
                                                                 const HnnData& b) {
  const Group& G = ctx.group();
  auto dc = direct_candidates(ctx, b.H, b.K);
  const auto s_inv = inverse_on_K(s);
  const auto b_inv = inverse_on_K(b);
  std::vector<Elem> c(dc->k_generators.size());
  const Subgroup& H = b.H;
  const Subgroup& K = b.K;
  auto found = [&](const std::pair<int, Elem>& w, int eps, const char* which) {
    HnnMorphism m{ctx.aut().aut(w.first), w.second, eps, G.identity()};
    return std::pair<HnnMorphism, std::string>{
        m, std::string("direct ") + which + ": psi = Aut(G1)#" + std::to_string(w.first) + ", p = " + G.label(w.second)};
  };
  for (const auto& L : dc->keep) {
    for (std::size_t j = 0; j < c.size(); ++j) {
      const Elem x = s_inv[static_cast<std::size_t>(K.position(dc->k_generators[j]))];
      c[j] = b.apply(L.left[static_cast<std::size_t>(H.position(x))]);
    }
    auto it = L.by_c.find(c);
    if (it != L.by_c.end()) return found(it->second, 1, "(psi fixes H, t -> p t)");
  }
  for (const auto& L : dc->swap) {
    for (std::size_t j = 0; j < c.size(); ++j) {
      const Elem x = s_inv[static_cast<std::size_t>(K.position(dc->k_generators[j]))];
      const Elem y = L.left[static_cast<std::size_t>(H.position(x))];
      c[j] = b_inv[static_cast<std::size_t>(K.position(y))];
    }
    auto it = L.by_c.find(c);
    if (it != L.by_c.end()) return found(it->second, -1, "(psi exchanges H and K, t -> p t^-1)");
  }
  return std::nullopt;
}

struct Transported {
  HnnData data;
  HnnMorphism map;
  std::string note;
};

// Carries src onto the subgroup pair (Hb, Kb) by some psi in Aut(G1) followed
// by conjugations: psi(H) = Hb exactly and psi(K) = c^-1 Kb c.
std::optional<Transported> transport(const BaseContext& ctx, const HnnData& src, const Subgroup& Hb,
                                     const Subgroup& Kb) {
  const Group& G = ctx.group();
  const OutGroup& A = ctx.aut();
  for (int ai = 0; ai < A.aut_order(); ++ai) {
    const auto& alpha = A.aut(ai);
    Subgroup X = image_subgroup(src.H, alpha);
    auto x = ctx.impl().conjugator(X, Hb);
    if (!x) continue;
    Subgroup Y0 = image_subgroup(src.K, alpha);
    // psi = tau_{x^-1} alpha, so psi(H) = x^-1 alpha(H) x = Hb.
    std::vector<Elem> psi(alpha.size());
    for (std::size_t v = 0; v < psi.size(); ++v) psi[v] = G.conj(alpha[v], *x);
    Subgroup Y = image_subgroup(src.K, psi);
    auto c = ctx.impl().conjugator(Kb, Y);  // c^-1 Kb c = Y
    if (!c) continue;
    (void)Y0;
    const auto psi_inv = inverse_array(psi);
    SubMap ft;
    for (Elem h : Hb.elements()) {
      const Elem pre = psi_inv[static_cast<std::size_t>(h)];
      ft.images.push_back(G.tau(*c, psi[static_cast<std::size_t>(src.apply(pre))]));
    }
    HnnData out{G, Hb, Kb, std::move(ft), {}};
    HnnMorphism m{psi, G.inv(*c), 1, G.identity()};
    return Transported{std::move(out), std::move(m),
                       "transport: Aut(G1)#" + std::to_string(ai) + " then conjugation by " + G.label(*x) +
                           ", c = " + G.label(*c)};
  }
  return std::nullopt;
}

NormalizedHnn normalize_if_conjugate(const HnnData& d) {
  if (d.H == d.K || !is_conjugate_subgroups(d.base, d.H, d.K)) return {d, d.base.identity(), HnnMorphism::identity(d.base)};
  return normalize_with_witness(d);
}

}  // namespace

std::optional<IsoWitness> hnn_isomorphic(const BaseContext& ctx, const HnnData& a, const HnnData& b) {
  const Group& G = ctx.group();
  if (!(a.base == b.base) || !(a.base == G)) fail(ErrorCode::BaseMismatch, "HNN data over different base tables");
  IsoWitness w;
  if (a.same_data(b)) {
    w.map = HnnMorphism::identity(G);
    w.path.push_back("identical data");
    w.checks = verify_isomorphism(a, b, w.map);
    return w;
  }
  if (a.H.order() != b.H.order()) return std::nullopt;
  const NormalizedHnn na = normalize_if_conjugate(a);
  const NormalizedHnn nb = normalize_if_conjugate(b);
  for (int orientation = 0; orientation < 2; ++orientation) {
    HnnData src = na.data;
    HnnMorphism to_src = HnnMorphism::identity(G);
    if (orientation == 1) {
      auto [s, m] = swap_hnn(na.data);
      src = std::move(s);
      to_src = std::move(m);
    }
    auto tr = transport(ctx, src, nb.data.H, nb.data.K);
    if (!tr) continue;
    auto direct = direct_search(ctx, tr->data, nb.data);
    if (!direct) return std::nullopt;  // the direct search is exhaustive
    HnnMorphism m = na.to_normal;
    m = compose(G, to_src, m);
    m = compose(G, tr->map, m);
    m = compose(G, direct->first, m);
    m = compose(G, inverse(G, nb.to_normal), m);
    if (na.g1 != G.identity() || !(a.H == a.K)) w.path.push_back("normalize a: g1 = " + G.label(na.g1));
    if (orientation == 1) w.path.push_back("swap orientation of a: (H,K,f) -> (K,H,f^-1)");
    w.path.push_back(tr->note);
    w.path.push_back(direct->second);
    if (nb.g1 != G.identity() || !(b.H == b.K)) w.path.push_back("undo normalization of b: g1 = " + G.label(nb.g1));
    w.map = std::move(m);
    w.checks = verify_isomorphism(a, b, w.map);
    return w;
  }
  return std::nullopt;
}

std::optional<IsoWitness> hnn_isomorphic(const HnnData& a, const HnnData& b) {
  BaseContext ctx(a.base);
  return hnn_isomorphic(ctx, a, b);
}

// ----------------------------------------------------------- double cosets

std::vector<int> double_coset_orbits(const BaseContext& ctx, const Subgroup& H) {
  auto& impl = ctx.impl();
  std::lock_guard lock(impl.mu);
  if (auto it = impl.coset_orbits.find(H.elements()); it != impl.coset_orbits.end()) return it->second;
  const auto& info = ctx.info(H);
  const OutGroup& out = *info.out;
  auto mul = [&](int x, int y) { return out.out_mul(x, y); };
  const auto ngens = generating_set(out.out_identity(), info.images.n_tilde, mul);
  const auto agens = generating_set(out.out_identity(), info.images.aut_tilde, mul);
  UnionFind uf(static_cast<std::size_t>(out.out_order()));
  for (int x = 0; x < out.out_order(); ++x) {
    for (int v : ngens) uf.unite(static_cast<std::size_t>(x), static_cast<std::size_t>(mul(v, x)));
    for (int b : agens) uf.unite(static_cast<std::size_t>(x), static_cast<std::size_t>(mul(mul(out.out_inv(b), x), b)));
    uf.unite(static_cast<std::size_t>(x), static_cast<std::size_t>(out.out_inv(x)));
  }
  return impl.coset_orbits.emplace(H.elements(), uf.blocks()).first->second;
}

int double_coset_count(const BaseContext& ctx, const Subgroup& H) {
  const auto blocks = double_coset_orbits(ctx, H);
  return blocks.empty() ? 0 : *std::max_element(blocks.begin(), blocks.end()) + 1;
}

std::int64_t closed_form_g1(std::int64_t n, std::int64_t d) { return (n + d) / 2; }

std::int64_t closed_form_g1(const BaseContext& ctx, const Subgroup& H) {
  const auto& info = ctx.info(H);
  const OutGroup& out = *info.out;
  auto mul = [&](int x, int y) { return out.out_mul(x, y); };
  for (int b : generating_set(out.out_identity(), info.images.aut_tilde, mul))
    for (int x = 0; x < out.out_order(); ++x)
      if (mul(b, x) != mul(x, b))
        fail(ErrorCode::HypothesisNotVerified, "Aut_G1(H) image is not central in Out(H)");
  const std::set<int> N(info.images.n_tilde.begin(), info.images.n_tilde.end());
  const std::int64_t n = out.out_order() / static_cast<std::int64_t>(N.size());
  std::int64_t involutive = 0;
  for (int x = 0; x < out.out_order(); ++x) involutive += N.count(mul(x, x));
  return closed_form_g1(n, involutive / static_cast<std::int64_t>(N.size()));
}

std::vector<SylowFactor> sylow_factors(int n) {
  std::vector<SylowFactor> out;
  for (int p = 2; static_cast<long long>(p) * p <= n; ++p) {
    if (n % p) continue;
    SylowFactor s{p, 0};
    while (n % p == 0) {
      n /= p;
      ++s.m;
    }
    out.push_back(s);
  }
  if (n > 1) out.push_back({n, 1});
  return out;
}

std::int64_t closed_form_central_cyclic(std::span<const SylowFactor> sylow) {
  std::int64_t odd = 1;  // prod over odd p of (p-1) p^(m-1)
  int r = 0, m2 = 0;
  std::set<int> primes;
  for (const auto& s : sylow) {
    if (s.p < 2 || s.m < 1 || !primes.insert(s.p).second) fail(ErrorCode::BadParams, "invalid Sylow parameters");
    for (int q = 2; q * q <= s.p; ++q)
      if (s.p % q == 0) fail(ErrorCode::BadParams, std::to_string(s.p) + " is not prime");
    if (s.p == 2) {
      m2 = s.m;
      continue;
    }
    std::int64_t a = s.p - 1;
    for (int i = 1; i < s.m; ++i) a *= s.p;
    odd *= a;
    ++r;
  }
  const std::int64_t two_r = std::int64_t{1} << r;
  if (m2 <= 1) return (odd - two_r) / 2 + two_r;
  if (m2 == 2) return (2 * odd - 2 * two_r) / 2 + 2 * two_r;
  return ((std::int64_t{1} << (m2 - 1)) * odd - 4 * two_r) / 2 + 4 * two_r;
}

std::int64_t closed_form_central_cyclic(const BaseContext& ctx, const Subgroup& H) {
  const Group& G = ctx.group();
  require_in(G, H, "H");
  bool cyclic = false;
  for (Elem h : H.elements()) cyclic = cyclic || G.element_order(h) == H.order();
  if (!cyclic) fail(ErrorCode::HypothesisNotVerified, "H is not cyclic");
  if (!H.is_subset_of(center(G))) fail(ErrorCode::HypothesisNotVerified, "H is not central in G1");
  const auto s = sylow_factors(H.order());
  return closed_form_central_cyclic(s);
}

// ------------------------------------------------------------- pair catalog

PairOrbitCatalog pair_orbit_catalog(const BaseContext& ctx, const Group* iso_type) {
  const auto& classes = ctx.classes();
  const OutGroup& A = ctx.aut();
  std::map<std::vector<Elem>, int> class_of;
  for (std::size_t c = 0; c < classes.size(); ++c)
    for (const auto& m : classes[c].members) class_of.emplace(m.elements(), static_cast<int>(c));

  std::vector<int> eligible;
  for (std::size_t c = 0; c < classes.size(); ++c)
    if (!iso_type || are_isomorphic(classes[c].representative.as_group(), *iso_type))
      eligible.push_back(static_cast<int>(c));
  const std::size_t m = eligible.size();
  std::map<int, std::size_t> slot;
  for (std::size_t i = 0; i < m; ++i) slot[eligible[i]] = i;

  // Aut(G1) permutes the eligible classes (isomorphism type is preserved).
  std::set<std::vector<int>> perms;
  for (int ai = 0; ai < A.aut_order(); ++ai) {
    std::vector<int> p(m);
    for (std::size_t i = 0; i < m; ++i) {
      Subgroup img = image_subgroup(classes[static_cast<std::size_t>(eligible[i])].representative, A.aut(ai));
      p[i] = static_cast<int>(slot.at(class_of.at(img.elements())));
    }
    perms.insert(std::move(p));
  }
  auto pair_id = [m](std::size_t i, std::size_t j) {
    if (i > j) std::swap(i, j);
    return i * m + j;
  };
  UnionFind uf(m * m);
  for (const auto& p : perms)
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i; j < m; ++j)
        uf.unite(pair_id(i, j), pair_id(static_cast<std::size_t>(p[i]), static_cast<std::size_t>(p[j])));

  PairOrbitCatalog cat;
  std::map<std::size_t, std::size_t> orbit_at;  // root -> index in cat.pairs
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) {
      const std::size_t root = uf.find(pair_id(i, j));
      auto [it, fresh] = orbit_at.emplace(root, cat.pairs.size());
      if (!fresh) {
        ++cat.pairs[it->second].orbit_size;
        continue;
      }
      PairOrbit po{.class_h = eligible[i],
                   .class_k = eligible[j],
                   .H = classes[static_cast<std::size_t>(eligible[i])].representative,
                   .K = classes[static_cast<std::size_t>(eligible[j])].representative};
      po.isomorphic = po.H.order() == po.K.order() && are_isomorphic(po.H.as_group(), po.K.as_group());
      po.count = po.isomorphic ? gamma_bar(ctx, po.H, po.K)->orbit_count() : 0;
      cat.total += po.count;
      cat.pairs.push_back(std::move(po));
    }
  return cat;
}

std::int64_t total_iso_count(const BaseContext& ctx) { return pair_orbit_catalog(ctx).total; }

}  // namespace hnn
