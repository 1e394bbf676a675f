#include "hnn/morphisms.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace hnn {

bool is_homomorphism(const Group& G, const Group& Q, std::span<const Elem> images) {
  if (images.size() != static_cast<std::size_t>(G.order())) return false;
  for (Elem x = 0; x < G.order(); ++x)
    for (Elem y = 0; y < G.order(); ++y)
      if (Q.mul(images[static_cast<std::size_t>(x)], images[static_cast<std::size_t>(y)]) !=
          images[static_cast<std::size_t>(G.mul(x, y))])
        return false;
  return true;
}

bool is_bijective(std::span<const Elem> images, int codomain_order) {
  if (images.size() != static_cast<std::size_t>(codomain_order)) return false;
  std::vector<char> seen(images.size(), 0);
  for (Elem v : images) {
    if (v < 0 || v >= codomain_order || seen[static_cast<std::size_t>(v)]) return false;
    seen[static_cast<std::size_t>(v)] = 1;
  }
  return true;
}

namespace {

// Backtracking over images of the canonical generators. Level i introduces
// generator i; the elements first reached at that level get their images from
// a spanning tree, every other Cayley-graph edge becomes a consistency check.
class HomSearch {
 public:
  HomSearch(const Group& G, const Group& Q, bool injective) : G_(G), Q_(Q), injective_(injective) {
    const auto& gens = G.generators();
    k_ = gens.size();
    std::vector<char> in(static_cast<std::size_t>(G.order()), 0);
    std::vector<Elem> reached{G.identity()};
    in[static_cast<std::size_t>(G.identity())] = 1;
    defs_.resize(k_);
    checks_.resize(k_);
    for (std::size_t i = 0; i < k_; ++i) {
      const std::size_t old = reached.size();
      for (std::size_t idx = 0; idx < reached.size(); ++idx) {
        const Elem y = reached[idx];
        const std::size_t j0 = idx < old ? i : 0;
        for (std::size_t j = j0; j <= i; ++j) {
          const Elem z = G.mul(y, gens[j]);
          if (!in[static_cast<std::size_t>(z)]) {
            in[static_cast<std::size_t>(z)] = 1;
            reached.push_back(z);
            defs_[i].push_back({z, y, static_cast<int>(j)});
          } else {
            checks_[i].push_back({y, static_cast<int>(j), z});
          }
        }
      }
    }
    candidates_.resize(k_);
    for (std::size_t i = 0; i < k_; ++i) {
      const int og = G.element_order(gens[i]);
      for (Elem q = 0; q < Q.order(); ++q) {
        const int oq = Q.element_order(q);
        if (injective ? oq == og : og % oq == 0) candidates_[i].push_back(q);
      }
    }
  }

  void run(const std::function<bool(const std::vector<Elem>&)>& visit) {
    if (injective_ && Q_.order() < G_.order()) return;
    img_.assign(static_cast<std::size_t>(G_.order()), -1);
    used_.assign(static_cast<std::size_t>(Q_.order()), 0);
    gimg_.assign(k_, -1);
    img_[static_cast<std::size_t>(G_.identity())] = Q_.identity();
    used_[static_cast<std::size_t>(Q_.identity())] = 1;
    visit_ = &visit;
    descend(0);
  }

 private:
  struct Def {
    Elem x, parent;
    int gen;
  };
  struct Check {
    Elem x;
    int gen;
    Elem target;
  };

  bool descend(std::size_t level) {
    if (level == k_) return (*visit_)(img_);
    const auto& defs = defs_[level];
    for (Elem c : candidates_[level]) {
      if (injective_ && used_[static_cast<std::size_t>(c)]) continue;
      gimg_[level] = c;
      std::size_t done = 0;
      bool ok = true;
      for (const auto& d : defs) {
        const Elem v = Q_.mul(img_[static_cast<std::size_t>(d.parent)], gimg_[static_cast<std::size_t>(d.gen)]);
        if (injective_) {
          if (used_[static_cast<std::size_t>(v)]) {
            ok = false;
            break;
          }
          used_[static_cast<std::size_t>(v)] = 1;
        }
        img_[static_cast<std::size_t>(d.x)] = v;
        ++done;
      }
      if (ok)
        for (const auto& ch : checks_[level])
          if (Q_.mul(img_[static_cast<std::size_t>(ch.x)], gimg_[static_cast<std::size_t>(ch.gen)]) !=
              img_[static_cast<std::size_t>(ch.target)]) {
            ok = false;
            break;
          }
      bool keep_going = true;
      if (ok) keep_going = descend(level + 1);
      if (injective_)
        for (std::size_t i = 0; i < done; ++i) used_[static_cast<std::size_t>(img_[static_cast<std::size_t>(defs[i].x)])] = 0;
      if (!keep_going) return false;
    }
    return true;
  }

  const Group& G_;
  const Group& Q_;
  bool injective_;
  std::size_t k_ = 0;
  std::vector<std::vector<Def>> defs_;
  std::vector<std::vector<Check>> checks_;
  std::vector<std::vector<Elem>> candidates_;
  std::vector<Elem> img_;
  std::vector<char> used_;
  std::vector<Elem> gimg_;
  const std::function<bool(const std::vector<Elem>&)>* visit_ = nullptr;
};

void check_probe_cap(const Group& Q, const Limits& limits) {
  if (Q.order() > limits.probe_order)
    fail(ErrorCode::CapExceeded, "target group of order " + std::to_string(Q.order()) + " exceeds probe cap " +
                                     std::to_string(limits.probe_order));
}

}  // namespace

void for_each_hom(const Group& G, const Group& Q, bool injective,
                  const std::function<bool(const std::vector<Elem>&)>& visit) {
  HomSearch search(G, Q, injective);
  search.run(visit);
}

std::vector<GroupMap> enumerate_homs(const Group& G, const Group& Q, const Limits& limits) {
  check_probe_cap(Q, limits);
  std::vector<GroupMap> out;
  for_each_hom(G, Q, false, [&](const std::vector<Elem>& img) {
    out.push_back({G, Q, img, MapKind::Hom});
    return true;
  });
  return out;
}

std::uint64_t count_homs(const Group& G, const Group& Q, const Limits& limits) {
  check_probe_cap(Q, limits);
  std::uint64_t n = 0;
  for_each_hom(G, Q, false, [&](const std::vector<Elem>&) {
    ++n;
    return true;
  });
  return n;
}

std::vector<GroupMap> enumerate_isomorphisms(const Group& H, const Group& K) {
  std::vector<GroupMap> out;
  if (H.order() != K.order()) return out;
  const MapKind kind = H.same_law(K) ? MapKind::Aut : MapKind::Iso;
  for_each_hom(H, K, true, [&](const std::vector<Elem>& img) {
    out.push_back({H, K, img, kind});
    return true;
  });
  return out;
}

bool are_isomorphic(const Group& H, const Group& K) {
  if (H.order() != K.order()) return false;
  bool found = false;
  for_each_hom(H, K, true, [&](const std::vector<Elem>&) {
    found = true;
    return false;
  });
  return found;
}

// ---------------------------------------------------------------- SubMaps

std::vector<SubMap> enumerate_isomorphisms(const Subgroup& H, const Subgroup& K) {
  std::vector<SubMap> out;
  if (H.order() != K.order()) return out;
  for_each_hom(H.as_group(), K.as_group(), true, [&](const std::vector<Elem>& img) {
    SubMap f;
    f.images.reserve(img.size());
    for (Elem v : img) f.images.push_back(K.element(v));
    out.push_back(std::move(f));
    return true;
  });
  return out;
}

SubMap extend_to_hom(const Subgroup& H, std::span<const std::pair<Elem, Elem>> assignment) {
  const Group& G = H.parent();
  std::vector<Elem> img(static_cast<std::size_t>(H.order()), -1);
  img[static_cast<std::size_t>(H.position(G.identity()))] = G.identity();
  std::vector<std::pair<Elem, Elem>> gens;
  for (auto [h, k] : assignment) {
    if (!H.contains(h)) fail(ErrorCode::NotAHomomorphism, "element " + G.label(h) + " is not in the domain");
    if (k < 0 || k >= G.order()) fail(ErrorCode::NotAHomomorphism, "image index out of range");
    gens.emplace_back(h, k);
  }
  std::vector<Elem> queue{G.identity()};
  for (std::size_t i = 0; i < queue.size(); ++i) {
    const Elem x = queue[i];
    const Elem fx = img[static_cast<std::size_t>(H.position(x))];
    for (auto [s, fs] : gens) {
      const Elem z = G.mul(x, s);
      const Elem fz = G.mul(fx, fs);
      auto& slot = img[static_cast<std::size_t>(H.position(z))];
      if (slot < 0) {
        slot = fz;
        queue.push_back(z);
      } else if (slot != fz) {
        fail(ErrorCode::NotAHomomorphism, "assignment is inconsistent at " + G.label(z));
      }
    }
  }
  if (queue.size() != static_cast<std::size_t>(H.order()))
    fail(ErrorCode::NotAHomomorphism, "assigned elements do not generate the domain");
  return SubMap{std::move(img)};
}

SubMap identity_submap(const Subgroup& H) { return SubMap{H.elements()}; }

Subgroup submap_image(const Subgroup& H, const SubMap& f) {
  (void)H;
  return Subgroup::from_elements(H.parent(), f.images);
}

SubMap invert_submap(const Subgroup& H, const Subgroup& K, const SubMap& f) {
  SubMap g{std::vector<Elem>(static_cast<std::size_t>(K.order()), -1)};
  for (int i = 0; i < H.order(); ++i)
    g.images[static_cast<std::size_t>(K.position(f.images[static_cast<std::size_t>(i)]))] = H.element(i);
  return g;
}

// ---------------------------------------------------------------- OutGroup

OutGroup::OutGroup(const Group& H, const Limits& limits) : base_(H), gens_(H.generators()) {
  if (H.order() > limits.aut_order)
    fail(ErrorCode::CapExceeded, "Aut of a group of order " + std::to_string(H.order()) + " exceeds cap " +
                                     std::to_string(limits.aut_order));
  for_each_hom(H, H, true, [&](const std::vector<Elem>& img) {
    maps_.push_back(img);
    if (maps_.size() > limits.max_automorphisms)
      fail(ErrorCode::CapExceeded, "more than " + std::to_string(limits.max_automorphisms) + " automorphisms");
    return true;
  });
  for (std::size_t a = 0; a < maps_.size(); ++a) {
    std::vector<Elem> key;
    for (Elem g : gens_) key.push_back(maps_[a][static_cast<std::size_t>(g)]);
    by_key_.emplace(std::move(key), static_cast<int>(a));
  }
  std::vector<Elem> id(static_cast<std::size_t>(H.order()));
  std::iota(id.begin(), id.end(), 0);
  identity_ = *find(id);
  inverse_.resize(maps_.size());
  for (std::size_t a = 0; a < maps_.size(); ++a) {
    std::vector<Elem> inv(maps_[a].size());
    for (std::size_t x = 0; x < inv.size(); ++x) inv[static_cast<std::size_t>(maps_[a][x])] = static_cast<Elem>(x);
    inverse_[a] = *find(inv);
  }
  inner_of_.resize(static_cast<std::size_t>(H.order()));
  std::set<int> inn;
  for (Elem h = 0; h < H.order(); ++h) {
    std::vector<Elem> t(static_cast<std::size_t>(H.order()));
    for (Elem x = 0; x < H.order(); ++x) t[static_cast<std::size_t>(x)] = H.tau(h, x);
    inner_of_[static_cast<std::size_t>(h)] = *find(t);
    inn.insert(inner_of_[static_cast<std::size_t>(h)]);
  }
  inn_.assign(inn.begin(), inn.end());
  coset_of_.assign(maps_.size(), -1);
  for (std::size_t a = 0; a < maps_.size(); ++a) {
    if (coset_of_[a] >= 0) continue;
    std::vector<int> coset;
    for (int i : inn_) coset.push_back(compose(static_cast<int>(a), i));
    std::sort(coset.begin(), coset.end());
    for (int b : coset) coset_of_[static_cast<std::size_t>(b)] = static_cast<int>(cosets_.size());
    cosets_.push_back(std::move(coset));
  }
}

GroupMap OutGroup::aut_map(int a) const { return {base_, base_, aut(a), MapKind::Aut}; }

std::vector<GroupMap> OutGroup::aut_elements() const {
  std::vector<GroupMap> out;
  for (int a = 0; a < aut_order(); ++a) out.push_back(aut_map(a));
  return out;
}

int OutGroup::compose(int a, int b) const {
  const auto& A = maps_[static_cast<std::size_t>(a)];
  const auto& B = maps_[static_cast<std::size_t>(b)];
  std::vector<Elem> key;
  key.reserve(gens_.size());
  for (Elem g : gens_) key.push_back(A[static_cast<std::size_t>(B[static_cast<std::size_t>(g)])]);
  return by_key_.at(key);
}

std::optional<int> OutGroup::find(std::span<const Elem> images) const {
  if (images.size() != static_cast<std::size_t>(base_.order())) return std::nullopt;
  std::vector<Elem> key;
  for (Elem g : gens_) key.push_back(images[static_cast<std::size_t>(g)]);
  auto it = by_key_.find(key);
  if (it == by_key_.end()) return std::nullopt;
  if (!std::equal(images.begin(), images.end(), maps_[static_cast<std::size_t>(it->second)].begin())) return std::nullopt;
  return it->second;
}

std::optional<int> OutGroup::find_by_generator_images(const std::vector<Elem>& images) const {
  auto it = by_key_.find(images);
  if (it == by_key_.end()) return std::nullopt;
  return it->second;
}

int OutGroup::out_element_order(int c) const {
  int k = 1;
  for (int p = c; p != out_identity(); p = out_mul(p, c)) ++k;
  return k;
}

bool OutGroup::out_is_abelian() const {
  for (int a = 0; a < out_order(); ++a)
    for (int b = a + 1; b < out_order(); ++b)
      if (out_mul(a, b) != out_mul(b, a)) return false;
  return true;
}

OutGroup aut_group(const Group& H, const Limits& limits) { return OutGroup(H, limits); }

// -------------------------------------------------------- restriction images

int restrict_to(const Subgroup& H, const OutGroup& out, std::span<const Elem> alpha) {
  std::vector<Elem> local(static_cast<std::size_t>(H.order()));
  for (int i = 0; i < H.order(); ++i) {
    const int p = H.position(alpha[static_cast<std::size_t>(H.element(i))]);
    if (p < 0) fail(ErrorCode::AlphaDoesNotPreserveH, "automorphism moves the subgroup");
    local[static_cast<std::size_t>(i)] = p;
  }
  return out.find(local).value();
}

int conjugation_on(const Subgroup& H, const OutGroup& out, Elem x) {
  const Group& G = H.parent();
  std::vector<Elem> local(static_cast<std::size_t>(H.order()));
  for (int i = 0; i < H.order(); ++i) {
    const int p = H.position(G.conj(H.element(i), x));
    if (p < 0) fail(ErrorCode::NotASubgroup, G.label(x) + " does not normalize the subgroup");
    local[static_cast<std::size_t>(i)] = p;
  }
  return out.find(local).value();
}

RestrictionImages restriction_images(const Group& G1, const Subgroup& H, const OutGroup& aut_G1,
                                     std::shared_ptr<const OutGroup> out_H) {
  RestrictionImages r{G1, H, std::move(out_H), {}, {}, {}, {}, {}};
  const OutGroup& out = *r.out;
  std::set<int> bar, tilde;
  for (int a = 0; a < aut_G1.aut_order(); ++a) {
    const auto& alpha = aut_G1.aut(a);
    bool keeps = true;
    for (Elem h : H.elements())
      if (!H.contains(alpha[static_cast<std::size_t>(h)])) {
        keeps = false;
        break;
      }
    if (!keeps) continue;
    r.aut_G1_H.push_back(a);
    const int b = restrict_to(H, out, alpha);
    bar.insert(b);
    tilde.insert(out.coset_of(b));
  }
  r.aut_bar.assign(bar.begin(), bar.end());
  r.aut_tilde.assign(tilde.begin(), tilde.end());
  std::set<int> nb, nt;
  const Subgroup N = normalizer(G1, H);
  for (Elem x : N.elements()) {
    const int b = conjugation_on(H, out, x);
    nb.insert(b);
    nt.insert(out.coset_of(b));
  }
  r.n_bar.assign(nb.begin(), nb.end());
  r.n_tilde.assign(nt.begin(), nt.end());
  return r;
}

RestrictionImages restriction_images(const Group& G1, const Subgroup& H, const Limits& limits) {
  OutGroup autG1(G1, limits);
  return restriction_images(G1, H, autG1, std::make_shared<const OutGroup>(H.as_group(), limits));
}

// ------------------------------------------------------------------ helpers

std::vector<int> generate(int identity, const std::vector<int>& gens, const IndexMul& mul) {
  std::vector<int> out{identity};
  std::set<int> seen{identity};
  for (std::size_t i = 0; i < out.size(); ++i)
    for (int g : gens) {
      const int z = mul(out[i], g);
      if (seen.insert(z).second) out.push_back(z);
    }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> generating_set(int identity, const std::vector<int>& elements, const IndexMul& mul) {
  std::vector<int> gens;
  std::vector<int> current{identity};
  for (int x : elements) {
    if (std::binary_search(current.begin(), current.end(), x)) continue;
    gens.push_back(x);
    current = generate(identity, gens, mul);
  }
  return gens;
}

UnionFind::UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }

std::size_t UnionFind::find(std::size_t x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

void UnionFind::unite(std::size_t a, std::size_t b) {
  a = find(a);
  b = find(b);
  if (a == b) return;
  if (a < b) std::swap(a, b);
  parent_[a] = b;  // root is the least member
}

std::vector<int> UnionFind::blocks() {
  std::vector<int> id(parent_.size(), -1);
  std::vector<int> out(parent_.size());
  int next = 0;
  for (std::size_t x = 0; x < parent_.size(); ++x) {
    const std::size_t r = find(x);
    if (id[r] < 0) id[r] = next++;
    out[x] = id[r];
  }
  return out;
}

}  // namespace hnn
