#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "hnn/hnn.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace hnn;
using hnn::testing::all_data;
using hnn::testing::brute_isomorphic;
using hnn::testing::sub;

namespace {

SubMap on_pairs(const Subgroup& H, std::vector<std::pair<Elem, Elem>> assign) { return extend_to_hom(H, assign); }

// Orbits of Iso(H, K) as a partition, by orbit id per index.
std::vector<int> partition_of(const GammaBarGroup& g) { return g.orbit_of; }

}  // namespace

TEST_CASE("make_hnn validates f") {
  Group D8 = dihedral_group(8);
  Subgroup klein = sub(D8, {"c", "r2"});
  const Elem c = *D8.find("c"), r2 = *D8.find("r2"), r2c = *D8.find("r2c");
  std::vector<std::pair<Elem, Elem>> f1{{c, c}, {r2, r2c}};
  HnnData d = make_hnn(D8, klein, klein, f1, "f1");
  CHECK(d.apply(r2) == r2c);
  SubMap bad = identity_submap(klein);
  bad.images[1] = bad.images[2];
  CHECK_THROWS_AS(make_hnn(D8, klein, klein, bad), Error);
  CHECK_THROWS_AS(make_hnn(D8, klein, sub(D8, {"r"}), identity_submap(klein)), Error);
  CHECK_THROWS_AS(make_hnn(D8, whole_group(cyclic_group(4)), klein, identity_submap(klein)), Error);
}

TEST_CASE("D8 over its Klein subgroup has two classes") {
  Group D8 = dihedral_group(8);
  BaseContext ctx(D8);
  Subgroup H = sub(D8, {"c", "r2"});
  const Elem c = *D8.find("c"), r2 = *D8.find("r2"), r2c = *D8.find("r2c");
  IsoClassCount r = iso_class_count(ctx, H, H);
  CHECK(r.count == 2);
  auto g = gamma_bar(ctx, H, H);
  const SubMap f1 = on_pairs(H, {{c, c}, {r2, r2c}});
  const SubMap f2 = on_pairs(H, {{r2, r2}, {c, r2c}});
  const int i1 = g->index_of(f1).value(), i2 = g->index_of(f2).value();
  CHECK(g->orbit_of[static_cast<std::size_t>(i1)] != g->orbit_of[static_cast<std::size_t>(i2)]);
  // Representatives are the least members of their orbits.
  for (std::size_t k = 0; k < g->representatives.size(); ++k) {
    const int rep = g->representatives[k];
    for (int i = 0; i < rep; ++i) CHECK(g->orbit_of[static_cast<std::size_t>(i)] != static_cast<int>(k));
  }
  CHECK(g->iota.has_value());
  CHECK(double_coset_count(ctx, H) == 2);
}

TEST_CASE("trivial and central cases") {
  Group S3 = symmetric_group(3);
  BaseContext s3(S3);
  Subgroup one(S3);
  CHECK(iso_class_count(s3, one, one).count == 1);

  Group C = direct_product(cyclic_group(11), cyclic_group(2));
  BaseContext ctx(C);
  Subgroup c11 = subgroup_closure(C, {1});
  auto g = gamma_bar(ctx, c11, c11);
  CHECK(g->orbit_count() == 6);
  // Brute force: Aut(C11) acts trivially by conjugation here, so orbits are {u, u^-1 mod 11}.
  const Elem gen = 1;
  std::map<int, int> orbit_by_unit;
  for (int u = 1; u < 11; ++u) {
    SubMap f;
    for (Elem h : c11.elements()) {
      (void)h;
      f.images.push_back(0);
    }
    for (int k = 0; k < 11; ++k) f.images[static_cast<std::size_t>(c11.position(C.pow(gen, k)))] = C.pow(gen, k * u);
    orbit_by_unit[u] = g->orbit_of[static_cast<std::size_t>(g->index_of(f).value())];
  }
  for (int u = 1; u < 11; ++u)
    for (int v = 1; v < 11; ++v)
      CHECK((orbit_by_unit[u] == orbit_by_unit[v]) == (u == v || (u * v) % 11 == 1));
}

TEST_CASE("swap automorphisms and iota") {
  Group Q8 = dicyclic_group(8);
  BaseContext ctx(Q8);
  Subgroup I = sub(Q8, {"i"}), J = sub(Q8, {"j"});
  auto s = find_swap(ctx, I, J);
  REQUIRE(s.has_value());
  CHECK(image_subgroup(I, s->psi) == J);
  CHECK(conjugate(I, s->g1) == image_subgroup(J, s->psi));
  auto g = gamma_bar(ctx, I, J);
  CHECK(g->iota.has_value());
  // Some swap sends i -> j and j -> i.
  const Elem i = *Q8.find("i"), j = *Q8.find("j");
  bool exchanging = false;
  for (const auto& w : swap_automorphisms(ctx, I, J, 100))
    exchanging = exchanging || (w.psi[static_cast<std::size_t>(i)] == j && w.psi[static_cast<std::size_t>(j)] == i);
  CHECK(exchanging);

  // H == K: iota is inversion.
  Group D8 = dihedral_group(8);
  BaseContext d8(D8);
  Subgroup H = sub(D8, {"c", "r2"});
  auto gh = gamma_bar(d8, H, H);
  REQUIRE(gh->iota.has_value());
  for (std::size_t k = 0; k < gh->iso_set.size(); ++k) {
    SubMap inv = invert_submap(H, H, gh->iso_set[k]);
    CHECK((*gh->iota)[k] == gh->index_of(inv).value());
  }
  CHECK_THROWS_AS(build_gamma_bar(d8, H, sub(D8, {"r"})), Error);
}

TEST_CASE("normalization") {
  Group D8 = dihedral_group(8);
  Subgroup c = sub(D8, {"c"}), r2c = sub(D8, {"r2c"});
  HnnData d{D8, c, r2c, enumerate_isomorphisms(c, r2c).front(), {}};
  NormalizedHnn n = normalize_with_witness(d);
  CHECK(n.data.H == c);
  CHECK(n.data.K == c);
  CHECK(conjugate(c, n.g1) == r2c);
  CHECK(all_ok(verify_isomorphism(d, n.data, n.to_normal)));

  HnnData same{D8, c, c, identity_submap(c), {}};
  NormalizedHnn m = normalize_with_witness(same);
  CHECK(m.g1 == D8.identity());
  CHECK(m.data.f == same.f);

  Group Q8 = dicyclic_group(8);
  Subgroup I = sub(Q8, {"i"}), J = sub(Q8, {"j"});
  try {
    normalize_hnn(HnnData{Q8, I, J, enumerate_isomorphisms(I, J).front(), {}});
    FAIL("expected NotConjugate");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotConjugate);
  }

  auto [sw, sm] = swap_hnn(d);
  CHECK(sw.H == r2c);
  CHECK(all_ok(verify_isomorphism(d, sw, sm)));
}

TEST_CASE("gamma action axioms on groups of order <= 16") {
  for (const Group& G : hnn::testing::small_groups(16)) {
    OutGroup A(G);
    const int stride = A.aut_order() <= 48 ? 1 : A.aut_order() / 31;
    bool ok = true;
    for (const auto& H : all_subgroups(G)) {
      if (H.order() == 1 || H.order() == G.order()) continue;
      std::vector<int> stab;
      for (int a = 0; a < A.aut_order(); a += stride)
        if (image_subgroup(H, A.aut(a)) == H) stab.push_back(a);
      const SubMap f = identity_submap(H);
      // identity acts trivially
      ok = ok && gamma_action(H, G.identity(), A.aut(A.identity_aut()), H, f) == f;
      for (std::size_t x = 0; x < stab.size() && x < 6; ++x)
        for (std::size_t y = 0; y < stab.size() && y < 6; ++y) {
          const auto& alpha = A.aut(stab[x]);
          const auto& beta = A.aut(stab[y]);
          const Elem g1 = static_cast<Elem>((x * 7 + 3) % static_cast<std::size_t>(G.order()));
          const Elem g2 = static_cast<Elem>((y * 5 + 1) % static_cast<std::size_t>(G.order()));
          // (g1, a)(g2, b) = (g1 a(g2), ab)
          SubMap inner = gamma_action(H, g2, beta, H, f);
          SubMap lhs = gamma_action(H, g1, alpha, submap_image(H, inner), inner);
          const Elem prod = G.mul(g1, alpha[static_cast<std::size_t>(g2)]);
          SubMap rhs = gamma_action(H, prod, A.aut(A.compose(stab[x], stab[y])), H, f);
          ok = ok && lhs == rhs;
        }
    }
    CHECK_MESSAGE(ok, G.name());
  }
  Group D8 = dihedral_group(8);
  OutGroup A(D8);
  Subgroup c = sub(D8, {"c"});
  int moving = -1;
  for (int a = 0; a < A.aut_order() && moving < 0; ++a)
    if (image_subgroup(c, A.aut(a)) != c) moving = a;
  REQUIRE(moving >= 0);
  try {
    gamma_action(c, D8.identity(), A.aut(moving), c, identity_submap(c));
    FAIL("expected AlphaDoesNotPreserveH");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AlphaDoesNotPreserveH);
  }
}

TEST_CASE("iota normalizes the tilde part and does not depend on the swap") {
  for (const Group& G : hnn::testing::small_groups(16)) {
    BaseContext ctx(G);
    const auto& classes = ctx.classes();
    bool normalizes = true, independent = true;
    for (std::size_t a = 0; a < classes.size(); ++a)
      for (std::size_t b = a; b < classes.size(); ++b) {
        const Subgroup& H = classes[a].representative;
        const Subgroup& K = classes[b].representative;
        if (H.order() != K.order() || !are_isomorphic(H.as_group(), K.as_group())) continue;
        auto g = gamma_bar(ctx, H, K);
        if (!g->iota) continue;
        const Perm& iota = *g->iota;
        normalizes = normalizes && g->in_tilde(compose(iota, iota));
        for (const Perm& p : g->generators)
          normalizes = normalizes && g->in_tilde(compose(compose(iota, p), inverse(iota)));
        for (const auto& s : swap_automorphisms(ctx, H, K, 3)) {
          GammaBarGroup alt = g->with_swap(G, s);
          independent = independent && alt.orbit_of == g->orbit_of && g->contains(*alt.iota);
        }
      }
    CHECK_MESSAGE(normalizes, G.name());
    CHECK_MESSAGE(independent, G.name());
  }
}

TEST_CASE("closure is a group containing the generators") {
  Group D8 = dihedral_group(8);
  BaseContext ctx(D8);
  Subgroup H = sub(D8, {"c", "r2"});
  auto g = gamma_bar(ctx, H, H);
  auto all = g->closure(1000);
  std::set<Perm> s(all.begin(), all.end());
  for (const Perm& p : all) {
    CHECK(s.count(inverse(p)));
    for (const Perm& q : all) CHECK(s.count(compose(p, q)));
    CHECK(g->contains(p));
  }
  CHECK_THROWS_AS(g->closure(1), Error);
}

TEST_CASE("double coset counts") {
  Group D8 = dihedral_group(8);
  BaseContext d8(D8);
  CHECK(double_coset_count(d8, sub(D8, {"c", "r2"})) == 2);
  CHECK(double_coset_count(d8, sub(D8, {"c"})) == 1);
  Group G = direct_product(cyclic_group(5), symmetric_group(3));
  BaseContext ctx(G);
  Subgroup c5 = subgroup_closure(G, {1});
  CHECK(double_coset_count(ctx, c5) == 3);
  CHECK(iso_class_count(ctx, c5, c5).count == 3);
}

TEST_CASE("double coset count equals orbit count for K = H") {
  for (const Group& G : hnn::testing::small_groups(12)) {
    BaseContext ctx(G);
    for (const auto& H : ctx.subgroups())
      CHECK_MESSAGE(double_coset_count(ctx, H) == iso_class_count(ctx, H, H).count, G.name());
  }
}

TEST_CASE("closed forms") {
  const std::vector<std::pair<std::vector<SylowFactor>, int>> table{
      {{{2, 1}}, 1}, {{{2, 2}}, 2}, {{{2, 3}}, 4}, {{{5, 1}}, 3}, {{{3, 1}}, 2}, {{{3, 1}, {5, 1}}, 6}, {{}, 1}};
  for (const auto& [s, v] : table) CHECK(closed_form_central_cyclic(s) == v);
  std::vector<SylowFactor> bad{{4, 1}};
  CHECK_THROWS_AS(closed_form_central_cyclic(bad), Error);
  CHECK(sylow_factors(60).size() == 3);
  CHECK(closed_form_g1(10, 2) == 6);

  for (int n : {2, 3, 4, 5, 8, 15}) {
    Group G = direct_product(cyclic_group(n), cyclic_group(2));
    BaseContext ctx(G);
    Subgroup H = subgroup_closure(G, {1});
    const int count = iso_class_count(ctx, H, H).count;
    CHECK_MESSAGE(closed_form_central_cyclic(ctx, H) == count, n);
    CHECK_MESSAGE(closed_form_g1(ctx, H) == count, n);
  }
  // Hypothesis failures.
  Group S3 = symmetric_group(3);
  BaseContext s3(S3);
  Elem three = 0;
  while (S3.element_order(three) != 3) ++three;
  try {
    closed_form_central_cyclic(s3, subgroup_closure(S3, {three}));  // cyclic, not central
    FAIL("expected HypothesisNotVerified");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::HypothesisNotVerified);
  }
  Group D8 = dihedral_group(8);
  BaseContext d8(D8);
  try {
    closed_form_g1(d8, sub(D8, {"c", "r2"}));  // Out = S3, Ãut not central
    FAIL("expected HypothesisNotVerified");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::HypothesisNotVerified);
  }
}

TEST_CASE("morphism composition and inversion") {
  Group D8 = dihedral_group(8);
  Subgroup c = sub(D8, {"c"}), r2c = sub(D8, {"r2c"});
  HnnData a{D8, c, r2c, enumerate_isomorphisms(c, r2c).front(), {}};
  auto [b, m1] = swap_hnn(a);
  NormalizedHnn n = normalize_with_witness(b);
  HnnMorphism m = compose(D8, n.to_normal, m1);
  CHECK(all_ok(verify_isomorphism(a, n.data, m)));
  HnnMorphism back = inverse(D8, m);
  CHECK(all_ok(verify_isomorphism(n.data, a, back)));
  CHECK(compose(D8, back, m) == HnnMorphism::identity(D8));
  HnnMorphism broken = m;
  broken.pre = D8.mul(broken.pre, *D8.find("r"));
  CHECK_FALSE(all_ok(verify_isomorphism(a, n.data, broken)));
}

TEST_CASE("hnn_isomorphic on the D8 examples") {
  Group D8 = dihedral_group(8);
  BaseContext ctx(D8);
  Subgroup H = sub(D8, {"c", "r2"});
  const Elem c = *D8.find("c"), r2 = *D8.find("r2"), r2c = *D8.find("r2c");
  HnnData b{D8, H, H, on_pairs(H, {{c, c}, {r2, r2c}}), "B"};
  HnnData d{D8, H, H, on_pairs(H, {{r2, r2}, {c, r2c}}), "D"};
  auto self = hnn_isomorphic(ctx, b, b);
  REQUIRE(self.has_value());
  CHECK(self->map == HnnMorphism::identity(D8));
  CHECK_FALSE(hnn_isomorphic(ctx, b, d).has_value());
  HnnData binv{D8, H, H, invert_submap(H, H, b.f), "B^-1"};
  auto w = hnn_isomorphic(ctx, b, binv);
  REQUIRE(w.has_value());
  CHECK(all_ok(w->checks));
  CHECK_THROWS_AS(hnn_isomorphic(ctx, b, HnnData{dicyclic_group(8), Subgroup(dicyclic_group(8)),
                                                 Subgroup(dicyclic_group(8)), SubMap{{0}}, {}}),
                  Error);
}

TEST_CASE("hnn_isomorphic agrees with exhaustive search over small bases") {
  for (const Group& G : hnn::testing::small_groups(8)) {
    BaseContext ctx(G);
    OutGroup A(G);
    const auto data = all_data(G);
    // Sample pairs for the larger sets; the exhaustive oracle is quadratic in |G|.
    const std::size_t step = data.size() > 60 ? data.size() / 40 : 1;
    bool agree = true, verified = true;
    for (std::size_t i = 0; i < data.size(); i += step)
      for (std::size_t j = 0; j < data.size(); j += step) {
        auto w = hnn_isomorphic(ctx, data[i], data[j]);
        if (w) verified = verified && all_ok(w->checks);
        agree = agree && w.has_value() == brute_isomorphic(A, data[i], data[j]);
      }
    CHECK_MESSAGE(agree, G.name());
    CHECK_MESSAGE(verified, G.name());
  }
}

TEST_CASE("orbit partition equals the pairwise isomorphism partition") {
  for (const Group& G : hnn::testing::small_groups(12)) {
    BaseContext ctx(G);
    const auto& classes = ctx.classes();
    bool ok = true;
    for (std::size_t a = 0; a < classes.size(); ++a)
      for (std::size_t b = a; b < classes.size(); ++b) {
        const Subgroup& H = classes[a].representative;
        const Subgroup& K = classes[b].representative;
        if (H.order() != K.order() || !are_isomorphic(H.as_group(), K.as_group())) continue;
        auto g = gamma_bar(ctx, H, K);
        const auto part = partition_of(*g);
        const std::size_t n = g->iso_set.size();
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = i; j < n; ++j) {
            HnnData x{G, H, K, g->iso_set[i], {}}, y{G, H, K, g->iso_set[j], {}};
            auto w = hnn_isomorphic(ctx, x, y);
            ok = ok && w.has_value() == (part[i] == part[j]) && (!w || all_ok(w->checks));
          }
      }
    CHECK_MESSAGE(ok, G.name());
  }
}

TEST_CASE("pair catalog totals match pairwise classification") {
  {
    Group T = cyclic_group(1);
    BaseContext ctx(T);
    auto cat = pair_orbit_catalog(ctx);
    CHECK(cat.pairs.size() == 1);
    CHECK(cat.total == 1);
  }
  {
    Group D8 = dihedral_group(8);
    BaseContext ctx(D8);
    Group V = elementary_abelian_group(2, 2);
    auto cat = pair_orbit_catalog(ctx, &V);
    Subgroup k1 = sub(D8, {"c", "r2"}), k2 = sub(D8, {"rc", "r2"});
    bool self = false, mixed = false;
    for (const auto& p : cat.pairs) {
      self = self || (p.H == k1 && p.K == k1) || (p.H == k2 && p.K == k2);
      mixed = mixed || (p.H == k1 && p.K == k2) || (p.H == k2 && p.K == k1);
      CHECK(p.isomorphic);
    }
    CHECK(self);
    CHECK(mixed);
  }
  for (const Group& G : {cyclic_group(6), symmetric_group(3), dihedral_group(8), dicyclic_group(8),
                         elementary_abelian_group(2, 2), cyclic_group(4)}) {
    BaseContext ctx(G);
    const auto data = all_data(G);
    UnionFind uf(data.size());
    for (std::size_t i = 0; i < data.size(); ++i)
      for (std::size_t j = i + 1; j < data.size(); ++j)
        if (uf.find(i) != uf.find(j) && hnn_isomorphic(ctx, data[i], data[j])) uf.unite(i, j);
    auto blocks = uf.blocks();
    const int classes = *std::max_element(blocks.begin(), blocks.end()) + 1;
    CHECK_MESSAGE(total_iso_count(ctx) == classes, G.name());
  }
}
