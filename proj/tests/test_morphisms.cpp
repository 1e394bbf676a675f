#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "hnn/morphisms.hpp"
#include "support.hpp"

using namespace hnn;
using hnn::testing::sub;

namespace {

// Every bijection of G preserving the law and H, by permuting all elements.
std::set<std::vector<Elem>> brute_aut_preserving(const Group& G, const Subgroup& H) {
  std::set<std::vector<Elem>> out;
  std::vector<Elem> p(static_cast<std::size_t>(G.order()));
  std::iota(p.begin(), p.end(), 0);
  // Fix the identity and only permute elements of equal order among
  // themselves, which every automorphism does anyway.
  std::vector<Elem> others;
  for (Elem x = 0; x < G.order(); ++x)
    if (x != G.identity()) others.push_back(x);
  std::vector<Elem> perm = others;
  std::sort(perm.begin(), perm.end());
  do {
    bool ok = true;
    for (std::size_t i = 0; i < others.size() && ok; ++i)
      ok = G.element_order(others[i]) == G.element_order(perm[i]);
    if (!ok) continue;
    std::vector<Elem> img(static_cast<std::size_t>(G.order()));
    img[static_cast<std::size_t>(G.identity())] = G.identity();
    for (std::size_t i = 0; i < others.size(); ++i) img[static_cast<std::size_t>(others[i])] = perm[i];
    if (!is_homomorphism(G, G, img)) continue;
    bool keeps = true;
    for (Elem h : H.elements()) keeps = keeps && H.contains(img[static_cast<std::size_t>(h)]);
    if (keeps) out.insert(img);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

}  // namespace

TEST_CASE("isomorphism enumeration") {
  CHECK(enumerate_isomorphisms(cyclic_group(5), cyclic_group(5)).size() == 4);
  Group V = elementary_abelian_group(2, 2);
  CHECK(enumerate_isomorphisms(V, V).size() == 6);
  CHECK(enumerate_isomorphisms(cyclic_group(2), cyclic_group(3)).empty());
  CHECK_FALSE(are_isomorphic(cyclic_group(4), V));
  CHECK(are_isomorphic(dihedral_group(6), symmetric_group(3)));
  for (const auto& m : enumerate_isomorphisms(dihedral_group(8), dihedral_group(8))) {
    CHECK(is_homomorphism(m.domain, m.codomain, m.images));
    CHECK(is_bijective(m.images, 8));
    CHECK(m.kind == MapKind::Aut);
  }
  // Subgroup form: Klein to Klein inside D8.
  Group D8 = dihedral_group(8);
  Subgroup k1 = sub(D8, {"r2", "c"}), k2 = sub(D8, {"r2", "rc"});
  auto isos = enumerate_isomorphisms(k1, k2);
  CHECK(isos.size() == 6);
  CHECK(std::is_sorted(isos.begin(), isos.end()));
  CHECK(enumerate_isomorphisms(k1, sub(D8, {"r"})).empty());
}

TEST_CASE("homomorphism enumeration and counting") {
  CHECK(count_homs(cyclic_group(6), cyclic_group(4)) == 2);
  CHECK(count_homs(dihedral_group(8), cyclic_group(1)) == 1);
  CHECK(count_homs(elementary_abelian_group(2, 2), cyclic_group(2)) == 4);
  CHECK(count_homs(symmetric_group(3), symmetric_group(3)) == 10);
  for (const auto& m : enumerate_homs(dicyclic_group(8), dihedral_group(8)))
    CHECK(is_homomorphism(m.domain, m.codomain, m.images));
  Limits tiny;
  tiny.probe_order = 4;
  CHECK_THROWS_AS(count_homs(cyclic_group(2), cyclic_group(5), tiny), Error);
}

TEST_CASE("hom counts agree with exhaustive assignment of generator images") {
  for (const Group& G : hnn::testing::small_groups(8))
    for (const Group& Q : hnn::testing::small_groups(8)) {
      // Naive: every map of the generators, extended along words, checked on all pairs.
      const auto& gens = G.generators();
      std::uint64_t naive = 0;
      std::vector<Elem> choice(gens.size(), 0);
      while (true) {
        std::vector<Elem> img(static_cast<std::size_t>(G.order()), -1);
        img[static_cast<std::size_t>(G.identity())] = Q.identity();
        std::vector<Elem> queue{G.identity()};
        for (std::size_t i = 0; i < queue.size(); ++i)
          for (std::size_t g = 0; g < gens.size(); ++g) {
            Elem z = G.mul(queue[i], gens[g]);
            if (img[static_cast<std::size_t>(z)] < 0) {
              img[static_cast<std::size_t>(z)] = Q.mul(img[static_cast<std::size_t>(queue[i])], choice[g]);
              queue.push_back(z);
            }
          }
        if (is_homomorphism(G, Q, img)) ++naive;
        std::size_t pos = 0;
        while (pos < choice.size() && ++choice[pos] == Q.order()) choice[pos++] = 0;
        if (pos == choice.size()) break;
      }
      CHECK_MESSAGE(count_homs(G, Q) == naive, G.name() << " -> " << Q.name());
    }
}

TEST_CASE("Aut and Out") {
  OutGroup c8 = aut_group(cyclic_group(8));
  CHECK(c8.aut_order() == 4);
  CHECK(c8.inn_subset().size() == 1);
  CHECK(c8.out_order() == 4);
  CHECK(c8.out_is_abelian());
  for (int c = 0; c < 4; ++c) CHECK(c8.out_element_order(c) <= 2);

  OutGroup klein = aut_group(elementary_abelian_group(2, 2));
  CHECK(klein.aut_order() == 6);
  CHECK(klein.out_order() == 6);
  CHECK_FALSE(klein.out_is_abelian());

  OutGroup triv = aut_group(cyclic_group(1));
  CHECK(triv.aut_order() == 1);
  CHECK(triv.out_order() == 1);

  OutGroup d8 = aut_group(dihedral_group(8));
  CHECK(d8.aut_order() == 8);
  CHECK(d8.inn_subset().size() == 4);
  CHECK(d8.out_order() == 2);

  Limits small;
  small.aut_order = 10;
  CHECK_THROWS_AS(aut_group(symmetric_group(4), small), Error);
}

TEST_CASE("Out law is a quotient of Aut on every group of order <= 16") {
  for (const Group& G : hnn::testing::small_groups(16)) {
    OutGroup out(G);
    CHECK(static_cast<int>(enumerate_isomorphisms(G, G).size()) == out.aut_order());
    CHECK(out.out_order() * static_cast<int>(out.inn_subset().size()) == out.aut_order());
    // All pairs where affordable, otherwise a fixed stride through Aut.
    const int stride = out.aut_order() <= 200 ? 1 : out.aut_order() / 97;
    bool law_ok = true, quotient_ok = true;
    for (int a = 0; a < out.aut_order(); a += stride) {
      law_ok = law_ok && out.compose(a, out.inverse_aut(a)) == out.identity_aut();
      for (int b = 0; b < out.aut_order(); b += stride) {
        const int ab = out.compose(a, b);
        for (Elem x = 0; x < G.order(); ++x)
          law_ok = law_ok && out.aut(ab)[static_cast<std::size_t>(x)] ==
                                 out.aut(a)[static_cast<std::size_t>(out.aut(b)[static_cast<std::size_t>(x)])];
        quotient_ok = quotient_ok && out.coset_of(ab) == out.out_mul(out.coset_of(a), out.coset_of(b));
      }
    }
    CHECK_MESSAGE(law_ok, G.name());
    CHECK_MESSAGE(quotient_ok, G.name());
  }
}

TEST_CASE("restriction images") {
  Group D8 = dihedral_group(8);
  Subgroup klein = sub(D8, {"c", "r2"});
  RestrictionImages r = restriction_images(D8, klein);
  CHECK(r.n_bar.size() == 2);
  // The non-identity element is conjugation by cr restricted to H.
  const Elem cr = D8.mul(*D8.find("c"), *D8.find("r"));
  CHECK(std::find(r.n_bar.begin(), r.n_bar.end(), conjugation_on(klein, *r.out, D8.inv(cr))) != r.n_bar.end());
  CHECK(r.n_tilde.size() == 2);

  Group C = direct_product(cyclic_group(11), cyclic_group(2));
  Subgroup c11 = subgroup_closure(C, {1});
  RestrictionImages rc = restriction_images(C, c11);
  CHECK(rc.n_tilde.size() == 1);
  CHECK(rc.aut_tilde.size() == 10);
  CHECK(rc.out->out_order() == 10);

  Group S3 = symmetric_group(3);
  RestrictionImages whole = restriction_images(S3, whole_group(S3));
  CHECK(whole.aut_bar.size() == 6);
  CHECK(whole.n_bar.size() == 6);
}

TEST_CASE("restriction image invariants and brute-force Aut_G1(H)") {
  for (const Group& G : hnn::testing::small_groups(12)) {
    OutGroup autG(G);
    for (const Subgroup& H : all_subgroups(G)) {
      auto out = std::make_shared<const OutGroup>(H.as_group());
      RestrictionImages r = restriction_images(G, H, autG, out);
      // n_bar is a normal subgroup of aut_bar containing Inn(H).
      std::set<int> nb(r.n_bar.begin(), r.n_bar.end()), ab(r.aut_bar.begin(), r.aut_bar.end());
      for (int i : out->inn_subset()) CHECK(nb.count(i));
      for (int x : nb) {
        CHECK(ab.count(x));
        for (int y : nb) CHECK(nb.count(out->compose(x, y)));
        for (int a : ab) CHECK(nb.count(out->compose(out->compose(a, x), out->inverse_aut(a))));
      }
      for (int x : ab)
        for (int y : ab) CHECK(ab.count(out->compose(x, y)));
      if (G.order() <= 10) {
        std::set<std::vector<Elem>> mine;
        for (int a : r.aut_G1_H) mine.insert(autG.aut(a));
        CHECK_MESSAGE(mine == brute_aut_preserving(G, H), G.name());
      }
    }
  }
}

TEST_CASE("submap helpers") {
  Group D8 = dihedral_group(8);
  Subgroup klein = sub(D8, {"c", "r2"});
  const Elem c = *D8.find("c"), r2 = *D8.find("r2"), r2c = *D8.find("r2c");
  std::vector<std::pair<Elem, Elem>> assign{{c, c}, {r2, r2c}};
  SubMap f = extend_to_hom(klein, assign);
  CHECK(f.at(klein, D8.mul(c, r2)) == r2);
  SubMap finv = invert_submap(klein, klein, f);
  for (Elem h : klein.elements()) CHECK(finv.at(klein, f.at(klein, h)) == h);
  CHECK(submap_image(klein, f) == klein);
  std::vector<std::pair<Elem, Elem>> bad{{c, *D8.find("r")}};
  CHECK_THROWS_AS(extend_to_hom(klein, bad), Error);
}

TEST_CASE("generic helpers") {
  auto mul = [](int a, int b) { return (a + b) % 12; };
  CHECK(generate(0, {4, 6}, mul) == std::vector<int>{0, 2, 4, 6, 8, 10});
  CHECK(generating_set(0, {0, 3, 6, 9}, mul) == std::vector<int>{3});
  UnionFind uf(5);
  uf.unite(3, 1);
  uf.unite(4, 3);
  CHECK(uf.find(4) == 1);
  CHECK(uf.blocks() == std::vector<int>{0, 1, 2, 1, 1});
}
