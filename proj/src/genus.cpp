#include "hnn/genus.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace hnn {

namespace {

// Local image array (positions in H) of a map H -> H given as a SubMap.
int aut_index(const Subgroup& H, const OutGroup& out, const SubMap& f) {
  std::vector<Elem> local(static_cast<std::size_t>(H.order()));
  for (int i = 0; i < H.order(); ++i) local[static_cast<std::size_t>(i)] = H.position(f.images[static_cast<std::size_t>(i)]);
  return out.find(local).value();
}

SubMap submap_of(const Subgroup& H, const OutGroup& out, int a) {
  SubMap f;
  for (int i = 0; i < H.order(); ++i) f.images.push_back(H.element(out.aut(a)[static_cast<std::size_t>(i)]));
  return f;
}

std::vector<int> out_subgroup(const OutGroup& out, std::vector<int> gens) {
  return generate(out.out_identity(), gens, [&](int x, int y) { return out.out_mul(x, y); });
}

bool contains_sorted(const std::vector<int>& v, int x) { return std::binary_search(v.begin(), v.end(), x); }

bool aut_is_abelian(const OutGroup& out) {
  const int n = out.aut_order();
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (out.compose(a, b) != out.compose(b, a)) return false;
  return true;
}

std::string yes_no(bool b) { return b ? "holds" : "fails"; }

GenusReport exact(std::int64_t k, std::string rule, std::vector<RuleCheck> checks) {
  GenusReport r;
  r.kind = GenusKind::Exact;
  r.lo = r.hi = k;
  r.rule = std::move(rule);
  r.checks = std::move(checks);
  return r;
}

const char* kRuleOutSmall = "|Out(H)| ≤ 2";
const char* kRuleNoNew = "Ñ_G(H) = Ñ_G1(H)";
const char* kRuleAbelian = "Aut(H) abelian and Ñ_G1(H) = 1: genus = φ(|f̃|)/2";
const char* kRuleAbelianSmall = "Aut(H) abelian and Ñ_G1(H) = 1 with |f̃| ≤ 2";
const char* kRuleCyclicQuotient = "cyclic quotient Ñ_G(H)/Ñ_G1(H) of order ≤ 2";
const char* kRuleFiber = "generators of the cyclic quotient Ñ_G(H)/Ñ_G1(H), at most φ(m)/2 classes";
const char* kRuleKappa = "genus ≤ |κ̃(Ñ_G(H))|";
const char* kRuleExclusion = "every other candidate class has genus 1";
const char* kRuleFullN = "Ñ_G1(H) = Out(H)";
const char* kRuleExtends = "f extends to an automorphism of G1";
const char* kRuleCentralizing = "N_G1(K) = K·C_G1(K) or N_G1(H) = H·C_G1(H)";
const char* kRuleConjugatedN = "f⁻¹ Ñ_G1(K) f ⊆ Ñ_G1(H)";
const char* kRuleEnvelope = "genus ≤ |Γ̄-orbits of f·N̄_G(H)|";

// ------------------------------------------------------------ normal case

struct NormalSetting {
  const BaseContext& ctx;
  Subgroup H;
  const OutGroup& out;
  std::vector<int> n1;    // Ñ_G1(H), sorted
  std::vector<int> aut1;  // Ãut_G1(H), sorted
  bool central;
  bool abelian_aut;
};

struct DirectVerdict {
  std::optional<std::string> rule;  // Exact(1) rule, if any
  std::int64_t value = 1;           // > 1 only for the abelian rule
  int fiber_m = 0;                  // order of the cyclic quotient when defined
};

// Exact rules for the normal extension with Out class x, in fixed order.
DirectVerdict direct_rules(const NormalSetting& s, int x, std::vector<RuleCheck>* log) {
  auto note = [&](const char* rule, std::string hyp, bool ok) {
    if (log) log->push_back({rule, std::move(hyp), ok});
  };
  DirectVerdict v;
  const bool small = s.out.out_order() <= 2;
  note(kRuleOutSmall, "|Out(H)| = " + std::to_string(s.out.out_order()), small);
  if (small) {
    v.rule = kRuleOutSmall;
    return v;
  }
  const bool inside = contains_sorted(s.n1, x);
  note(kRuleNoNew, "f̃ ∈ Ñ_G1(H) (|Ñ_G1(H)| = " + std::to_string(s.n1.size()) + ")", inside);
  if (inside) {
    v.rule = kRuleNoNew;
    return v;
  }
  const bool trivial_n = s.n1.size() == 1;
  const int order = s.out.out_element_order(x);
  const bool abelian = s.abelian_aut && trivial_n;
  note(kRuleAbelian,
       std::string("Aut(H) abelian ") + yes_no(s.abelian_aut) + ", Ñ_G1(H) = 1 " + yes_no(trivial_n) +
           ", |f̃| = " + std::to_string(order),
       abelian);
  if (abelian) {
    if (order <= 2) {
      v.rule = kRuleAbelianSmall;
    } else {
      v.rule = kRuleAbelian;
      v.value = euler_phi(order) / 2;
    }
    return v;
  }
  const bool in_aut = contains_sorted(s.aut1, x);
  const bool hyp = in_aut || trivial_n || s.central;
  const std::vector<int> ng = out_subgroup(s.out, [&] {
    auto g = s.n1;
    g.push_back(x);
    return g;
  }());
  const int m = static_cast<int>(ng.size() / s.n1.size());
  note(kRuleCyclicQuotient,
       std::string("f ∈ Āut_G1(H) ") + yes_no(in_aut) + ", N̄_G1(H) = Inn(H) " + yes_no(trivial_n) +
           ", H ≤ Z(G1) " + yes_no(s.central) + "; quotient order " + std::to_string(m),
       hyp && m <= 2);
  if (hyp) {
    v.fiber_m = m;
    if (m <= 2) v.rule = kRuleCyclicQuotient;
  }
  return v;
}

GenusReport normal_report(const BaseContext& ctx, const HnnData& d, std::vector<RuleCheck> checks) {
  const Group& G = ctx.group();
  const auto& info = ctx.info(d.H);
  const OutGroup& out = *info.out;
  NormalSetting s{ctx,
                  d.H,
                  out,
                  {info.images.n_tilde.begin(), info.images.n_tilde.end()},
                  {info.images.aut_tilde.begin(), info.images.aut_tilde.end()},
                  d.H.is_subset_of(center(G)),
                  false};
  std::sort(s.n1.begin(), s.n1.end());
  std::sort(s.aut1.begin(), s.aut1.end());
  s.abelian_aut = aut_is_abelian(out);
  const int fa = aut_index(d.H, out, d.f);
  const int x = out.coset_of(fa);

  DirectVerdict v = direct_rules(s, x, &checks);
  if (v.rule) {
    GenusReport r = exact(v.value, *v.rule, std::move(checks));
    if (v.value > 1) {
      const int n = out.out_element_order(x);
      int power = fa;
      for (int u = 1; 2 * u <= n; ++u, power = out.compose(power, fa))
        if (std::gcd(u, n) == 1)
          r.companions.push_back(companion_of(HnnData{G, d.H, d.H, submap_of(d.H, out, power), {}}));
    } else {
      r.companions.push_back(companion_of(d));
    }
    return r;
  }

  // Candidate Out elements: Ñ_G(H), or the generator fiber of the cyclic quotient.
  std::vector<int> gens = s.n1;
  gens.push_back(x);
  const std::vector<int> ng = out_subgroup(out, gens);
  std::vector<int> candidates = ng;
  std::string bound_rule = kRuleKappa;
  if (v.fiber_m > 0) {
    auto mul = [&](int a, int b) { return out.out_mul(a, b); };
    std::vector<int> fiber;
    for (int y : ng) {
      // y generates the quotient iff <Ñ_G1, y> = Ñ_G.
      std::vector<int> g2 = s.n1;
      g2.push_back(y);
      if (generate(out.out_identity(), g2, mul).size() == ng.size()) fiber.push_back(y);
    }
    candidates = std::move(fiber);
    bound_rule = kRuleFiber;
  }
  const auto orbit = double_coset_orbits(ctx, d.H);
  std::map<int, int> class_rep;  // orbit id -> least candidate
  for (int y : candidates) class_rep.emplace(orbit[static_cast<std::size_t>(y)], y);
  const std::int64_t envelope = static_cast<std::int64_t>(class_rep.size());
  checks.push_back({bound_rule, std::to_string(envelope) + " candidate classes", true});

  std::vector<int> remaining;
  for (auto [id, y] : class_rep) {
    if (id == orbit[static_cast<std::size_t>(x)]) {
      remaining.push_back(y);
      continue;
    }
    DirectVerdict w = direct_rules(s, y, nullptr);
    const bool excluded = w.rule && w.value == 1;
    checks.push_back({kRuleExclusion, "candidate class of Out element " + std::to_string(y) + " has genus 1" +
                                          (w.rule ? " by " + *w.rule : ""),
                      excluded});
    if (!excluded) remaining.push_back(y);
  }
  auto member = [&](int y) {
    return companion_of(HnnData{G, d.H, d.H, submap_of(d.H, out, out.representative(y)), {}});
  };
  if (remaining.size() == 1) {
    GenusReport r = exact(1, envelope > 1 ? kRuleExclusion : bound_rule, std::move(checks));
    r.companions.push_back(companion_of(d));
    return r;
  }
  GenusReport r;
  r.kind = GenusKind::Bounds;
  r.lo = 1;
  r.hi = static_cast<std::int64_t>(remaining.size());
  r.rule = bound_rule;
  r.checks = std::move(checks);
  for (int y : remaining) r.companions.push_back(member(y));
  return r;
}

// --------------------------------------------------------- non-conjugate

bool is_k_times_centralizer(const Group& G, const Subgroup& K) {
  const Subgroup N = normalizer(G, K);
  const Subgroup C = centralizer(G, K);
  int zk = 0;  // |K ∩ C_G(K)| = |Z(K)|
  for (Elem k : K.elements()) zk += C.contains(k) ? 1 : 0;
  return static_cast<long long>(N.order()) * zk == static_cast<long long>(K.order()) * C.order();
}

struct NonConjugateSetting {
  const BaseContext& ctx;
  const HnnData& d;
  const OutGroup& out_H;
  const OutGroup& out_K;
  std::vector<int> n1_H;  // Ñ_G1(H), sorted
  std::vector<int> nbar_K;
  bool full;
  bool centralizing;
};

// Out(H) classes of f^-1 ν f for ν in N̄_G1(K).
std::vector<int> conjugated_n(const NonConjugateSetting& s, const SubMap& f) {
  const Subgroup& H = s.d.H;
  const Subgroup& K = s.d.K;
  std::vector<Elem> f_inv(static_cast<std::size_t>(K.order()));
  for (int i = 0; i < H.order(); ++i) f_inv[static_cast<std::size_t>(K.position(f.images[static_cast<std::size_t>(i)]))] = H.element(i);
  std::set<int> out;
  std::vector<Elem> local(static_cast<std::size_t>(H.order()));
  for (int nu : s.nbar_K) {
    const auto& a = s.out_K.aut(nu);
    for (int i = 0; i < H.order(); ++i) {
      const Elem k = f.images[static_cast<std::size_t>(i)];
      const Elem nk = K.element(a[static_cast<std::size_t>(K.position(k))]);
      local[static_cast<std::size_t>(i)] = H.position(f_inv[static_cast<std::size_t>(K.position(nk))]);
    }
    out.insert(s.out_H.coset_of(s.out_H.find(local).value()));
  }
  return {out.begin(), out.end()};
}

bool extends_to_base(const BaseContext& ctx, const Subgroup& H, const SubMap& f) {
  const OutGroup& A = ctx.aut();
  const auto gens = H.generators();
  for (int a = 0; a < A.aut_order(); ++a) {
    bool ok = true;
    for (Elem h : gens)
      if (A.aut(a)[static_cast<std::size_t>(h)] != f.at(H, h)) {
        ok = false;
        break;
      }
    if (ok) return true;
  }
  return false;
}

std::optional<std::string> non_conjugate_rules(const NonConjugateSetting& s, const SubMap& f,
                                               std::vector<RuleCheck>* log) {
  auto note = [&](const char* rule, std::string hyp, bool ok) {
    if (log) log->push_back({rule, std::move(hyp), ok});
  };
  note(kRuleFullN, "|Ñ_G1(H)| = " + std::to_string(s.n1_H.size()) + ", |Out(H)| = " + std::to_string(s.out_H.out_order()),
       s.full);
  if (s.full) return kRuleFullN;
  const bool ext = extends_to_base(s.ctx, s.d.H, f);
  note(kRuleExtends, "searched Aut(G1) for an extension of f", ext);
  if (ext) return kRuleExtends;
  note(kRuleCentralizing, "normalizer orders compared with K·C(K) and H·C(H)", s.centralizing);
  if (s.centralizing) return kRuleCentralizing;
  const auto cn = conjugated_n(s, f);
  const bool sub = std::all_of(cn.begin(), cn.end(), [&](int y) { return contains_sorted(s.n1_H, y); });
  note(kRuleConjugatedN, std::to_string(cn.size()) + " conjugated classes checked", sub);
  if (sub) return kRuleConjugatedN;
  return std::nullopt;
}

GenusReport non_conjugate_report(const BaseContext& ctx, const HnnData& d, std::vector<RuleCheck> checks) {
  const Group& G = ctx.group();
  const auto& iH = ctx.info(d.H);
  const auto& iK = ctx.info(d.K);
  NonConjugateSetting s{ctx,
                        d,
                        *iH.out,
                        *iK.out,
                        {iH.images.n_tilde.begin(), iH.images.n_tilde.end()},
                        iK.images.n_bar,
                        false,
                        false};
  std::sort(s.n1_H.begin(), s.n1_H.end());
  s.full = static_cast<int>(s.n1_H.size()) == s.out_H.out_order();
  s.centralizing = is_k_times_centralizer(G, d.K) || is_k_times_centralizer(G, d.H);

  if (auto rule = non_conjugate_rules(s, d.f, &checks)) {
    GenusReport r = exact(1, *rule, std::move(checks));
    r.companions.push_back(companion_of(d));
    return r;
  }

  // Ñ_G(H) = <Ñ_G1(H), f^-1 Ñ_G1(K) f>, then its preimage in Aut(H).
  std::vector<int> gens = s.n1_H;
  for (int y : conjugated_n(s, d.f)) gens.push_back(y);
  const std::vector<int> ng = out_subgroup(s.out_H, gens);
  auto bar = gamma_bar(ctx, d.H, d.K);
  std::map<int, int> class_rep;  // Γ̄-orbit -> least iso index reached
  for (int y : ng)
    for (int a : s.out_H.cosets()[static_cast<std::size_t>(y)]) {
      SubMap fa;
      for (int i = 0; i < d.H.order(); ++i)
        fa.images.push_back(d.f.at(d.H, d.H.element(s.out_H.aut(a)[static_cast<std::size_t>(i)])));
      const int idx = bar->index_of(fa).value();
      auto [it, fresh] = class_rep.emplace(bar->orbit_of[static_cast<std::size_t>(idx)], idx);
      if (!fresh) it->second = std::min(it->second, idx);
    }
  const int own = bar->orbit_of[static_cast<std::size_t>(bar->index_of(d.f).value())];
  checks.push_back({kRuleEnvelope, std::to_string(class_rep.size()) + " candidate classes", true});

  std::vector<int> remaining;
  for (auto [id, idx] : class_rep) {
    if (id == own) {
      remaining.push_back(idx);
      continue;
    }
    auto rule = non_conjugate_rules(s, bar->iso_set[static_cast<std::size_t>(idx)], nullptr);
    checks.push_back({kRuleExclusion, "candidate class of Iso(H,K) element " + std::to_string(idx) + " has genus 1" +
                                          (rule ? " by " + *rule : ""),
                      rule.has_value()});
    if (!rule) remaining.push_back(idx);
  }
  if (remaining.size() == 1) {
    GenusReport r = exact(1, class_rep.size() > 1 ? kRuleExclusion : kRuleEnvelope, std::move(checks));
    r.companions.push_back(companion_of(d));
    return r;
  }
  GenusReport r;
  r.kind = GenusKind::Bounds;
  r.lo = 1;
  r.hi = static_cast<std::int64_t>(remaining.size());
  r.rule = kRuleEnvelope;
  r.checks = std::move(checks);
  for (int idx : remaining)
    r.companions.push_back(companion_of(HnnData{G, d.H, d.K, bar->iso_set[static_cast<std::size_t>(idx)], {}}));
  return r;
}

}  // namespace

std::int64_t euler_phi(std::int64_t n) {
  std::int64_t r = n;
  for (std::int64_t p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      r -= r / p;
    }
  if (n > 1) r -= r / n;
  return r;
}

Companion companion_of(const HnnData& d) {
  Companion c{d.H.elements(), d.K.elements(), {}};
  for (int i = 0; i < d.H.order(); ++i) c.f.emplace_back(d.H.element(i), d.f.images[static_cast<std::size_t>(i)]);
  return c;
}

HnnData companion_data(const Group& G, const Companion& c) {
  Subgroup H = Subgroup::from_elements(G, c.H);
  Subgroup K = Subgroup::from_elements(G, c.K);
  SubMap f;
  f.images.assign(static_cast<std::size_t>(H.order()), -1);
  for (auto [h, k] : c.f) {
    if (!H.contains(h)) fail(ErrorCode::NotAHomomorphism, "map entry outside H");
    f.images[static_cast<std::size_t>(H.position(h))] = k;
  }
  if (std::find(f.images.begin(), f.images.end(), -1) != f.images.end())
    return make_hnn(G, H, K, std::span<const std::pair<Elem, Elem>>(c.f));
  return make_hnn(G, H, K, std::move(f));
}

NOutData n_out_image(const BaseContext& ctx, const HnnData& input) {
  const Group& G = ctx.group();
  const bool conjugate_pair = input.H == input.K || is_conjugate_subgroups(G, input.H, input.K).has_value();
  const HnnData d = conjugate_pair ? normalize_hnn(input) : input;
  const auto& iH = ctx.info(d.H);
  NOutData r;
  r.out = iH.out;
  const OutGroup& out = *r.out;
  r.n_tilde_G1.assign(iH.images.n_tilde.begin(), iH.images.n_tilde.end());
  std::sort(r.n_tilde_G1.begin(), r.n_tilde_G1.end());
  std::vector<int> gens = r.n_tilde_G1;
  if (conjugate_pair) {
    r.construction = NOutData::Construction::Normal;
    gens.push_back(out.coset_of(aut_index(d.H, out, d.f)));
  } else {
    r.construction = NOutData::Construction::NonConjugate;
    const auto& iK = ctx.info(d.K);
    NonConjugateSetting s{ctx, d, out, *iK.out, r.n_tilde_G1, iK.images.n_bar, false, false};
    for (int y : conjugated_n(s, d.f)) gens.push_back(y);
  }
  r.n_tilde_G = out_subgroup(out, gens);
  bool normal = true;
  for (int g : gens)
    for (int n : r.n_tilde_G1)
      normal = normal && contains_sorted(r.n_tilde_G1, out.out_mul(out.out_mul(g, n), out.out_inv(g)));
  if (normal) r.quotient_order = static_cast<int>(r.n_tilde_G.size() / r.n_tilde_G1.size());
  return r;
}

GenusReport genus_report(const BaseContext& ctx, const HnnData& d) {
  const Group& G = ctx.group();
  if (!(d.base == G)) fail(ErrorCode::BaseMismatch, "HNN datum over a different base table");
  std::vector<RuleCheck> checks;
  if (d.H == d.K) return normal_report(ctx, d, std::move(checks));
  if (auto g = is_conjugate_subgroups(G, d.H, d.K)) {
    checks.push_back({"normalize", "K = H^g1 with g1 = " + G.label(*g) + "; f replaced by τ_g1∘f", true});
    return normal_report(ctx, normalize_hnn(d), std::move(checks));
  }
  checks.push_back({"normalize", "H and K are not conjugate in G1", false});
  return non_conjugate_report(ctx, d, std::move(checks));
}

GenusReport genus_in_class_A(const BaseContext& ctx, const HnnData& d) {
  GenusReport r = genus_report(ctx, d);
  const KInvariant k = k_invariant(ctx, d.H, d.K);
  r.checks.push_back({"k(G1,H,K)=1 (finite base)",
                      "l_H = " + std::to_string(k.l_H) + ", l_K = " + std::to_string(k.l_K), k.value == 1});
  r.rule += "; k(G1,H,K)=1 (finite base)";
  return r;
}

KInvariant k_invariant(const BaseContext& ctx, const Subgroup& H, const Subgroup& K) {
  const OutGroup& A = ctx.aut();
  auto orbit_size = [&](const Subgroup& X) {
    std::set<std::vector<Elem>> seen;
    for (int a = 0; a < A.aut_order(); ++a) seen.insert(image_subgroup(X, A.aut(a)).elements());
    return static_cast<int>(seen.size());
  };
  KInvariant k;
  // The Aut(G1)-class of H is a single Aut(G1)-orbit when G1 is its own
  // completion, so l_H = l_K = 1 and the bound l_H·l_K is attained.
  k.l_H = 1;
  k.l_K = 1;
  k.value = k.l_H * k.l_K;
  k.orbit_H = orbit_size(H);
  k.orbit_K = orbit_size(K);
  return k;
}

}  // namespace hnn
