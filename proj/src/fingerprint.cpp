#include "hnn/fingerprint.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <numeric>
#include <thread>
#include <unordered_map>

namespace hnn {

namespace {

// Cheap isomorphism invariants; a full test runs only when these agree.
std::vector<int> signature(const Group& G) {
  std::vector<int> sig{G.order(), G.is_abelian() ? 1 : 0, center(G).order()};
  std::map<std::pair<int, int>, int> profile;  // (element order, centralizer order) -> count
  for (Elem x = 0; x < G.order(); ++x) {
    int c = 0;
    for (Elem y = 0; y < G.order(); ++y) c += G.mul(x, y) == G.mul(y, x);
    ++profile[{G.element_order(x), c}];
  }
  for (auto [k, v] : profile) sig.insert(sig.end(), {k.first, k.second, v});
  return sig;
}

void check_probe(const Group& Q, const Limits& limits) {
  if (Q.order() > limits.probe_order)
    fail(ErrorCode::CapExceeded, "probe " + Q.name() + " has order " + std::to_string(Q.order()) + " > " +
                                     std::to_string(limits.probe_order));
}

struct Prepared {
  std::vector<Elem> h;   // generators of H in G1
  std::vector<Elem> fh;  // their images under f
};

}  // namespace

bool ProbeSet::add(const Group& Q, std::string label) {
  if (Q.order() > order_bound) return false;
  const auto sig = signature(Q);
  for (const auto& p : probes)
    if (p.group.order() == Q.order() && signature(p.group) == sig && are_isomorphic(p.group, Q)) return false;
  probes.push_back({std::move(label), Q});
  return true;
}

void ProbeSet::sort() {
  std::stable_sort(probes.begin(), probes.end(),
                   [](const Probe& a, const Probe& b) { return a.group.order() < b.group.order(); });
}

ProbeSet probe_catalog(int order_bound) {
  ProbeSet set;
  set.order_bound = order_bound;
  const int B = order_bound;
  for (int n = 1; n <= B; ++n) set.add(cyclic_group(n), "C" + std::to_string(n));
  for (int p : {2, 3, 5, 7})
    for (int k = 2, q = p * p; q <= B; ++k, q *= p)
      set.add(elementary_abelian_group(p, k), "C" + std::to_string(p) + "^" + std::to_string(k));
  for (int a = 2; a * a <= B; ++a)
    for (int b = a; a * b <= B; b += a) set.add(direct_product(cyclic_group(a), cyclic_group(b)), "C" + std::to_string(a) + "xC" + std::to_string(b));
  for (int a = 2; a * a * a <= B; ++a)
    for (int b = a; a * a * b <= B; b += a)
      for (int c = b; a * b * c <= B; c += b)
        set.add(direct_product(direct_product(cyclic_group(a), cyclic_group(b)), cyclic_group(c)),
                "C" + std::to_string(a) + "xC" + std::to_string(b) + "xC" + std::to_string(c));
  for (int n = 6; n <= B; n += 2) set.add(dihedral_group(n), "D" + std::to_string(n));
  for (int n = 8; n <= B; n += 4) set.add(dicyclic_group(n), n == 8 ? "Q8" : "Dic" + std::to_string(n));
  for (int d = 3, f = 6; d <= 5 && f <= B; ++d, f *= d) set.add(symmetric_group(d), "S" + std::to_string(d));
  for (int d = 4, f = 12; d <= 5 && f <= B; ++d, f = f * d) set.add(alternating_group(d), "A" + std::to_string(d));
  // Metacyclic C_n : C_m, one action per unit; isomorphic ones are dropped.
  for (int n = 3; n * 2 <= B; ++n)
    for (int m = 2; n * m <= B; ++m)
      for (int a = 2; a < n; ++a) {
        if (std::gcd(a, n) != 1) continue;
        long long acc = 1;
        for (int i = 0; i < m; ++i) acc = acc * a % n;
        if (acc != 1) continue;
        set.add(semidirect_cyclic(n, m, a), "C" + std::to_string(n) + ":C" + std::to_string(m) + "[" + std::to_string(a) + "]");
      }
  // Products with the small nonabelian probes found so far.
  std::vector<Probe> nonabelian;
  for (const auto& p : set.probes)
    if (!p.group.is_abelian()) nonabelian.push_back(p);
  for (int c : {2, 3})
    for (const auto& p : nonabelian)
      if (c * p.group.order() <= B) set.add(direct_product(cyclic_group(c), p.group), "C" + std::to_string(c) + "x" + p.label);
  // A x| C_m for every probe A and one automorphism per Out(A) class; these
  // are the natural finite quotients of HNN groups whose f extends to A.
  const std::vector<Probe> bases = set.probes;
  for (const auto& p : bases) {
    const Group& A = p.group;
    if (A.order() < 2 || 2 * A.order() > B) continue;
    const OutGroup out(A);
    for (int c = 0; c < out.out_order(); ++c) {
      const int a = out.representative(c);
      int k = 1;
      for (int power = a; power != out.identity_aut(); power = out.compose(a, power)) ++k;
      for (int m = std::max(k, 2); A.order() * m <= B; m += k)
        set.add(semidirect_by_automorphism(A, out.aut(a), m),
                p.label + ":C" + std::to_string(m) + "<" + std::to_string(c) + ">");
    }
  }
  set.sort();
  return set;
}

std::vector<std::uint64_t> hom_counts_bulk(std::span<const HnnData> data, const Group& Q, const Limits& limits) {
  check_probe(Q, limits);
  std::vector<std::uint64_t> out(data.size(), 0);
  if (data.empty()) return out;
  const Group& G = data.front().base;
  std::vector<Prepared> prep;
  std::size_t max_gens = 0;
  for (const auto& d : data) {
    if (!(d.base == G)) fail(ErrorCode::BaseMismatch, "bulk hom counts need a common base");
    Prepared p;
    p.h = d.H.generators();
    for (Elem h : p.h) p.fh.push_back(d.apply(h));
    max_gens = std::max(max_gens, p.h.size());
    prep.push_back(std::move(p));
  }
  const int n = Q.order();
  const auto nz = static_cast<std::size_t>(n);
  std::vector<Elem> tau(nz * nz);  // tau[q*n + x] = q x q^-1
  for (Elem q = 0; q < n; ++q)
    for (Elem x = 0; x < n; ++x) tau[static_cast<std::size_t>(q) * nz + static_cast<std::size_t>(x)] = Q.tau(q, x);
  auto fiber = [&](const std::vector<Elem>& img, const Prepared& p) {
    std::uint64_t c = 0;
    for (Elem q = 0; q < n; ++q) {
      const Elem* row = &tau[static_cast<std::size_t>(q) * nz];
      bool ok = true;
      for (std::size_t i = 0; i < p.h.size() && ok; ++i)
        ok = row[img[static_cast<std::size_t>(p.h[i])]] == img[static_cast<std::size_t>(p.fh[i])];
      c += ok;
    }
    return c;
  };
  // Fibers depend only on the image tuples, so they are shared across data.
  // Key: tuple length, then one 16-bit (φ(h), φ(f(h))) slot per generator.
  const bool cacheable = n <= 256 && max_gens <= 3;
  std::unordered_map<std::uint64_t, std::uint64_t> cache;
  for_each_hom(G, Q, false, [&](const std::vector<Elem>& img) {
    for (std::size_t i = 0; i < prep.size(); ++i) {
      const Prepared& p = prep[i];
      if (!cacheable) {
        out[i] += fiber(img, p);
        continue;
      }
      std::uint64_t key = p.h.size();
      for (std::size_t j = 0; j < p.h.size(); ++j)
        key = (key << 16) | (static_cast<std::uint64_t>(img[static_cast<std::size_t>(p.h[j])]) << 8) |
              static_cast<std::uint64_t>(img[static_cast<std::size_t>(p.fh[j])]);
      auto it = cache.find(key);
      if (it == cache.end()) it = cache.emplace(key, fiber(img, p)).first;
      out[i] += it->second;
    }
    return true;
  });
  return out;
}

std::uint64_t hom_count_hnn(const HnnData& d, const Group& Q, const Limits& limits) {
  return hom_counts_bulk(std::span<const HnnData>(&d, 1), Q, limits).front();
}

std::vector<FingerprintVector> fingerprints(std::span<const HnnData> data, const ProbeSet& probes, int threads,
                                            const Limits& limits) {
  const std::size_t np = probes.probes.size();
  std::vector<std::vector<std::uint64_t>> by_probe(np);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < np; i = next++) by_probe[i] = hom_counts_bulk(data, probes.probes[i].group, limits);
  };
  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(np)));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  std::vector<FingerprintVector> out(data.size());
  for (std::size_t k = 0; k < data.size(); ++k)
    for (std::size_t i = 0; i < np; ++i) {
      out[k].labels.push_back(probes.probes[i].label);
      out[k].orders.push_back(probes.probes[i].group.order());
      out[k].counts.push_back(by_probe[i][k]);
    }
  return out;
}

FingerprintVector fingerprint(const HnnData& d, const ProbeSet& probes, int threads, const Limits& limits) {
  return fingerprints(std::span<const HnnData>(&d, 1), probes, threads, limits).front();
}

FingerprintComparison compare(const FingerprintVector& a, const FingerprintVector& b) {
  if (a.labels != b.labels) fail(ErrorCode::BadParams, "fingerprints over different probe sets");
  FingerprintComparison r;
  for (std::size_t i = 0; i < a.counts.size(); ++i)
    if (a.counts[i] != b.counts[i]) {
      r.equal = false;
      r.first_difference = a.labels[i];
      r.order = a.orders[i];
      r.count_a = a.counts[i];
      r.count_b = b.counts[i];
      break;
    }
  return r;
}

}  // namespace hnn
