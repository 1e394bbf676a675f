#include "hnn/group.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <unordered_map>

namespace hnn {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::BadTable: return "BadTable";
    case ErrorCode::NotAssociative: return "NotAssociative";
    case ErrorCode::NoIdentity: return "NoIdentity";
    case ErrorCode::NoInverse: return "NoInverse";
    case ErrorCode::UnknownName: return "UnknownName";
    case ErrorCode::BadParams: return "BadParams";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::NotASubgroup: return "NotASubgroup";
    case ErrorCode::NotAHomomorphism: return "NotAHomomorphism";
    case ErrorCode::NotConjugate: return "NotConjugate";
    case ErrorCode::AlphaDoesNotPreserveH: return "AlphaDoesNotPreserveH";
    case ErrorCode::EmptyIsoSet: return "EmptyIsoSet";
    case ErrorCode::BaseMismatch: return "BaseMismatch";
    case ErrorCode::HypothesisNotVerified: return "HypothesisNotVerified";
  }
  return "Error";
}

struct Group::Data {
  int n = 1;
  std::vector<Elem> table{0};
  Elem identity = 0;
  std::vector<Elem> inverse{0};
  std::vector<int> orders{1};
  std::string name;
  std::vector<std::string> labels{"1"};
  std::unordered_map<std::string, Elem> by_label;
  std::vector<Elem> generators;
  std::vector<Perm> perm_generators;
  int perm_degree = 0;
  bool abelian = true;
};

namespace {

// Elements of <seeds>, in discovery order, using the raw table.
std::vector<Elem> closure_of(int n, const std::vector<Elem>& table, Elem identity,
                             const std::vector<Elem>& seeds, std::vector<char>& mark) {
  std::fill(mark.begin(), mark.end(), 0);
  std::vector<Elem> out{identity};
  mark[static_cast<std::size_t>(identity)] = 1;
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (Elem s : seeds) {
      Elem z = table[static_cast<std::size_t>(out[i]) * n + s];
      if (!mark[static_cast<std::size_t>(z)]) {
        mark[static_cast<std::size_t>(z)] = 1;
        out.push_back(z);
      }
    }
  }
  return out;
}

std::vector<Elem> greedy_generators(const Group::Data& d) {
  const int n = d.n;
  std::vector<Elem> gens;
  std::vector<char> mark(static_cast<std::size_t>(n), 0);
  std::vector<char> in_closure(static_cast<std::size_t>(n), 0);
  in_closure[static_cast<std::size_t>(d.identity)] = 1;
  std::size_t covered = 1;
  // Rarer element orders make for fewer image candidates later on.
  std::vector<int> order_count(static_cast<std::size_t>(n) + 1, 0);
  for (int x = 0; x < n; ++x) ++order_count[static_cast<std::size_t>(d.orders[static_cast<std::size_t>(x)])];
  while (covered < static_cast<std::size_t>(n)) {
    Elem best = -1;
    std::size_t best_size = 0;
    int best_rarity = 0;
    for (Elem x = 0; x < n; ++x) {
      if (in_closure[static_cast<std::size_t>(x)]) continue;
      std::size_t size;
      if (n <= 512) {
        auto seeds = gens;
        seeds.push_back(x);
        size = closure_of(n, d.table, d.identity, seeds, mark).size();
      } else {
        size = static_cast<std::size_t>(d.orders[static_cast<std::size_t>(x)]);
      }
      int rarity = order_count[static_cast<std::size_t>(d.orders[static_cast<std::size_t>(x)])];
      if (best < 0 || size > best_size || (size == best_size && rarity < best_rarity)) {
        best = x;
        best_size = size;
        best_rarity = rarity;
      }
    }
    gens.push_back(best);
    auto cl = closure_of(n, d.table, d.identity, gens, mark);
    std::fill(in_closure.begin(), in_closure.end(), 0);
    for (Elem z : cl) in_closure[static_cast<std::size_t>(z)] = 1;
    covered = cl.size();
  }
  return gens;
}

}  // namespace

Group::Group() : d_(std::make_shared<Data>()) {
  table_ = d_->table.data();
  n_ = 1;
}

Group Group::from_trusted_table(int order, std::vector<Elem> table, std::string name,
                                std::vector<std::string> labels, std::vector<Perm> perm_generators,
                                int perm_degree) {
  auto d = std::make_shared<Data>();
  d->n = order;
  d->table = std::move(table);
  const auto n = static_cast<std::size_t>(order);
  d->identity = -1;
  for (std::size_t e = 0; e < n && d->identity < 0; ++e) {
    bool ok = true;
    for (std::size_t x = 0; x < n && ok; ++x)
      ok = d->table[e * n + x] == static_cast<Elem>(x) && d->table[x * n + e] == static_cast<Elem>(x);
    if (ok) d->identity = static_cast<Elem>(e);
  }
  d->inverse.assign(n, -1);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      if (d->table[x * n + y] == d->identity) {
        d->inverse[x] = static_cast<Elem>(y);
        break;
      }
  d->orders.assign(n, 1);
  for (std::size_t x = 0; x < n; ++x) {
    Elem p = static_cast<Elem>(x);
    int k = 1;
    while (p != d->identity) {
      p = d->table[static_cast<std::size_t>(p) * n + x];
      ++k;
    }
    d->orders[x] = k;
  }
  d->abelian = true;
  for (std::size_t x = 0; x < n && d->abelian; ++x)
    for (std::size_t y = x + 1; y < n; ++y)
      if (d->table[x * n + y] != d->table[y * n + x]) {
        d->abelian = false;
        break;
      }
  d->name = std::move(name);
  if (labels.size() != n) {
    labels.clear();
    for (std::size_t x = 0; x < n; ++x) labels.push_back(std::to_string(x));
  }
  d->labels = std::move(labels);
  for (std::size_t x = 0; x < n; ++x) d->by_label.emplace(d->labels[x], static_cast<Elem>(x));
  d->perm_generators = std::move(perm_generators);
  d->perm_degree = perm_degree;
  d->generators = greedy_generators(*d);
  Group g;
  g.d_ = std::move(d);
  g.table_ = g.d_->table.data();
  g.n_ = n;
  return g;
}

int Group::order() const noexcept { return d_->n; }
Elem Group::identity() const noexcept { return d_->identity; }
Elem Group::inv(Elem a) const noexcept { return d_->inverse[static_cast<std::size_t>(a)]; }
int Group::element_order(Elem a) const noexcept { return d_->orders[static_cast<std::size_t>(a)]; }
const std::string& Group::name() const noexcept { return d_->name; }
const std::string& Group::label(Elem a) const { return d_->labels.at(static_cast<std::size_t>(a)); }
const std::vector<Elem>& Group::generators() const noexcept { return d_->generators; }
const std::vector<Perm>& Group::perm_generators() const noexcept { return d_->perm_generators; }
int Group::perm_degree() const noexcept { return d_->perm_degree; }
bool Group::is_abelian() const noexcept { return d_->abelian; }
const std::vector<Elem>& Group::table() const noexcept { return d_->table; }

Elem Group::pow(Elem a, long long k) const {
  const int m = element_order(a);
  k %= m;
  if (k < 0) k += m;
  Elem r = identity();
  for (long long i = 0; i < k; ++i) r = mul(r, a);
  return r;
}

std::optional<Elem> Group::find(std::string_view token) const {
  auto it = d_->by_label.find(std::string(token));
  if (it != d_->by_label.end()) return it->second;
  int v = 0;
  auto [p, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec == std::errc() && p == token.data() + token.size() && v >= 0 && v < d_->n) return v;
  return std::nullopt;
}

bool Group::same_law(const Group& other) const noexcept {
  return d_ == other.d_ || (d_->n == other.d_->n && d_->table == other.d_->table);
}

// ---------------------------------------------------------------- tables

Group make_group_from_table(int order, const std::vector<std::vector<Elem>>& table, std::string name,
                            std::vector<std::string> labels) {
  if (order < 1) fail(ErrorCode::BadTable, "order must be positive");
  const auto n = static_cast<std::size_t>(order);
  if (table.size() != n) fail(ErrorCode::BadTable, "table has " + std::to_string(table.size()) + " rows");
  std::vector<Elem> flat;
  flat.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (table[i].size() != n) fail(ErrorCode::BadTable, "row " + std::to_string(i) + " has wrong length");
    for (Elem v : table[i]) {
      if (v < 0 || v >= order) fail(ErrorCode::BadTable, "entry out of range in row " + std::to_string(i));
      flat.push_back(v);
    }
  }
  auto at = [&](std::size_t a, std::size_t b) { return static_cast<std::size_t>(flat[a * n + b]); };
  std::optional<std::size_t> e;
  for (std::size_t c = 0; c < n && !e; ++c) {
    bool ok = true;
    for (std::size_t x = 0; x < n && ok; ++x) ok = at(c, x) == x && at(x, c) == x;
    if (ok) e = c;
  }
  if (!e) fail(ErrorCode::NoIdentity, "no element is a two-sided identity");
  for (std::size_t x = 0; x < n; ++x) {
    bool found = false;
    for (std::size_t y = 0; y < n && !found; ++y) found = at(x, y) == *e && at(y, x) == *e;
    if (!found) fail(ErrorCode::NoInverse, "element " + std::to_string(x) + " has no two-sided inverse");
  }
  auto report = [](std::size_t a, std::size_t b, std::size_t c) {
    fail(ErrorCode::NotAssociative, "(" + std::to_string(a) + "*" + std::to_string(b) + ")*" +
                                        std::to_string(c) + " != " + std::to_string(a) + "*(" +
                                        std::to_string(b) + "*" + std::to_string(c) + ")");
  };
  if (n <= 512) {
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        const std::size_t ab = at(a, b);
        for (std::size_t c = 0; c < n; ++c)
          if (at(ab, c) != at(a, at(b, c))) report(a, b, c);
      }
  } else {
    // Light's test: it suffices to take middle elements from a set whose
    // left-normed products reach every element.
    std::vector<char> mark(n, 0);
    std::vector<Elem> middles;
    std::vector<char> reached(n, 0);
    for (std::size_t x = 0; x < n; ++x) {
      if (reached[x]) continue;
      middles.push_back(static_cast<Elem>(x));
      for (Elem z : closure_of(order, flat, static_cast<Elem>(*e), middles, mark)) reached[static_cast<std::size_t>(z)] = 1;
    }
    for (Elem mid : middles) {
      const auto m = static_cast<std::size_t>(mid);
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t c = 0; c < n; ++c)
          if (at(at(a, m), c) != at(a, at(m, c))) report(a, m, c);
    }
  }
  return Group::from_trusted_table(order, std::move(flat), std::move(name), std::move(labels));
}

// ----------------------------------------------------------- permutations

Perm compose(const Perm& p, const Perm& q) {
  Perm r(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) r[i] = p[static_cast<std::size_t>(q[i])];
  return r;
}

Perm inverse(const Perm& p) {
  Perm r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r[static_cast<std::size_t>(p[i])] = static_cast<int>(i);
  return r;
}

std::string cycle_label(const Perm& p) {
  std::string out;
  std::vector<char> seen(p.size(), 0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i] || p[i] == static_cast<int>(i)) continue;
    out += '(';
    std::size_t j = i;
    bool first = true;
    while (!seen[j]) {
      seen[j] = 1;
      if (!first) out += ' ';
      out += std::to_string(j);
      first = false;
      j = static_cast<std::size_t>(p[j]);
    }
    out += ')';
  }
  return out.empty() ? "1" : out;
}

namespace {

Group group_from_element_list(std::vector<Perm> elems, std::string name, std::vector<Perm> gens, int degree) {
  std::sort(elems.begin(), elems.end());
  std::map<Perm, Elem> index;
  for (std::size_t i = 0; i < elems.size(); ++i) index.emplace(elems[i], static_cast<Elem>(i));
  const std::size_t n = elems.size();
  std::vector<Elem> table(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) table[a * n + b] = index.at(compose(elems[a], elems[b]));
  std::vector<std::string> labels;
  for (const auto& p : elems) labels.push_back(cycle_label(p));
  return Group::from_trusted_table(static_cast<int>(n), std::move(table), std::move(name), std::move(labels),
                                   std::move(gens), degree);
}

}  // namespace

Group group_from_permutations(int degree, const std::vector<Perm>& generators, std::string name,
                              const Limits& limits) {
  if (degree < 1) fail(ErrorCode::BadParams, "permutation degree must be positive");
  for (const auto& g : generators) {
    if (g.size() != static_cast<std::size_t>(degree)) fail(ErrorCode::BadParams, "generator has wrong degree");
    std::vector<char> seen(g.size(), 0);
    for (int v : g) {
      if (v < 0 || v >= degree || seen[static_cast<std::size_t>(v)])
        fail(ErrorCode::BadParams, "generator is not a permutation");
      seen[static_cast<std::size_t>(v)] = 1;
    }
  }
  Perm id(static_cast<std::size_t>(degree));
  std::iota(id.begin(), id.end(), 0);
  std::set<Perm> seen{id};
  std::vector<Perm> elems{id};
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (const auto& g : generators) {
      Perm z = compose(elems[i], g);
      if (seen.insert(z).second) {
        elems.push_back(std::move(z));
        if (elems.size() > static_cast<std::size_t>(limits.table_order))
          fail(ErrorCode::CapExceeded, "permutation group larger than " + std::to_string(limits.table_order));
      }
    }
  }
  return group_from_element_list(std::move(elems), std::move(name), generators, degree);
}

// ---------------------------------------------------------- named groups

namespace {

std::string power_label(const char* base, int k) {
  if (k == 0) return "";
  if (k == 1) return base;
  return std::string(base) + std::to_string(k);
}

// Builds a table from a product on [0, n) and per-element labels.
template <class Mul, class Label>
Group tabulate(int n, Mul mul, Label label, std::string name) {
  const auto sz = static_cast<std::size_t>(n);
  std::vector<Elem> table(sz * sz);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) table[static_cast<std::size_t>(a) * sz + b] = mul(a, b);
  std::vector<std::string> labels;
  for (int a = 0; a < n; ++a) {
    std::string s = label(a);
    labels.push_back(s.empty() ? "1" : s);
  }
  return Group::from_trusted_table(n, std::move(table), std::move(name), std::move(labels));
}

int mod(long long a, int m) {
  long long r = a % m;
  return static_cast<int>(r < 0 ? r + m : r);
}

}  // namespace

Group cyclic_group(int n) {
  if (n < 1) fail(ErrorCode::BadParams, "cyclic order must be positive");
  return tabulate(
      n, [n](int a, int b) { return (a + b) % n; }, [](int a) { return power_label("g", a); },
      "C" + std::to_string(n));
}

Group dihedral_group(int order) {
  if (order < 2 || order % 2) fail(ErrorCode::BadParams, "dihedral order must be even and at least 2");
  const int n = order / 2;
  // r^i c^j is index i + n*j, with c r c^-1 = r^-1.
  return tabulate(
      order,
      [n](int a, int b) {
        int i = a % n, j = a / n, k = b % n, l = b / n;
        int e = j ? i - k : i + k;
        return mod(e, n) + n * ((j + l) % 2);
      },
      [n](int a) { return power_label("r", a % n) + (a / n ? "c" : ""); }, "D" + std::to_string(order));
}

Group dicyclic_group(int order) {
  if (order < 8 || order % 4) fail(ErrorCode::BadParams, "dicyclic order must be a multiple of 4, at least 8");
  const int n = order / 4;
  const int m = 2 * n;
  // a^i x^j is index i + 2n*j, with a^2n = 1, x^2 = a^n, x a x^-1 = a^-1.
  auto mul = [n, m](int a, int b) {
    int p = a % m, j = a / m, q = b % m, k = b / m;
    if (!j) return mod(p + q, m) + m * k;
    if (!k) return mod(p - q, m) + m;
    return mod(p - q + n, m);
  };
  if (order == 8) {
    static const char* q8[] = {"1", "i", "-1", "-i", "j", "k", "-j", "-k"};
    return tabulate(8, mul, [](int a) { return std::string(q8[a]); }, "Q8");
  }
  return tabulate(
      order, mul, [m](int a) { return power_label("a", a % m) + (a / m ? "x" : ""); },
      "Dic" + std::to_string(order));
}

namespace {

std::vector<Perm> all_permutations(int degree, bool even_only) {
  Perm p(static_cast<std::size_t>(degree));
  std::iota(p.begin(), p.end(), 0);
  std::vector<Perm> out;
  do {
    if (even_only) {
      int inversions = 0;
      for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j) inversions += p[i] > p[j];
      if (inversions % 2) continue;
    }
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

std::vector<Perm> symmetric_generators(int degree, bool even_only) {
  std::vector<Perm> gens;
  Perm id(static_cast<std::size_t>(degree));
  std::iota(id.begin(), id.end(), 0);
  if (degree < 2) return gens;
  if (!even_only) {
    Perm t = id;
    std::swap(t[0], t[1]);
    Perm c = id;
    std::rotate(c.begin(), c.begin() + 1, c.end());
    gens = {t, c};
  } else if (degree >= 3) {
    for (int k = 2; k < degree; ++k) {  // 3-cycles (0 1 k)
      Perm c = id;
      c[0] = 1;
      c[1] = k;
      c[static_cast<std::size_t>(k)] = 0;
      gens.push_back(c);
    }
  }
  return gens;
}

}  // namespace

Group symmetric_group(int degree) {
  if (degree < 1 || degree > 7) fail(ErrorCode::BadParams, "symmetric degree must be in 1..7");
  return group_from_element_list(all_permutations(degree, false), "S" + std::to_string(degree),
                                 symmetric_generators(degree, false), degree);
}

Group alternating_group(int degree) {
  if (degree < 1 || degree > 7) fail(ErrorCode::BadParams, "alternating degree must be in 1..7");
  return group_from_element_list(all_permutations(degree, true), "A" + std::to_string(degree),
                                 symmetric_generators(degree, true), degree);
}

namespace {
bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}
}  // namespace

Group elementary_abelian_group(int p, int k) {
  if (!is_prime(p) || k < 1) fail(ErrorCode::BadParams, "elementary abelian needs a prime p and k >= 1");
  long long n = 1;
  for (int i = 0; i < k; ++i) {
    n *= p;
    if (n > 4096) fail(ErrorCode::BadParams, "elementary abelian group too large");
  }
  // Index = sum v_i p^i; the law is coordinatewise addition mod p.
  auto digits = [p, k](int a) {
    std::vector<int> v;
    for (int i = 0; i < k; ++i, a /= p) v.push_back(a % p);
    return v;
  };
  return tabulate(
      static_cast<int>(n),
      [=](int a, int b) {
        auto x = digits(a), y = digits(b);
        int r = 0, w = 1;
        for (int i = 0; i < k; ++i, w *= p) r += ((x[static_cast<std::size_t>(i)] + y[static_cast<std::size_t>(i)]) % p) * w;
        return r;
      },
      [=](int a) {
        if (a == 0) return std::string();
        auto v = digits(a);
        std::string s = "(";
        for (int i = 0; i < k; ++i) s += (i ? "," : "") + std::to_string(v[static_cast<std::size_t>(i)]);
        return s + ")";
      },
      "E" + std::to_string(p) + "^" + std::to_string(k));
}

Group direct_product(const Group& a, const Group& b) {
  const int na = a.order(), nb = b.order();
  if (static_cast<long long>(na) * nb > 4096) fail(ErrorCode::BadParams, "direct product too large");
  // (x, y) is index x + |A|*y.
  return tabulate(
      na * nb,
      [&](int u, int v) { return a.mul(u % na, v % na) + na * b.mul(u / na, v / na); },
      [&](int u) {
        if (u % na == a.identity() && u / na == b.identity()) return std::string();
        return "(" + a.label(u % na) + "," + b.label(u / na) + ")";
      },
      a.name() + "x" + b.name());
}

Group semidirect_cyclic(int n, int m, int action) {
  if (n < 1 || m < 1) fail(ErrorCode::BadParams, "semidirect orders must be positive");
  if (static_cast<long long>(n) * m > 4096) fail(ErrorCode::BadParams, "semidirect product too large");
  action = mod(action, n);
  if (std::gcd(action, n) != 1 && n > 1) fail(ErrorCode::BadParams, "action is not a unit mod n");
  long long acc = 1;
  for (int i = 0; i < m; ++i) acc = acc * action % n;
  if (n > 1 && acc % n != 1 % n) fail(ErrorCode::BadParams, "action^m is not 1 mod n");
  std::vector<long long> apow(static_cast<std::size_t>(m), 1);
  for (int j = 1; j < m; ++j) apow[static_cast<std::size_t>(j)] = apow[static_cast<std::size_t>(j) - 1] * action % std::max(n, 1);
  // x^i y^j is index i + n*j.
  return tabulate(
      n * m,
      [=](int u, int v) {
        int i = u % n, j = u / n, k = v % n, l = v / n;
        return mod(i + apow[static_cast<std::size_t>(j)] * k, n) + n * ((j + l) % m);
      },
      [=](int u) { return power_label("x", u % n) + power_label("y", u / n); },
      "C" + std::to_string(n) + ":C" + std::to_string(m) + "[" + std::to_string(action) + "]");
}

Group semidirect_by_automorphism(const Group& A, std::span<const Elem> alpha, int m, std::string name) {
  const int na = A.order();
  if (m < 1) fail(ErrorCode::BadParams, "cyclic factor order must be positive");
  if (static_cast<long long>(na) * m > 4096) fail(ErrorCode::BadParams, "semidirect product too large");
  if (alpha.size() != static_cast<std::size_t>(na)) fail(ErrorCode::BadParams, "automorphism has the wrong length");
  std::vector<bool> hit(static_cast<std::size_t>(na), false);
  for (Elem x = 0; x < na; ++x) {
    const Elem y = alpha[static_cast<std::size_t>(x)];
    if (y < 0 || y >= na || hit[static_cast<std::size_t>(y)]) fail(ErrorCode::BadParams, "action is not a bijection");
    hit[static_cast<std::size_t>(y)] = true;
    for (Elem z = 0; z < na; ++z)
      if (alpha[static_cast<std::size_t>(A.mul(x, z))] != A.mul(y, alpha[static_cast<std::size_t>(z)]))
        fail(ErrorCode::BadParams, "action is not a homomorphism");
  }
  // powers[j] = alpha^j
  std::vector<std::vector<Elem>> powers{std::vector<Elem>(static_cast<std::size_t>(na))};
  std::iota(powers[0].begin(), powers[0].end(), 0);
  for (int j = 1; j <= m; ++j) {
    std::vector<Elem> next(static_cast<std::size_t>(na));
    for (Elem x = 0; x < na; ++x) next[static_cast<std::size_t>(x)] = alpha[static_cast<std::size_t>(powers.back()[static_cast<std::size_t>(x)])];
    powers.push_back(std::move(next));
  }
  if (powers.back() != powers.front()) fail(ErrorCode::BadParams, "action^m is not the identity");
  if (name.empty()) name = A.name() + ":C" + std::to_string(m);
  return tabulate(
      na * m,
      [&](int u, int v) {
        const int a = u % na, j = u / na, b = v % na, l = v / na;
        return A.mul(a, powers[static_cast<std::size_t>(j)][static_cast<std::size_t>(b)]) + na * ((j + l) % m);
      },
      [&](int u) {
        std::string s = u % na == A.identity() ? "" : A.label(u % na);
        return s + power_label("y", u / na);
      },
      std::move(name));
}

// -------------------------------------------------------------- subgroups

struct Subgroup::State {
  std::vector<int> pos;
  std::once_flag once;
  std::optional<Group> local;
};

Subgroup::Subgroup(Group parent, std::vector<Elem> sorted_elements)
    : parent_(std::move(parent)), elements_(std::move(sorted_elements)), state_(std::make_shared<State>()) {
  state_->pos.assign(static_cast<std::size_t>(parent_.order()), -1);
  for (std::size_t i = 0; i < elements_.size(); ++i) state_->pos[static_cast<std::size_t>(elements_[i])] = static_cast<int>(i);
  pos_ = state_->pos.data();
}

Subgroup::Subgroup(const Group& G) : Subgroup(G, std::vector<Elem>{G.identity()}) {}

Subgroup Subgroup::from_elements(const Group& G, std::vector<Elem> elements) {
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  for (Elem x : elements)
    if (x < 0 || x >= G.order()) fail(ErrorCode::NotASubgroup, "element index " + std::to_string(x) + " out of range");
  Subgroup s(G, std::move(elements));
  if (!s.contains(G.identity())) fail(ErrorCode::NotASubgroup, "identity missing");
  for (Elem x : s.elements())
    for (Elem y : s.elements())
      if (!s.contains(G.mul(x, y)))
        fail(ErrorCode::NotASubgroup, "not closed: " + G.label(x) + "*" + G.label(y));
  return s;
}

bool Subgroup::is_subset_of(const Subgroup& other) const noexcept {
  for (Elem x : elements_)
    if (!other.contains(x)) return false;
  return true;
}

const Group& Subgroup::as_group() const {
  std::call_once(state_->once, [this] {
    const auto n = elements_.size();
    std::vector<Elem> table(n * n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) table[a * n + b] = position(parent_.mul(elements_[a], elements_[b]));
    std::vector<std::string> labels;
    for (Elem x : elements_) labels.push_back(parent_.label(x));
    state_->local = Group::from_trusted_table(static_cast<int>(n), std::move(table), "", std::move(labels));
  });
  return *state_->local;
}

std::vector<Elem> Subgroup::generators() const {
  std::vector<Elem> out;
  for (Elem g : as_group().generators()) out.push_back(element(g));
  return out;
}

std::strong_ordering Subgroup::operator<=>(const Subgroup& other) const noexcept {
  if (auto c = elements_.size() <=> other.elements_.size(); c != 0) return c;
  return elements_ <=> other.elements_;
}

Subgroup subgroup_closure(const Group& G, std::span<const Elem> seeds) {
  std::vector<Elem> s;
  for (Elem x : seeds) {
    if (x < 0 || x >= G.order()) fail(ErrorCode::NotASubgroup, "element index " + std::to_string(x) + " out of range");
    s.push_back(x);
  }
  std::vector<char> mark(static_cast<std::size_t>(G.order()));
  auto els = closure_of(G.order(), G.table(), G.identity(), s, mark);
  std::sort(els.begin(), els.end());
  return Subgroup(G, std::move(els));
}

Subgroup whole_group(const Group& G) {
  std::vector<Elem> all(static_cast<std::size_t>(G.order()));
  std::iota(all.begin(), all.end(), 0);
  return Subgroup::from_elements(G, std::move(all));
}

namespace {

void require_subgroup_of(const Group& G, const Subgroup& H) {
  if (!G.same_law(H.parent())) fail(ErrorCode::NotASubgroup, "subgroup belongs to a different group");
}

void check_cap(const Group& G, const Limits& limits) {
  if (G.order() > limits.subgroup_order)
    fail(ErrorCode::CapExceeded, "group of order " + std::to_string(G.order()) + " exceeds subgroup cap " +
                                     std::to_string(limits.subgroup_order));
}

}  // namespace

std::vector<Subgroup> all_subgroups(const Group& G, const Limits& limits) {
  check_cap(G, limits);
  const int n = G.order();
  std::vector<char> mark(static_cast<std::size_t>(n));
  // Seeds: one generator per cyclic subgroup.
  std::set<std::vector<Elem>> seen;
  std::vector<Elem> cyclic_gens;
  for (Elem x = 0; x < n; ++x) {
    auto c = closure_of(n, G.table(), G.identity(), {x}, mark);
    std::sort(c.begin(), c.end());
    if (seen.insert(c).second) cyclic_gens.push_back(x);
  }
  struct Node {
    std::vector<Elem> elements;
    std::vector<Elem> gens;
  };
  std::vector<Node> nodes;
  for (Elem x : cyclic_gens) {
    auto c = closure_of(n, G.table(), G.identity(), {x}, mark);
    std::sort(c.begin(), c.end());
    nodes.push_back({std::move(c), {x}});
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (Elem x : cyclic_gens) {
      const auto& cur = nodes[i].elements;
      if (std::binary_search(cur.begin(), cur.end(), x)) continue;
      auto gens = nodes[i].gens;
      gens.push_back(x);
      auto c = closure_of(n, G.table(), G.identity(), gens, mark);
      std::sort(c.begin(), c.end());
      if (seen.insert(c).second) nodes.push_back({std::move(c), std::move(gens)});
    }
  }
  std::vector<Subgroup> out;
  out.reserve(nodes.size());
  for (auto& nd : nodes) out.push_back(Subgroup::from_elements(G, std::move(nd.elements)));
  std::sort(out.begin(), out.end());
  return out;
}

Subgroup conjugate(const Subgroup& H, Elem g) {
  const Group& G = H.parent();
  std::vector<Elem> els;
  for (Elem h : H.elements()) els.push_back(G.conj(h, g));
  std::sort(els.begin(), els.end());
  return Subgroup::from_elements(G, std::move(els));
}

std::vector<SubgroupClass> conjugacy_classes_of_subgroups(const Group& G, const std::vector<Subgroup>& subs) {
  std::map<std::vector<Elem>, std::size_t> index;
  for (std::size_t i = 0; i < subs.size(); ++i) index.emplace(subs[i].elements(), i);
  std::vector<int> assigned(subs.size(), -1);
  std::vector<SubgroupClass> out;
  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (assigned[i] >= 0) continue;
    const int cls = static_cast<int>(out.size());
    std::map<std::size_t, Elem> members{{i, G.identity()}};
    assigned[i] = cls;
    for (Elem g = 0; g < G.order(); ++g) {
      std::vector<Elem> els;
      for (Elem h : subs[i].elements()) els.push_back(G.conj(h, g));
      std::sort(els.begin(), els.end());
      std::size_t j = index.at(els);
      if (assigned[j] < 0) {
        assigned[j] = cls;
        members.emplace(j, g);
      }
    }
    SubgroupClass sc{subs[i], {}, {}};
    for (auto [j, g] : members) {
      sc.members.push_back(subs[j]);
      sc.witnesses.push_back(g);
    }
    out.push_back(std::move(sc));
  }
  return out;
}

std::vector<SubgroupClass> conjugacy_classes_of_subgroups(const Group& G, const Limits& limits) {
  return conjugacy_classes_of_subgroups(G, all_subgroups(G, limits));
}

Subgroup normalizer(const Group& G, const Subgroup& H) {
  require_subgroup_of(G, H);
  std::vector<Elem> els;
  for (Elem g = 0; g < G.order(); ++g) {
    bool ok = true;
    for (Elem h : H.elements())
      if (!H.contains(G.conj(h, g))) {
        ok = false;
        break;
      }
    if (ok) els.push_back(g);
  }
  return Subgroup::from_elements(G, std::move(els));
}

Subgroup centralizer(const Group& G, const Subgroup& H) {
  require_subgroup_of(G, H);
  std::vector<Elem> els;
  for (Elem g = 0; g < G.order(); ++g) {
    bool ok = true;
    for (Elem h : H.elements())
      if (G.mul(g, h) != G.mul(h, g)) {
        ok = false;
        break;
      }
    if (ok) els.push_back(g);
  }
  return Subgroup::from_elements(G, std::move(els));
}

Subgroup center(const Group& G) { return centralizer(G, whole_group(G)); }

bool is_normal(const Group& G, const Subgroup& H) { return normalizer(G, H).order() == G.order(); }

std::optional<Elem> is_conjugate_subgroups(const Group& G, const Subgroup& H, const Subgroup& K) {
  require_subgroup_of(G, H);
  require_subgroup_of(G, K);
  if (H == K) return G.identity();
  if (H.order() != K.order()) return std::nullopt;
  for (Elem g = 0; g < G.order(); ++g) {
    bool ok = true;
    for (Elem h : H.elements())
      if (!K.contains(G.conj(h, g))) {
        ok = false;
        break;
      }
    if (ok) return g;
  }
  return std::nullopt;
}

Subgroup image_subgroup(const Subgroup& H, std::span<const Elem> images) {
  std::vector<Elem> els;
  for (Elem h : H.elements()) els.push_back(images[static_cast<std::size_t>(h)]);
  return Subgroup::from_elements(H.parent(), std::move(els));
}

}  // namespace hnn
