#include "hnn/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace hnn::io {

namespace {

[[noreturn]] void parse_fail(const std::string& what) { fail(ErrorCode::ParseError, what); }

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) parse_fail(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

template <class T>
T get(const json& j, const char* key) {
  try {
    return field(j, key).get<T>();
  } catch (const json::exception&) {
    parse_fail(std::string("field \"") + key + "\" has the wrong type");
  }
}

int param(const json& params, const char* key) { return get<int>(params, key); }

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto end = s.find(sep, start);
    const auto piece = s.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    std::string t(piece);
    t.erase(0, t.find_first_not_of(" \t"));
    t.erase(t.find_last_not_of(" \t") + 1);
    if (!t.empty()) out.push_back(t);
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

int to_int(const std::string& s) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) parse_fail("expected an integer, got \"" + s + "\"");
  return v;
}

Group named_group(const std::string& name, const json& params, const Limits& limits) {
  if (name == "cyclic") return cyclic_group(param(params, "n"));
  if (name == "dihedral") return dihedral_group(param(params, "order"));
  if (name == "dicyclic") return dicyclic_group(param(params, "order"));
  if (name == "symmetric") return symmetric_group(param(params, "degree"));
  if (name == "alternating") return alternating_group(param(params, "degree"));
  if (name == "elementary_abelian") return elementary_abelian_group(param(params, "p"), param(params, "k"));
  if (name == "semidirect_cyclic")
    return semidirect_cyclic(param(params, "n"), param(params, "m"), param(params, "action"));
  if (name == "direct_product")
    return direct_product(group_from_json(field(params, "a"), limits), group_from_json(field(params, "b"), limits));
  fail(ErrorCode::UnknownName, "unknown group family \"" + name + "\"");
}

json subgroup_json(const Subgroup& H) { return H.elements(); }

json submap_json(const SubMap& f) { return f.images; }

SubMap submap_from(const json& j) {
  SubMap f;
  try {
    f.images = j.get<std::vector<Elem>>();
  } catch (const json::exception&) {
    parse_fail("map must be an array of element indices");
  }
  return f;
}

}  // namespace

Group group_from_json(const json& spec, const Limits& limits) {
  const auto kind = get<std::string>(spec, "kind");
  if (kind == "table") {
    const int n = get<int>(spec, "n");
    return make_group_from_table(n, get<std::vector<std::vector<Elem>>>(spec, "table"), spec.value("name", ""));
  }
  if (kind == "perm")
    return group_from_permutations(get<int>(spec, "degree"), get<std::vector<Perm>>(spec, "generators"),
                                   spec.value("name", ""), limits);
  if (kind == "named") return named_group(get<std::string>(spec, "name"), spec.value("params", json::object()), limits);
  fail(ErrorCode::UnknownName, "unknown group kind \"" + kind + "\"");
}

json group_spec_from_token(std::string_view token) {
  if (token.starts_with("named:")) {
    const auto parts = split(token.substr(6), ':');
    if (parts.empty()) parse_fail("empty named group");
    const std::string& name = parts[0];
    static const std::map<std::string, std::vector<const char*>> keys{
        {"cyclic", {"n"}},          {"dihedral", {"order"}},          {"dicyclic", {"order"}},
        {"symmetric", {"degree"}},  {"alternating", {"degree"}},      {"elementary_abelian", {"p", "k"}},
        {"semidirect_cyclic", {"n", "m", "action"}}};
    const auto it = keys.find(name);
    if (it == keys.end()) fail(ErrorCode::UnknownName, "unknown group family \"" + name + "\"");
    if (parts.size() != it->second.size() + 1)
      parse_fail("\"" + name + "\" takes " + std::to_string(it->second.size()) + " parameter(s)");
    json params = json::object();
    for (std::size_t i = 0; i < it->second.size(); ++i) params[it->second[i]] = to_int(parts[i + 1]);
    return {{"kind", "named"}, {"name", name}, {"params", params}};
  }
  if (!token.empty() && token.front() == '{') {
    try {
      return json::parse(token);
    } catch (const json::exception& e) {
      parse_fail(std::string("inline group JSON: ") + e.what());
    }
  }
  const json j = read_json_file(std::string(token));
  // An HNN file also names its base.
  return j.contains("base") ? j.at("base") : j;
}

Group parse_group_token(std::string_view token, const Limits& limits) {
  return group_from_json(group_spec_from_token(token), limits);
}

Elem element_from_json(const Group& G, const json& j) {
  if (j.is_number_integer()) {
    const int x = j.get<int>();
    if (x < 0 || x >= G.order()) parse_fail("element index " + std::to_string(x) + " out of range");
    return x;
  }
  if (j.is_string()) {
    if (auto x = G.find(j.get<std::string>())) return *x;
    parse_fail("unknown element \"" + j.get<std::string>() + "\"");
  }
  parse_fail("element must be an index or a label");
}

Subgroup subgroup_from_json(const Group& G, const json& j) {
  if (!j.is_array()) parse_fail("subgroup must be an array of elements");
  std::vector<Elem> seeds;
  for (const auto& e : j) seeds.push_back(element_from_json(G, e));
  return subgroup_closure(G, seeds);
}

Subgroup parse_subgroup_token(const Group& G, std::string_view list) {
  std::vector<Elem> seeds;
  for (const auto& t : split(list, ',')) {
    auto x = G.find(t);
    if (!x) parse_fail("unknown element \"" + t + "\" in " + G.name());
    seeds.push_back(*x);
  }
  return subgroup_closure(G, seeds);
}

std::vector<std::pair<Elem, Elem>> parse_assignment_token(const Group& G, std::string_view list) {
  std::vector<std::pair<Elem, Elem>> out;
  for (const auto& t : split(list, ',')) {
    const auto arrow = t.find("->");
    if (arrow == std::string::npos) parse_fail("expected h->k, got \"" + t + "\"");
    auto h = G.find(t.substr(0, arrow)), k = G.find(t.substr(arrow + 2));
    if (!h || !k) parse_fail("unknown element in \"" + t + "\"");
    out.emplace_back(*h, *k);
  }
  return out;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) parse_fail("cannot open \"" + path + "\"");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    parse_fail("\"" + path + "\": " + e.what());
  }
}

HnnFile hnn_from_json(const json& j, const Limits& limits) {
  HnnFile out{field(j, "base"), HnnData{Group(), Subgroup(Group()), Subgroup(Group()), {}, {}}};
  const Group G = group_from_json(out.base_spec, limits);
  const Subgroup H = subgroup_from_json(G, field(j, "H"));
  const Subgroup K = subgroup_from_json(G, field(j, "K"));
  std::vector<std::pair<Elem, Elem>> assignment;
  const json& f = field(j, "f");
  if (!f.is_array()) parse_fail("f must be an array of [h, k] pairs");
  for (const auto& p : f) {
    if (!p.is_array() || p.size() != 2) parse_fail("f entries must be [h, k] pairs");
    assignment.emplace_back(element_from_json(G, p[0]), element_from_json(G, p[1]));
  }
  out.data = make_hnn(G, H, K, assignment, j.value("label", ""));
  return out;
}

json hnn_to_json(const json& base_spec, const HnnData& d) {
  json f = json::array();
  for (int i = 0; i < d.H.order(); ++i) f.push_back({d.H.element(i), d.f.images[static_cast<std::size_t>(i)]});
  json j{{"base", base_spec}, {"H", subgroup_json(d.H)}, {"K", subgroup_json(d.K)}, {"f", f}};
  if (!d.label.empty()) j["label"] = d.label;
  return j;
}

OrbitReport orbit_report(const GammaBarGroup& g) {
  OrbitReport r;
  r.count = g.orbit_count();
  r.sizes.assign(static_cast<std::size_t>(r.count), 0);
  for (int id : g.orbit_of) ++r.sizes[static_cast<std::size_t>(id)];
  for (int rep : g.representatives) r.representatives.push_back(g.iso_set[static_cast<std::size_t>(rep)]);
  r.generators = g.generators;
  if (g.iota) r.generators.push_back(*g.iota);
  r.has_swap = g.iota.has_value();
  return r;
}

// ------------------------------------------------------------------ reports

json to_json(const IsoClassCount& r) {
  json reps = json::array();
  for (const auto& f : r.representatives) reps.push_back(submap_json(f));
  return {{"type", "iso_class_count"}, {"count", r.count}, {"representatives", reps}};
}

IsoClassCount iso_class_count_from_json(const json& j) {
  IsoClassCount r;
  r.count = get<int>(j, "count");
  for (const auto& f : field(j, "representatives")) r.representatives.push_back(submap_from(f));
  return r;
}

json to_json(const OrbitReport& r) {
  json reps = json::array();
  for (const auto& f : r.representatives) reps.push_back(submap_json(f));
  return {{"type", "orbits"},       {"count", r.count},           {"representatives", reps},
          {"sizes", r.sizes},       {"generators", r.generators}, {"has_swap", r.has_swap}};
}

OrbitReport orbit_report_from_json(const json& j) {
  OrbitReport r;
  r.count = get<int>(j, "count");
  for (const auto& f : field(j, "representatives")) r.representatives.push_back(submap_from(f));
  r.sizes = get<std::vector<int>>(j, "sizes");
  r.generators = get<std::vector<Perm>>(j, "generators");
  r.has_swap = get<bool>(j, "has_swap");
  return r;
}

json to_json(const GenusReport& r) {
  json j{{"type", "genus"}, {"kind", r.exact() ? "Exact" : "Bounds"}};
  if (r.exact()) {
    j["value"] = r.lo;
  } else {
    j["lo"] = r.lo;
    j["hi"] = r.hi;
  }
  j["rule"] = r.rule;
  json checks = json::array();
  for (const auto& c : r.checks) checks.push_back({{"rule", c.rule}, {"hypothesis", c.hypothesis}, {"verdict", c.verdict}});
  j["checks"] = checks;
  json comps = json::array();
  for (const auto& c : r.companions) {
    json f = json::array();
    for (auto [h, k] : c.f) f.push_back({h, k});
    comps.push_back({{"H", c.H}, {"K", c.K}, {"f", f}});
  }
  j["companions"] = comps;
  return j;
}

GenusReport genus_report_from_json(const json& j) {
  GenusReport r;
  const auto kind = get<std::string>(j, "kind");
  if (kind == "Exact") {
    r.kind = GenusKind::Exact;
    r.lo = r.hi = get<std::int64_t>(j, "value");
  } else if (kind == "Bounds") {
    r.kind = GenusKind::Bounds;
    r.lo = get<std::int64_t>(j, "lo");
    r.hi = get<std::int64_t>(j, "hi");
  } else {
    parse_fail("genus kind must be Exact or Bounds");
  }
  r.rule = get<std::string>(j, "rule");
  for (const auto& c : field(j, "checks"))
    r.checks.push_back({get<std::string>(c, "rule"), get<std::string>(c, "hypothesis"), get<bool>(c, "verdict")});
  for (const auto& c : field(j, "companions"))
    r.companions.push_back({get<std::vector<Elem>>(c, "H"), get<std::vector<Elem>>(c, "K"),
                            get<std::vector<std::pair<Elem, Elem>>>(c, "f")});
  return r;
}

json to_json(const std::optional<IsoWitness>& w) {
  json j{{"type", "isomorphic"}, {"isomorphic", w.has_value()}};
  if (!w) {
    j["witness"] = nullptr;
    return j;
  }
  json checks = json::array();
  for (const auto& c : w->checks) checks.push_back({{"what", c.what}, {"ok", c.ok}});
  j["witness"] = {{"psi", w->map.psi}, {"pre", w->map.pre}, {"eps", w->map.eps},
                  {"post", w->map.post}, {"path", w->path},   {"checks", checks}};
  return j;
}

std::optional<IsoWitness> witness_from_json(const json& j) {
  if (!get<bool>(j, "isomorphic")) return std::nullopt;
  const json& w = field(j, "witness");
  IsoWitness r;
  r.map.psi = get<std::vector<Elem>>(w, "psi");
  r.map.pre = get<Elem>(w, "pre");
  r.map.eps = get<int>(w, "eps");
  r.map.post = get<Elem>(w, "post");
  r.path = get<std::vector<std::string>>(w, "path");
  for (const auto& c : field(w, "checks")) r.checks.push_back({get<std::string>(c, "what"), get<bool>(c, "ok")});
  return r;
}

json to_json(const FingerprintVector& v) {
  json probes = json::array();
  for (std::size_t i = 0; i < v.labels.size(); ++i)
    probes.push_back({{"label", v.labels[i]}, {"order", v.orders[i]}, {"count", v.counts[i]}});
  return {{"type", "fingerprint"}, {"probes", probes}};
}

FingerprintVector fingerprint_from_json(const json& j) {
  FingerprintVector v;
  for (const auto& p : field(j, "probes")) {
    v.labels.push_back(get<std::string>(p, "label"));
    v.orders.push_back(get<int>(p, "order"));
    v.counts.push_back(get<std::uint64_t>(p, "count"));
  }
  return v;
}

json to_json(const FingerprintComparison& c) {
  json j{{"type", "fingerprint_compare"}, {"equal", c.equal}};
  if (c.first_difference) {
    j["first_difference"] = *c.first_difference;
    j["order"] = c.order;
    j["count_a"] = c.count_a;
    j["count_b"] = c.count_b;
  } else {
    j["first_difference"] = nullptr;
  }
  return j;
}

FingerprintComparison comparison_from_json(const json& j) {
  FingerprintComparison c;
  c.equal = get<bool>(j, "equal");
  if (!field(j, "first_difference").is_null()) {
    c.first_difference = get<std::string>(j, "first_difference");
    c.order = get<int>(j, "order");
    c.count_a = get<std::uint64_t>(j, "count_a");
    c.count_b = get<std::uint64_t>(j, "count_b");
  }
  return c;
}

json to_json(const PairOrbitCatalog& c) {
  json pairs = json::array();
  for (const auto& p : c.pairs)
    pairs.push_back({{"class_h", p.class_h},
                     {"class_k", p.class_k},
                     {"H", subgroup_json(p.H)},
                     {"K", subgroup_json(p.K)},
                     {"isomorphic", p.isomorphic},
                     {"count", p.count},
                     {"orbit_size", p.orbit_size}});
  return {{"type", "catalog"}, {"total", c.total}, {"pairs", pairs}};
}

PairOrbitCatalog catalog_from_json(const Group& G, const json& j) {
  PairOrbitCatalog c;
  c.total = get<std::int64_t>(j, "total");
  for (const auto& p : field(j, "pairs"))
    c.pairs.push_back({.class_h = get<int>(p, "class_h"),
                       .class_k = get<int>(p, "class_k"),
                       .H = Subgroup::from_elements(G, get<std::vector<Elem>>(p, "H")),
                       .K = Subgroup::from_elements(G, get<std::vector<Elem>>(p, "K")),
                       .isomorphic = get<bool>(p, "isomorphic"),
                       .count = get<int>(p, "count"),
                       .orbit_size = get<int>(p, "orbit_size")});
  return c;
}

json to_json(const KInvariant& k) {
  return {{"type", "k_invariant"}, {"value", k.value},       {"l_H", k.l_H},
          {"l_K", k.l_K},          {"orbit_H", k.orbit_H},   {"orbit_K", k.orbit_K}};
}

KInvariant k_invariant_from_json(const json& j) {
  KInvariant k;
  k.value = get<int>(j, "value");
  k.l_H = get<int>(j, "l_H");
  k.l_K = get<int>(j, "l_K");
  k.orbit_H = get<int>(j, "orbit_H");
  k.orbit_K = get<int>(j, "orbit_K");
  return k;
}

json total_to_json(std::int64_t total) { return {{"type", "total"}, {"total", total}}; }

std::int64_t total_from_json(const json& j) { return get<std::int64_t>(j, "total"); }

}  // namespace hnn::io
