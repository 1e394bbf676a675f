// Command-line front end: one computation per invocation, text or JSON out.

#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <string>

#include "hnn/fingerprint.hpp"
#include "hnn/genus.hpp"
#include "hnn/io.hpp"

using namespace hnn;
using io::json;

namespace {

enum Exit { kOk = 0, kParse = 2, kCap = 3, kHypothesis = 4, kDomain = 5 };

constexpr int kMaxAutCap = 1024;
constexpr int kMaxProbeOrder = 128;

struct Options {
  std::string base, H, K, f, a, b, format = "text", closed_form;
  int max_order = 60;
  int cap_aut = 128;
  int threads = 1;
  bool class_a = false;
};

Limits limits_of(const Options& o) {
  if (o.cap_aut < 1 || o.cap_aut > kMaxAutCap)
    fail(ErrorCode::BadParams, "--cap-aut must be in 1.." + std::to_string(kMaxAutCap));
  if (o.max_order < 1 || o.max_order > kMaxProbeOrder)
    fail(ErrorCode::BadParams, "--max-order must be in 1.." + std::to_string(kMaxProbeOrder));
  if (o.threads < 1) fail(ErrorCode::BadParams, "--threads must be positive");
  Limits l;
  l.aut_order = o.cap_aut;
  l.probe_order = o.max_order;
  return l;
}

std::string set_text(const Group& G, const std::vector<Elem>& xs) {
  std::string s = "{";
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + G.label(xs[i]);
  return s + "}";
}

// f on the generators of H, e.g. "c->c, r2->r2c".
std::string map_text(const Group& G, const Subgroup& H, const SubMap& f) {
  std::string s;
  for (Elem h : H.generators()) s += (s.empty() ? "" : ", ") + G.label(h) + "->" + G.label(f.at(H, h));
  return s.empty() ? "(trivial)" : s;
}

struct Inline {
  json base_spec;
  Group G;
  Subgroup H, K;
};

Inline inline_pair(const Options& o, const Limits& l) {
  if (o.base.empty()) fail(ErrorCode::ParseError, "--base is required");
  json spec = io::group_spec_from_token(o.base);
  Group G = io::group_from_json(spec, l);
  Subgroup H = o.H.empty() ? Subgroup(G) : io::parse_subgroup_token(G, o.H);
  Subgroup K = o.K.empty() ? H : io::parse_subgroup_token(G, o.K);
  return {spec, G, H, K};
}

// HNN datum from --a, or from --base/--H/--K/--f (f defaults to the identity when K = H).
io::HnnFile datum(const Options& o, const Limits& l, const std::string& file) {
  if (!file.empty()) return io::hnn_from_json(io::read_json_file(file), l);
  Inline in = inline_pair(o, l);
  if (o.f.empty()) {
    if (!(in.H == in.K)) fail(ErrorCode::ParseError, "--f is required when K differs from H");
    return {in.base_spec, make_hnn(in.G, in.H, in.K, identity_submap(in.H))};
  }
  return {in.base_spec, make_hnn(in.G, in.H, in.K, io::parse_assignment_token(in.G, o.f))};
}

void emit(const Options& o, const json& j, const std::string& text) {
  if (o.format == "json")
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text;
}

int run_classify(const Options& o) {
  const Limits l = limits_of(o);
  Inline in = inline_pair(o, l);
  BaseContext ctx(in.G, l);
  const IsoClassCount r = iso_class_count(ctx, in.H, in.K);
  json j = io::to_json(r);
  std::string text = std::to_string(r.count) + " isomorphism classes\n";
  for (const auto& f : r.representatives) text += "  f: " + map_text(in.G, in.H, f) + "\n";
  if (!o.closed_form.empty()) {
    if (!(in.H == in.K)) fail(ErrorCode::HypothesisNotVerified, "closed forms need K = H");
    std::int64_t v = 0;
    if (o.closed_form == "g1")
      v = closed_form_g1(ctx, in.H);
    else if (o.closed_form == "central")
      v = closed_form_central_cyclic(ctx, in.H);
    else
      fail(ErrorCode::ParseError, "--closed-form must be g1 or central");
    j["closed_form"] = {{"kind", o.closed_form}, {"value", v}};
    text += "closed form (" + o.closed_form + "): " + std::to_string(v) + "\n";
  }
  emit(o, j, text);
  return kOk;
}

int run_orbits(const Options& o) {
  const Limits l = limits_of(o);
  Inline in = inline_pair(o, l);
  BaseContext ctx(in.G, l);
  const io::OrbitReport r = io::orbit_report(*gamma_bar(ctx, in.H, in.K));
  std::string text = std::to_string(r.count) + " orbits on Iso(H,K); " + std::to_string(r.generators.size()) +
                     " generators" + (r.has_swap ? " (including the swap)" : "") + "\n";
  for (std::size_t i = 0; i < r.representatives.size(); ++i)
    text += "  size " + std::to_string(r.sizes[i]) + ": " + map_text(in.G, in.H, r.representatives[i]) + "\n";
  emit(o, io::to_json(r), text);
  return kOk;
}

int run_genus(const Options& o) {
  const Limits l = limits_of(o);
  const io::HnnFile d = datum(o, l, o.a);
  BaseContext ctx(d.data.base, l);
  const GenusReport r = o.class_a ? genus_in_class_A(ctx, d.data) : genus_report(ctx, d.data);
  std::string text = r.exact() ? "Exact(" + std::to_string(r.lo) + ")"
                               : "Bounds(" + std::to_string(r.lo) + ", " + std::to_string(r.hi) + ")";
  text += ", rule: " + r.rule + "\n";
  for (const auto& c : r.checks) text += std::string("  [") + (c.verdict ? "yes" : "no ") + "] " + c.rule + " -- " + c.hypothesis + "\n";
  const Group& G = d.data.base;
  for (const auto& c : r.companions) {
    std::string f;
    for (auto [h, k] : c.f) f += (f.empty() ? "" : ", ") + G.label(h) + "->" + G.label(k);
    text += "  companion H=" + set_text(G, c.H) + " K=" + set_text(G, c.K) + " f: " + f + "\n";
  }
  emit(o, io::to_json(r), text);
  return kOk;
}

int run_isomorphic(const Options& o) {
  const Limits l = limits_of(o);
  if (o.a.empty() || o.b.empty()) fail(ErrorCode::ParseError, "--a and --b are required");
  const io::HnnFile a = io::hnn_from_json(io::read_json_file(o.a), l);
  const io::HnnFile b = io::hnn_from_json(io::read_json_file(o.b), l);
  BaseContext ctx(a.data.base, l);
  const auto w = hnn_isomorphic(ctx, a.data, b.data);
  std::string text;
  if (!w) {
    text = "not isomorphic\n";
  } else {
    const Group& G = a.data.base;
    text = "isomorphic: t -> " + G.label(w->map.pre) + " * t^" + std::to_string(w->map.eps) + " * " +
           G.label(w->map.post) + "\n  psi on generators:";
    for (Elem g : G.generators()) text += " " + G.label(g) + "->" + G.label(w->map.psi[static_cast<std::size_t>(g)]);
    text += "\n";
    for (const auto& step : w->path) text += "  " + step + "\n";
    text += "  " + std::to_string(w->checks.size()) + " relation checks, all " + (all_ok(w->checks) ? "passed" : "NOT passed") + "\n";
  }
  emit(o, io::to_json(w), text);
  return kOk;
}

int run_fingerprint(const Options& o) {
  const Limits l = limits_of(o);
  const io::HnnFile a = datum(o, l, o.a);
  const ProbeSet probes = probe_catalog(o.max_order);
  if (o.b.empty()) {
    const FingerprintVector v = fingerprint(a.data, probes, o.threads, l);
    std::string text;
    for (std::size_t i = 0; i < v.labels.size(); ++i)
      text += v.labels[i] + " (" + std::to_string(v.orders[i]) + "): " + std::to_string(v.counts[i]) + "\n";
    emit(o, io::to_json(v), text);
    return kOk;
  }
  const io::HnnFile b = io::hnn_from_json(io::read_json_file(o.b), l);
  FingerprintComparison c;
  if (a.data.base == b.data.base) {
    const std::vector<HnnData> both{a.data, b.data};
    const auto v = fingerprints(both, probes, o.threads, l);
    c = compare(v[0], v[1]);
  } else {
    c = compare(fingerprint(a.data, probes, o.threads, l), fingerprint(b.data, probes, o.threads, l));
  }
  const std::string text = c.equal ? "Equal (no separating probe up to order " + std::to_string(o.max_order) + ")\n"
                                   : "FirstDifference(" + *c.first_difference + "), order " + std::to_string(c.order) +
                                         ": " + std::to_string(c.count_a) + " vs " + std::to_string(c.count_b) + "\n";
  emit(o, io::to_json(c), text);
  return kOk;
}

int run_catalog(const Options& o) {
  const Limits l = limits_of(o);
  Inline in = inline_pair(o, l);
  BaseContext ctx(in.G, l);
  const PairOrbitCatalog c = pair_orbit_catalog(ctx);
  std::string text = "total " + std::to_string(c.total) + "\n";
  for (const auto& p : c.pairs) {
    if (!p.isomorphic) continue;
    text += "  H=" + set_text(in.G, p.H.elements()) + " K=" + set_text(in.G, p.K.elements()) + ": " +
            std::to_string(p.count) + " classes\n";
  }
  emit(o, io::to_json(c), text);
  return kOk;
}

int run_total(const Options& o) {
  const Limits l = limits_of(o);
  Inline in = inline_pair(o, l);
  BaseContext ctx(in.G, l);
  const std::int64_t t = total_iso_count(ctx);
  emit(o, io::total_to_json(t), std::to_string(t) + " isomorphism classes of HNN extensions with proper associated subgroups\n");
  return kOk;
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::BadTable:
    case ErrorCode::NotAssociative:
    case ErrorCode::NoIdentity:
    case ErrorCode::NoInverse:
    case ErrorCode::UnknownName:
    case ErrorCode::BadParams:
    case ErrorCode::NotASubgroup:
    case ErrorCode::NotAHomomorphism:
      return kParse;
    case ErrorCode::CapExceeded:
      return kCap;
    case ErrorCode::HypothesisNotVerified:
      return kHypothesis;
    default:
      return kDomain;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Classify HNN extensions of finite groups and bound their profinite genus"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* cmd, bool pair, bool files) {
    cmd->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));
    cmd->add_option("--cap-aut", o.cap_aut, "largest base whose Aut is enumerated");
    cmd->add_option("--threads", o.threads, "worker threads");
    cmd->add_option("--base", o.base, "named:FAMILY:PARAMS, inline JSON, or a JSON file");
    if (pair) {
      cmd->add_option("--H", o.H, "generators of H (labels or indices, comma separated)");
      cmd->add_option("--K", o.K, "generators of K (defaults to H)");
    }
    if (files) {
      cmd->add_option("--f", o.f, "images of generators, e.g. c->c,r2->r2c");
      cmd->add_option("--a", o.a, "HNN data file");
    }
  };
  auto* classify = app.add_subcommand("classify", "count isomorphism classes for fixed H, K");
  common(classify, true, false);
  classify->add_option("--closed-form", o.closed_form, "also evaluate a closed form: g1 or central");
  auto* orbits = app.add_subcommand("orbits", "orbit representatives on Iso(H,K) with the acting generators");
  common(orbits, true, false);
  auto* genus = app.add_subcommand("genus", "profinite genus report");
  common(genus, true, true);
  genus->add_flag("--class-a", o.class_a, "report the class-A genus (finite base)");
  auto* iso = app.add_subcommand("isomorphic", "decide isomorphism of two HNN data files");
  common(iso, false, true);
  iso->add_option("--b", o.b, "second HNN data file");
  auto* fp = app.add_subcommand("fingerprint", "finite-quotient hom counts, or compare two data");
  common(fp, true, true);
  fp->add_option("--b", o.b, "second HNN data file");
  fp->add_option("--max-order", o.max_order, "largest probe order");
  auto* catalog = app.add_subcommand("catalog", "pair-orbit catalog over all subgroup classes");
  common(catalog, false, false);
  auto* total = app.add_subcommand("total", "total number of isomorphism classes");
  common(total, false, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kParse;
  }
  try {
    if (classify->parsed()) return run_classify(o);
    if (orbits->parsed()) return run_orbits(o);
    if (genus->parsed()) return run_genus(o);
    if (iso->parsed()) return run_isomorphic(o);
    if (fp->parsed()) return run_fingerprint(o);
    if (catalog->parsed()) return run_catalog(o);
    if (total->parsed()) return run_total(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.code());
  }
  return kOk;
}
