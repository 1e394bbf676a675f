#pragma once

#include <json.hpp>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hnn/fingerprint.hpp"
#include "hnn/genus.hpp"
#include "hnn/hnn.hpp"

// JSON formats for groups, HNN data and every report type. All malformed
// input raises Error(ParseError) naming the offending field.
namespace hnn::io {

using json = nlohmann::json;

// {"kind":"table","n":N,"table":[[...]]}
// {"kind":"perm","degree":d,"generators":[[...],...]}
// {"kind":"named","name":"dihedral","params":{"order":8}}
Group group_from_json(const json& spec, const Limits& limits = {});
// "named:dihedral:8" (positional params), inline JSON, or a path to a JSON file.
json group_spec_from_token(std::string_view token);
Group parse_group_token(std::string_view token, const Limits& limits = {});

// Elements by index or by label.
Elem element_from_json(const Group& G, const json& j);
Subgroup subgroup_from_json(const Group& G, const json& j);
// Comma-separated labels or indices; the subgroup they generate.
Subgroup parse_subgroup_token(const Group& G, std::string_view list);
// "c->c,r2->r2c": images of generators, extended to a homomorphism.
std::vector<std::pair<Elem, Elem>> parse_assignment_token(const Group& G, std::string_view list);

// {"base": spec, "H": [...], "K": [...], "f": [[h, k], ...]}; H and K list
// elements (or generators), f assigns images on a generating set of H.
struct HnnFile {
  json base_spec;
  HnnData data;
};
HnnFile hnn_from_json(const json& j, const Limits& limits = {});
json hnn_to_json(const json& base_spec, const HnnData& d);
json read_json_file(const std::string& path);

struct OrbitReport {
  int count = 0;
  std::vector<SubMap> representatives;
  std::vector<int> sizes;
  std::vector<Perm> generators;  // permutations of Iso(H, K) in canonical order
  bool has_swap = false;

  bool operator==(const OrbitReport&) const = default;
};
OrbitReport orbit_report(const GammaBarGroup& g);

json to_json(const IsoClassCount& r);
json to_json(const OrbitReport& r);
json to_json(const GenusReport& r);
json to_json(const std::optional<IsoWitness>& w);
json to_json(const FingerprintVector& v);
json to_json(const FingerprintComparison& c);
json to_json(const PairOrbitCatalog& c);
json to_json(const KInvariant& k);
json total_to_json(std::int64_t total);

IsoClassCount iso_class_count_from_json(const json& j);
OrbitReport orbit_report_from_json(const json& j);
GenusReport genus_report_from_json(const json& j);
std::optional<IsoWitness> witness_from_json(const json& j);
FingerprintVector fingerprint_from_json(const json& j);
FingerprintComparison comparison_from_json(const json& j);
PairOrbitCatalog catalog_from_json(const Group& G, const json& j);
KInvariant k_invariant_from_json(const json& j);
std::int64_t total_from_json(const json& j);

}  // namespace hnn::io
