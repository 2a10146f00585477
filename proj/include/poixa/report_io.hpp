#pragma once

#include <string>

#include "json.hpp"
#include "poixa/audit.hpp"

namespace poixa {

using ordered_json = nlohmann::ordered_json;

// Reference measurements from the full-scale 1083-user New York dataset,
// reported alongside desk-scale results for orientation only; they are never
// asserted.
struct FullDatasetReference {
  static ordered_json exp1();
  static ordered_json exp2();
  static ordered_json exp3();
  static ordered_json exp4();
};

ordered_json test_result_json(const TestResult& t);

// `provenance` (config hash, master seed, checkpoint checksums) is composed
// by the caller and embedded verbatim.
ordered_json exp1_json(const Exp1Report& r, const ordered_json& provenance);
ordered_json exp2_json(const Exp2Report& r, const ordered_json& provenance);
ordered_json exp3_json(const Exp3Report& r, const ordered_json& provenance);
ordered_json exp4_json(const Exp4Report& r, const ordered_json& provenance);

std::string exp1_markdown(const Exp1Report& r);
std::string exp2_markdown(const Exp2Report& r);
std::string exp3_markdown(const Exp3Report& r);
std::string exp4_markdown(const Exp4Report& r);

ordered_json clone_manifest_json(const std::vector<CloneRecord>& manifest);

}  // namespace poixa
