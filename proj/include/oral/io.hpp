// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "oral/acl.hpp"
#include "oral/class_model.hpp"
#include "oral/object_model.hpp"
#include "oral/rule.hpp"

namespace oral::io {

using Json = nlohmann::ordered_json;

Json to_json(const ClassModel& cm);
ClassModel class_model_from_json(const Json& j);

Json to_json(const ObjectModel& om);
ObjectModel object_model_from_json(std::shared_ptr<const ClassModel> cm, const Json& j);

/// Actions and tuples only; objects are referenced by id.
Json acl_to_json(const AclPolicy& acl);
AclPolicy acl_from_json(std::shared_ptr<const ClassModel> cm, std::shared_ptr<const ObjectModel> om, const Json& j);

/// Parses JSON text; syntax errors become ParseError with line and column.
Json parse_json(std::string_view text);

/**
 * Rules in the textual syntax, one `rule(...)` per entry:
 *
 *   rule(Physician; subject.isTrainee = false; Consultation; true;
 *        subject = resource.physician and subject.affiliation in resource.patient.registrations;
 *        {createMedicalRecord})
 *
 * Conditions accept `= c`, `in {c, ...}` and `contains c`; constraints accept
 * `=`, `in`, `contains` and `supseteq`. The symbols ∈, ∋ and ⊇ may replace
 * the keywords. `#` starts a comment.
 */
std::vector<Rule> parse_rules(std::string_view text);
Rule parse_rule(std::string_view text);
/// One canonical rule per line, sorted.
std::string rules_to_text(std::vector<Rule> rules);

/// Throws ModelError naming the rule when some rule is not well-formed.
void check_rules(const ClassModel& cm, const std::vector<Rule>& rules);

std::string read_file(const std::filesystem::path& p);
/// Writes through a temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& p, std::string_view content);

/// Directory with class_model.json, object_model.json, acl.json and
/// optionally rules.oral (reference policy), params.json and metadata.json.
struct Bundle {
    std::shared_ptr<const ClassModel> class_model;
    std::shared_ptr<const ObjectModel> object_model;
    std::shared_ptr<const AclPolicy> acl;
    std::vector<Rule> rules;
    Json params = Json::object();
    Json metadata = Json::object();
};

Bundle read_bundle(const std::filesystem::path& dir);
void write_bundle(const std::filesystem::path& dir, const Bundle& b);

} // namespace oral::io
