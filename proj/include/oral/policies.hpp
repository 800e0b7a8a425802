// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "oral/acl.hpp"
#include "oral/class_model.hpp"
#include "oral/limits.hpp"
#include "oral/object_model.hpp"
#include "oral/rule.hpp"

namespace oral::gen {

enum class PolicyName { Emr, Healthcare, ProjectManagement, University };

inline constexpr PolicyName kAllPolicies[] = {PolicyName::Emr, PolicyName::Healthcare, PolicyName::ProjectManagement, PolicyName::University};

/// "emr", "healthcare", "project-mgmt", "university".
std::string_view to_string(PolicyName p);
std::optional<PolicyName> parse_policy(std::string_view text);

struct SamplePolicy {
    PolicyName name;
    std::shared_ptr<const ClassModel> class_model;
    std::vector<Rule> rules;
    int default_n = 5;
};

const SamplePolicy& sample_policy(PolicyName p);

/// Path length limits used when mining the policy.
PathLimits mining_limits(PolicyName p);

/// Object model for the policy with size parameter n; deterministic in seed.
std::shared_ptr<const ObjectModel> generate_objects(PolicyName p, int n, std::uint64_t seed);

/// SP0 = ⟦rules⟧ over the object model; actions are those named by the rules.
std::shared_ptr<const AclPolicy> extract_acls(std::shared_ptr<const ObjectModel> om, const std::vector<Rule>& rules);

struct Dataset {
    PolicyName policy;
    int n = 0;
    std::uint64_t seed = 0;
    std::shared_ptr<const AclPolicy> acl;
    std::vector<Rule> rules;
};

Dataset generate(PolicyName p, int n, std::uint64_t seed);

/// One row of the policy-size table.
struct PolicyStats {
    std::size_t rules = 0;
    double conditions_per_rule = 0;
    double constraints_per_rule = 0;
    std::size_t classes = 0;
    std::size_t objects = 0;
    double fields_per_object = 0; // declared fields including id
    std::size_t sp0 = 0;
    double wsc = 0;
};

PolicyStats stats(const AclPolicy& acl, const std::vector<Rule>& rules);

} // namespace oral::gen
