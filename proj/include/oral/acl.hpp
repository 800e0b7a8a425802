// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "oral/class_model.hpp"
#include "oral/object_model.hpp"

namespace oral {

/// ⟨subject, resource, action⟩: subject may perform action on resource.
struct PermissionTuple {
    ObjectId subject = 0;
    ObjectId resource = 0;
    std::string action;

    friend auto operator<=>(const PermissionTuple&, const PermissionTuple&) = default;
};

using SubjectPermissionRelation = std::set<PermissionTuple>;

/// Class model, object model, action universe and the subject-permission
/// relation SP0 (the union of the resources' access control lists).
struct AclPolicy {
    std::shared_ptr<const ClassModel> class_model;
    std::shared_ptr<const ObjectModel> object_model;
    std::vector<std::string> actions; // sorted, unique
    SubjectPermissionRelation sp0;
};

/// Checks sp0 ⊆ OM × OM × Act; throws ModelError otherwise.
void validate(const AclPolicy& acl);

std::string tuple_text(const ObjectModel& om, const PermissionTuple& t);

} // namespace oral
