// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oral/acl.hpp"
#include "oral/class_model.hpp"
#include "oral/object_model.hpp"
#include "oral/rule.hpp"

namespace oral {

/// Static type and multiplicity of a path relative to an anchor class.
struct PathInfo {
    FieldType type;
    Multiplicity multiplicity = Multiplicity::One;
    std::size_t length = 0;
};

/// Throws TypeError when some step names no field of the current class or
/// follows a non-reference field.
PathInfo path_info(const ClassModel& cm, ClassId anchor, const Path& p);
Multiplicity multiplicity_of_path(const ClassModel& cm, ClassId anchor, const Path& p);

/// Multiplicity of a path as the sequence of its fields' multiplicities.
Multiplicity combine(Multiplicity a, Multiplicity b);

ConstraintOp op_from_mul(Multiplicity subject_side, Multiplicity resource_side);

/**
 * Navigates path p from object o, following fields by name.
 *
 * The empty path yields o itself. Crossing a many-valued field turns the
 * result into a set (OCL collect); bottom values met inside such a set are
 * dropped. A bottom met on a single-valued prefix with steps remaining
 * yields bottom. Throws TypeError for ill-typed steps.
 */
Value nav(const ObjectModel& om, ObjectId o, const Path& p);
/// Same as nav but returns nullopt instead of throwing on ill-typed steps.
std::optional<Value> try_nav(const ObjectModel& om, ObjectId o, const Path& p);

/// Runtime atom for a condition constant, or nullopt when no object has
/// that id (such a constant matches nothing).
std::optional<Atom> constant_atom(const ObjectModel& om, const Constant& c);

bool satisfies(const ObjectModel& om, ObjectId o, const AtomicCondition& c);
bool satisfies(const ObjectModel& om, ObjectId o, std::span<const AtomicCondition> cond);
// An atomic constraint fails whenever a single-valued side navigates to bottom.
bool satisfies(const ObjectModel& om, ObjectId s, ObjectId r, const AtomicConstraint& c);
bool satisfies(const ObjectModel& om, ObjectId s, ObjectId r, std::span<const AtomicConstraint> cons);

// Subject/resource types match instances of the named class and its subclasses.
SubjectPermissionRelation rule_meaning(const ObjectModel& om, std::span<const std::string> actions, const Rule& rule);
SubjectPermissionRelation policy_meaning(const ObjectModel& om, std::span<const std::string> actions, std::span<const Rule> rules);

/// ⟦rule⟧ ⊆ sp0.
bool is_valid(const ObjectModel& om, std::span<const std::string> actions, const Rule& rule, const SubjectPermissionRelation& sp0);

struct WscWeights {
    double w1 = 1.0; // conditions
    double w2 = 1.0; // constraints
    double w3 = 1.0; // actions
};

double wsc(const AtomicCondition& c);
double wsc(const AtomicConstraint& c);
double wsc(const Rule& r, const WscWeights& w = {});
double wsc(std::span<const Rule> rules, const WscWeights& w = {});

enum class Requirement {
    Ok,
    UnknownClass,
    UnknownField,
    EmptyActions,
    TypeCorrectPaths,          // 1
    ConstraintSameType,        // 2(a)
    ConstraintNotString,       // 2(b)
    ConditionNotReference,     // 3
    InConditionMultiplicity,   // 4
    ContainsConditionMultiplicity, // 5
    EqualConstraintMultiplicity,   // 6
    InConstraintMultiplicity,      // 7
    ContainsConstraintMultiplicity, // 8
    SupseteqConstraintMultiplicity, // 9
};

std::string_view to_string(Requirement r);

struct WellFormedness {
    Requirement violated = Requirement::Ok;
    std::string message;

    [[nodiscard]] bool ok() const { return violated == Requirement::Ok; }
    explicit operator bool() const { return ok(); }
};

/// Equal types, or reference types where one class is a subclass of the other.
bool compatible_types(const ClassModel& cm, const FieldType& a, const FieldType& b);

/// Checks requirements 1-9 in order and reports the first violation.
WellFormedness check_well_formed(const ClassModel& cm, const Rule& rule);
inline bool well_formed(const ClassModel& cm, const Rule& rule) { return check_well_formed(cm, rule).ok(); }

} // namespace oral
