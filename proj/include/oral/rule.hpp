// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace oral {

/// Sequence of field names; empty only inside constraints (the object itself).
using Path = std::vector<std::string>;

/// Condition constant: a Boolean or a string (an id).
using Constant = std::variant<bool, std::string>;

enum class ConditionOp : std::uint8_t { In, Contains };
enum class ConstraintOp : std::uint8_t { Equal, In, Contains, Supseteq };

std::string_view to_string(ConditionOp op);
std::string_view to_string(ConstraintOp op);

// `values` is a set for In (sorted by text, possibly empty) and holds exactly
// one element for Contains.
struct AtomicCondition {
    Path path;
    ConditionOp op = ConditionOp::In;
    std::vector<Constant> values;

    friend bool operator==(const AtomicCondition&, const AtomicCondition&) = default;
};

struct AtomicConstraint {
    Path subject_path;
    ConstraintOp op = ConstraintOp::Equal;
    Path resource_path;

    friend bool operator==(const AtomicConstraint&, const AtomicConstraint&) = default;
};

using Condition = std::vector<AtomicCondition>;
using Constraint = std::vector<AtomicConstraint>;

struct Rule {
    std::string subject_type;
    Condition subject_condition;
    std::string resource_type;
    Condition resource_condition;
    Constraint constraint;
    std::vector<std::string> actions;

    friend bool operator==(const Rule&, const Rule&) = default;
};

std::string constant_text(const Constant& c);
bool constant_less(const Constant& a, const Constant& b);

std::string path_text(const Path& p);
/// e.g. "subject.isTrainee = false", "resource.topics contains cardiology".
std::string to_string(const AtomicCondition& c, std::string_view prefix);
/// e.g. "subject.affiliation in resource.patient.registrations".
std::string to_string(const AtomicConstraint& c);
/// rule(ST; SC; RT; RC; CONS; {A, ...}) with "true" for empty conjunctions.
std::string to_string(const Rule& r);

/// Sorts and deduplicates every set-valued component into canonical order.
void canonicalize(Rule& r);
void canonicalize(AtomicCondition& c);
[[nodiscard]] Rule canonical(Rule r);

std::size_t condition_count(const Rule& r);

} // namespace oral
