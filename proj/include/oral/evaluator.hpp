// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "oral/acl.hpp"
#include "oral/bitset.hpp"
#include "oral/rule.hpp"
#include "oral/semantics.hpp"

namespace oral {

using CondId = std::uint32_t;
using ConsId = std::uint32_t;
using ActionId = std::uint32_t;

/// Rule whose atomic conditions, constraints and actions are interned in an
/// Evaluator. Component vectors are sorted and duplicate-free.
struct IndexedRule {
    ClassId subject_type = kNoClass;
    std::vector<CondId> subject_cond;
    ClassId resource_type = kNoClass;
    std::vector<CondId> resource_cond;
    std::vector<ConsId> constraint;
    std::vector<ActionId> actions;

    void normalize();
    friend auto operator<=>(const IndexedRule&, const IndexedRule&) = default;
};

struct IndexedRuleHash {
    std::size_t operator()(const IndexedRule& r) const;
};

/// Meaning of a rule relative to SP0: |⟦ρ⟧| and ⟦ρ⟧ ∩ SP0 as a bitset over
/// SP0 tuple indices. A rule is valid iff every tuple of its meaning is in SP0.
struct Coverage {
    std::size_t total = 0;
    std::size_t covered_count = 0;
    Bitset covered;

    [[nodiscard]] bool valid() const { return total == covered_count; }
};

/**
 * Cached evaluation of ORAL rules over one ACL policy.
 *
 * Atomic conditions are evaluated once into object bitsets, atomic
 * constraints into per-subject resource bitsets, and rule meanings are
 * memoized. Not thread-safe; use one evaluator per worker.
 */
class Evaluator {
public:
    struct Tuple {
        ObjectId subject;
        ObjectId resource;
        ActionId action;
    };

    explicit Evaluator(std::shared_ptr<const AclPolicy> acl);

    [[nodiscard]] const AclPolicy& acl() const { return *acl_; }
    [[nodiscard]] const ClassModel& class_model() const { return *acl_->class_model; }
    [[nodiscard]] const ObjectModel& object_model() const { return *acl_->object_model; }
    [[nodiscard]] std::size_t object_count() const { return n_; }

    // SP0 tuples are numbered by (action, subject, resource).
    [[nodiscard]] std::size_t sp0_size() const { return tuples_.size(); }
    [[nodiscard]] const std::vector<Tuple>& tuples() const { return tuples_; }
    [[nodiscard]] std::optional<std::size_t> tuple_index(ObjectId s, ObjectId r, ActionId a) const;
    [[nodiscard]] Bitset all_tuples() const;
    [[nodiscard]] PermissionTuple permission_tuple(std::size_t index) const;

    /// Actions of Act get ids [0, act_count()); unknown names are interned
    /// after them and never contribute to meanings.
    [[nodiscard]] std::size_t act_count() const { return act_count_; }
    ActionId intern_action(const std::string& name);
    [[nodiscard]] const std::string& action_name(ActionId a) const { return action_names_[a]; }

    CondId intern(AtomicCondition c);
    ConsId intern(const AtomicConstraint& c);
    [[nodiscard]] const AtomicCondition& condition(CondId id) const { return conditions_[id].ast; }
    [[nodiscard]] const AtomicConstraint& constraint(ConsId id) const { return constraints_[id].ast; }
    [[nodiscard]] std::size_t condition_count() const { return conditions_.size(); }
    [[nodiscard]] std::size_t constraint_count() const { return constraints_.size(); }
    /// Canonical text without subject/resource prefix; used as ordering key.
    [[nodiscard]] const std::string& condition_key(CondId id) const { return conditions_[id].key; }
    [[nodiscard]] const std::string& constraint_key(ConsId id) const { return constraints_[id].key; }
    [[nodiscard]] double condition_wsc(CondId id) const { return conditions_[id].wsc; }
    [[nodiscard]] double constraint_wsc(ConsId id) const { return constraints_[id].wsc; }
    [[nodiscard]] bool is_id_condition(CondId id) const;

    /// Objects (of any class) that satisfy the atomic condition.
    const Bitset& condition_meaning(CondId id);
    /// Resources r such that ⟨s, r⟩ satisfies the atomic constraint.
    const Bitset& constraint_row(ConsId id, ObjectId s);
    bool constraint_holds(ConsId id, ObjectId s, ObjectId r) { return constraint_row(id, s).test(r); }

    [[nodiscard]] const Bitset& instances(ClassId c) const { return instances_[c]; }
    /// Instances of c (including subclasses) satisfying every listed condition.
    Bitset characterized(ClassId c, const std::vector<CondId>& cond);

    IndexedRule index(const Rule& r);
    [[nodiscard]] Rule rule(const IndexedRule& r) const;
    [[nodiscard]] std::string text(const IndexedRule& r) const;

    [[nodiscard]] double wsc(const IndexedRule& r, const WscWeights& w) const;

    /// Memoized meaning relative to SP0.
    std::shared_ptr<const Coverage> coverage(const IndexedRule& r);
    bool valid(const IndexedRule& r) { return coverage(r)->valid(); }
    /// Full meaning, including tuples outside SP0.
    SubjectPermissionRelation meaning(const IndexedRule& r);

    void set_cache_limit(std::size_t entries) { cache_limit_ = entries; }

private:
    struct CondEntry {
        AtomicCondition ast;
        std::string key;
        double wsc = 0;
        std::vector<std::uint32_t> path; // interned field names; empty if some name is unknown
        bool resolvable = true;
        std::optional<Bitset> meaning;
    };
    struct ConsEntry {
        AtomicConstraint ast;
        std::string key;
        double wsc = 0;
        std::vector<std::uint32_t> p1, p2;
        bool resolvable = true;
        bool built = false;
        std::vector<Bitset> rows; // indexed by subject; empty bitset = no resources
    };

    std::optional<Value> nav_ids(ObjectId o, const std::vector<std::uint32_t>& path) const;
    bool resolve_path(const Path& p, std::vector<std::uint32_t>& out) const;
    void build_constraint(ConsEntry& e);
    Coverage compute(const IndexedRule& r);

    std::shared_ptr<const AclPolicy> acl_;
    std::size_t n_ = 0;
    std::size_t act_count_ = 0;
    std::vector<std::string> action_names_;
    std::unordered_map<std::string, ActionId> action_ids_;

    std::vector<Tuple> tuples_;
    // Per (action, subject): index into sp0_rows_ or -1.
    std::vector<std::int32_t> row_index_;
    std::vector<Bitset> sp0_rows_;
    std::vector<std::size_t> row_base_;

    std::vector<Bitset> instances_;
    Bitset zero_;

    std::vector<CondEntry> conditions_;
    std::unordered_map<std::string, CondId> condition_ids_;
    std::vector<ConsEntry> constraints_;
    std::unordered_map<std::string, ConsId> constraint_ids_;

    std::unordered_map<IndexedRule, std::shared_ptr<const Coverage>, IndexedRuleHash> cache_;
    std::size_t cache_limit_ = 60000;
};

} // namespace oral
