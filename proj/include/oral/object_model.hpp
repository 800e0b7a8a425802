// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "oral/class_model.hpp"

namespace oral {

using ObjectId = std::uint32_t;

// Atomic runtime value. Strings only arise from `id` fields, so a String atom
// stores the index of the object whose id it is.
struct Atom {
    enum class Kind : std::uint8_t { Boolean, String, Object };
    Kind kind = Kind::Boolean;
    std::uint32_t value = 0;

    static Atom boolean(bool b) { return {Kind::Boolean, b ? 1U : 0U}; }
    static Atom id_string(ObjectId o) { return {Kind::String, o}; }
    static Atom object(ObjectId o) { return {Kind::Object, o}; }

    friend auto operator<=>(const Atom&, const Atom&) = default;
};

// Result of navigation: no value (bottom), one atom, or a flat set of atoms.
class Value {
public:
    enum class Kind : std::uint8_t { Bottom, Single, Set };

    Value() = default;
    static Value bottom() { return {}; }
    static Value single(Atom a)
    {
        Value v;
        v.kind_ = Kind::Single;
        v.atom_ = a;
        return v;
    }
    /// Elements are sorted and deduplicated.
    static Value set(std::vector<Atom> elems);

    [[nodiscard]] Kind kind() const { return kind_; }
    [[nodiscard]] bool is_bottom() const { return kind_ == Kind::Bottom; }
    [[nodiscard]] bool is_single() const { return kind_ == Kind::Single; }
    [[nodiscard]] bool is_set() const { return kind_ == Kind::Set; }
    [[nodiscard]] Atom atom() const { return atom_; }
    [[nodiscard]] const std::vector<Atom>& elements() const { return elems_; }
    [[nodiscard]] bool contains(Atom a) const;
    [[nodiscard]] bool includes(const Value& other) const;

    friend bool operator==(const Value&, const Value&) = default;

private:
    Kind kind_ = Kind::Bottom;
    Atom atom_{};
    std::vector<Atom> elems_;
};

/// Field value as written in an object model file, before id resolution.
using FieldInput = std::variant<std::monostate, bool, std::string, std::vector<std::string>>;

struct ObjectSpec {
    std::string class_name;
    std::string id;
    // Reference fields name target ids; many-fields list them. Missing optional
    // fields default to bottom and missing many-fields to the empty set.
    std::vector<std::pair<std::string, FieldInput>> fields;
};

/**
 * Immutable set of objects typed by a ClassModel. Objects are numbered in
 * input order; ids are unique. Every reference resolves.
 */
class ObjectModel {
public:
    static ObjectModel build(std::shared_ptr<const ClassModel> cm, const std::vector<ObjectSpec>& objects);

    [[nodiscard]] const ClassModel& class_model() const { return *cm_; }
    [[nodiscard]] const std::shared_ptr<const ClassModel>& class_model_ptr() const { return cm_; }

    [[nodiscard]] std::size_t size() const { return classes_.size(); }
    [[nodiscard]] ClassId class_of(ObjectId o) const { return classes_[o]; }
    [[nodiscard]] const std::string& id_of(ObjectId o) const { return ids_[o]; }
    [[nodiscard]] std::optional<ObjectId> find(std::string_view id) const;
    /// Throws ModelError when the id is unknown.
    [[nodiscard]] ObjectId object(std::string_view id) const;

    [[nodiscard]] const Value& field(ObjectId o, std::uint32_t slot) const { return values_[o][slot]; }
    [[nodiscard]] std::span<const Value> fields(ObjectId o) const { return values_[o]; }

    /// Objects whose class is c or a subclass of c, ascending.
    [[nodiscard]] const std::vector<ObjectId>& instances(ClassId c) const { return instances_[c]; }
    /// Objects whose class is exactly c.
    [[nodiscard]] const std::vector<ObjectId>& direct_instances(ClassId c) const { return direct_[c]; }

    [[nodiscard]] std::string atom_text(Atom a) const;

    /// Converts back to specs (round-trip for serialization).
    [[nodiscard]] std::vector<ObjectSpec> to_specs() const;

private:
    std::shared_ptr<const ClassModel> cm_;
    std::vector<ClassId> classes_;
    std::vector<std::string> ids_;
    std::unordered_map<std::string, ObjectId> by_id_;
    std::vector<std::vector<Value>> values_;
    std::vector<std::vector<ObjectId>> instances_;
    std::vector<std::vector<ObjectId>> direct_;
};

} // namespace oral
