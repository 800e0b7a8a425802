// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace oral {

using ClassId = std::uint32_t;
inline constexpr ClassId kNoClass = ~ClassId{0};

enum class Multiplicity : std::uint8_t { One, Optional, Many };

std::string_view to_string(Multiplicity m);
std::optional<Multiplicity> parse_multiplicity(std::string_view text);

enum class BaseType : std::uint8_t { Boolean, String, Reference };

struct FieldType {
    BaseType base = BaseType::Boolean;
    ClassId target = kNoClass; // set iff base == Reference

    static FieldType boolean() { return {BaseType::Boolean, kNoClass}; }
    static FieldType string() { return {BaseType::String, kNoClass}; }
    static FieldType reference(ClassId c) { return {BaseType::Reference, c}; }

    [[nodiscard]] bool is_reference() const { return base == BaseType::Reference; }
    friend bool operator==(const FieldType&, const FieldType&) = default;
};

// A field visible on a class. `slot` is its position in the object layout;
// inherited fields keep the slot they have in the parent, `id` is slot 0.
struct Field {
    std::string name;
    FieldType type;
    Multiplicity multiplicity = Multiplicity::One;
    ClassId declared_in = kNoClass;
    std::uint32_t slot = 0;
};

inline constexpr std::string_view kIdField = "id";

/// Declarative input for building a ClassModel.
struct FieldSpec {
    std::string name;
    std::string type; // "Boolean" or a class name
    Multiplicity multiplicity = Multiplicity::One;
    friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

struct ClassSpec {
    std::string name;
    std::optional<std::string> parent;
    std::vector<FieldSpec> fields;
    friend bool operator==(const ClassSpec&, const ClassSpec&) = default;
};

/**
 * Immutable class model: named classes with single inheritance and typed,
 * multiplicity-annotated fields. Every class implicitly has `id : String [1]`.
 *
 * Built from ClassSpecs by ClassModel::build, which validates that parents
 * exist, inheritance is acyclic, field types resolve, Boolean fields have
 * multiplicity one and no field is redeclared along an inheritance chain.
 */
class ClassModel {
public:
    static ClassModel build(std::vector<ClassSpec> specs);

    [[nodiscard]] std::size_t class_count() const { return names_.size(); }
    [[nodiscard]] const std::string& class_name(ClassId c) const { return names_[c]; }
    [[nodiscard]] std::optional<ClassId> find_class(std::string_view name) const;
    /// Throws ModelError for unknown names.
    [[nodiscard]] ClassId class_id(std::string_view name) const;

    [[nodiscard]] ClassId parent(ClassId c) const { return parents_[c]; }
    [[nodiscard]] std::span<const ClassId> children(ClassId c) const { return children_[c]; }
    /// Strict ancestors, nearest first.
    [[nodiscard]] std::vector<ClassId> ancestors(ClassId c) const;
    /// Reflexive: is_subclass_of(c, c) holds.
    [[nodiscard]] bool is_subclass_of(ClassId c, ClassId ancestor) const;
    /// Reflexive descendants of c.
    [[nodiscard]] std::vector<ClassId> descendants(ClassId c) const;

    /// All fields visible on c, including `id` and inherited ones, in slot order.
    [[nodiscard]] std::span<const Field> fields(ClassId c) const { return fields_[c]; }
    [[nodiscard]] const Field* find_field(ClassId c, std::string_view name) const;

    // Field names are interned so that navigation can look up slots without hashing.
    [[nodiscard]] std::optional<std::uint32_t> field_name_id(std::string_view name) const;
    [[nodiscard]] std::size_t field_name_count() const { return field_names_.size(); }
    /// Slot of the named field on class c, or -1 when c has no such field.
    [[nodiscard]] std::int32_t slot_of(ClassId c, std::uint32_t name_id) const
    {
        return slot_table_[c * field_names_.size() + name_id];
    }
    [[nodiscard]] const Field& field_by_name_id(ClassId c, std::uint32_t name_id) const
    {
        return fields_[c][static_cast<std::size_t>(slot_of(c, name_id))];
    }

    [[nodiscard]] const std::vector<ClassSpec>& specs() const { return specs_; }

    [[nodiscard]] std::string type_name(const FieldType& t) const;

private:
    std::vector<ClassSpec> specs_;
    std::vector<std::string> names_;
    std::unordered_map<std::string, ClassId> by_name_;
    std::vector<ClassId> parents_;
    std::vector<std::vector<ClassId>> children_;
    std::vector<std::vector<Field>> fields_;
    std::vector<std::string> field_names_;
    std::unordered_map<std::string, std::uint32_t> field_name_ids_;
    std::vector<std::int32_t> slot_table_;
};

} // namespace oral
