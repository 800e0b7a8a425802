// SPDX-License-Identifier: Apache-2.0
#include "oral/class_model.hpp"

#include <algorithm>
#include <functional>

#include "oral/error.hpp"

namespace oral {

std::string_view to_string(Multiplicity m)
{
    switch (m) {
    case Multiplicity::One: return "one";
    case Multiplicity::Optional: return "optional";
    case Multiplicity::Many: return "many";
    }
    return "?";
}

std::optional<Multiplicity> parse_multiplicity(std::string_view text)
{
    if (text == "one" || text == "1") return Multiplicity::One;
    if (text == "optional" || text == "?") return Multiplicity::Optional;
    if (text == "many" || text == "*") return Multiplicity::Many;
    return std::nullopt;
}

ClassModel ClassModel::build(std::vector<ClassSpec> specs)
{
    ClassModel cm;
    cm.specs_ = std::move(specs);
    const auto n = cm.specs_.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& name = cm.specs_[i].name;
        if (name.empty()) throw ModelError("class with empty name");
        if (name == "Boolean" || name == "String")
            throw ModelError("class name '" + name + "' is reserved");
        if (!cm.by_name_.emplace(name, static_cast<ClassId>(i)).second)
            throw ModelError("duplicate class '" + name + "'");
        cm.names_.push_back(name);
    }

    cm.parents_.assign(n, kNoClass);
    cm.children_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& spec = cm.specs_[i];
        if (spec.parent && !spec.parent->empty()) {
            auto it = cm.by_name_.find(*spec.parent);
            if (it == cm.by_name_.end())
                throw ModelError("class '" + spec.name + "' has unknown parent '" + *spec.parent + "'");
            cm.parents_[i] = it->second;
            cm.children_[it->second].push_back(static_cast<ClassId>(i));
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t steps = 0;
        for (auto c = cm.parents_[i]; c != kNoClass; c = cm.parents_[c])
            if (++steps > n) throw ModelError("inheritance cycle through class '" + cm.names_[i] + "'");
    }
    for (auto& ch : cm.children_)
        std::sort(ch.begin(), ch.end(), [&](ClassId a, ClassId b) { return cm.names_[a] < cm.names_[b]; });

    // Lay out fields top-down so that inherited slots are stable.
    cm.fields_.resize(n);
    std::vector<int> state(n, 0);
    std::function<void(ClassId)> layout = [&](ClassId c) {
        if (state[c] == 2) return;
        state[c] = 1;
        std::vector<Field> fields;
        if (cm.parents_[c] == kNoClass) {
            fields.push_back(Field{std::string(kIdField), FieldType::string(), Multiplicity::One, c, 0});
        } else {
            layout(cm.parents_[c]);
            fields = cm.fields_[cm.parents_[c]];
        }
        for (const auto& fs : cm.specs_[c].fields) {
            if (fs.name.empty()) throw ModelError("class '" + cm.names_[c] + "' has a field with empty name");
            for (const auto& f : fields)
                if (f.name == fs.name)
                    throw ModelError("field '" + fs.name + "' of class '" + cm.names_[c] + "' is already declared");
            Field f;
            f.name = fs.name;
            f.multiplicity = fs.multiplicity;
            f.declared_in = c;
            f.slot = static_cast<std::uint32_t>(fields.size());
            if (fs.type == "Boolean") {
                f.type = FieldType::boolean();
                if (fs.multiplicity != Multiplicity::One)
                    throw ModelError("Boolean field '" + cm.names_[c] + "." + fs.name + "' must have multiplicity one");
            } else if (fs.type == "String") {
                throw ModelError("field '" + cm.names_[c] + "." + fs.name + "': only the implicit id field has type String");
            } else {
                auto it = cm.by_name_.find(fs.type);
                if (it == cm.by_name_.end())
                    throw ModelError("field '" + cm.names_[c] + "." + fs.name + "' has unknown type '" + fs.type + "'");
                f.type = FieldType::reference(it->second);
            }
            fields.push_back(std::move(f));
        }
        cm.fields_[c] = std::move(fields);
        state[c] = 2;
    };
    for (std::size_t i = 0; i < n; ++i) layout(static_cast<ClassId>(i));

    for (std::size_t c = 0; c < n; ++c)
        for (const auto& f : cm.fields_[c])
            if (cm.field_name_ids_.emplace(f.name, static_cast<std::uint32_t>(cm.field_names_.size())).second)
                cm.field_names_.push_back(f.name);
    const auto m = cm.field_names_.size();
    cm.slot_table_.assign(n * m, -1);
    for (std::size_t c = 0; c < n; ++c)
        for (const auto& f : cm.fields_[c])
            cm.slot_table_[c * m + cm.field_name_ids_.at(f.name)] = static_cast<std::int32_t>(f.slot);
    return cm;
}

std::optional<ClassId> ClassModel::find_class(std::string_view name) const
{
    auto it = by_name_.find(std::string(name));
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
}

ClassId ClassModel::class_id(std::string_view name) const
{
    auto c = find_class(name);
    if (!c) throw ModelError("unknown class '" + std::string(name) + "'");
    return *c;
}

std::vector<ClassId> ClassModel::ancestors(ClassId c) const
{
    std::vector<ClassId> out;
    for (auto p = parents_[c]; p != kNoClass; p = parents_[p]) out.push_back(p);
    return out;
}

bool ClassModel::is_subclass_of(ClassId c, ClassId ancestor) const
{
    for (auto k = c; k != kNoClass; k = parents_[k])
        if (k == ancestor) return true;
    return false;
}

std::vector<ClassId> ClassModel::descendants(ClassId c) const
{
    std::vector<ClassId> out{c};
    for (std::size_t i = 0; i < out.size(); ++i)
        for (auto ch : children_[out[i]]) out.push_back(ch);
    return out;
}

const Field* ClassModel::find_field(ClassId c, std::string_view name) const
{
    for (const auto& f : fields_[c])
        if (f.name == name) return &f;
    return nullptr;
}

std::optional<std::uint32_t> ClassModel::field_name_id(std::string_view name) const
{
    auto it = field_name_ids_.find(std::string(name));
    if (it == field_name_ids_.end()) return std::nullopt;
    return it->second;
}

std::string ClassModel::type_name(const FieldType& t) const
{
    switch (t.base) {
    case BaseType::Boolean: return "Boolean";
    case BaseType::String: return "String";
    case BaseType::Reference: return names_[t.target];
    }
    return "?";
}

} // namespace oral
