// SPDX-License-Identifier: Apache-2.0
#include "oral/object_model.hpp"

#include <algorithm>

#include "oral/error.hpp"

namespace oral {

Value Value::set(std::vector<Atom> elems)
{
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    Value v;
    v.kind_ = Kind::Set;
    v.elems_ = std::move(elems);
    return v;
}

bool Value::contains(Atom a) const
{
    return kind_ == Kind::Set && std::binary_search(elems_.begin(), elems_.end(), a);
}

bool Value::includes(const Value& other) const
{
    if (kind_ != Kind::Set || other.kind_ != Kind::Set) return false;
    return std::includes(elems_.begin(), elems_.end(), other.elems_.begin(), other.elems_.end());
}

ObjectModel ObjectModel::build(std::shared_ptr<const ClassModel> cm, const std::vector<ObjectSpec>& objects)
{
    ObjectModel om;
    om.cm_ = std::move(cm);
    const auto& model = *om.cm_;
    const auto n = objects.size();
    om.classes_.reserve(n);
    om.ids_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& spec = objects[i];
        auto c = model.find_class(spec.class_name);
        if (!c) throw ModelError("object '" + spec.id + "' has unknown class '" + spec.class_name + "'");
        if (!om.by_id_.emplace(spec.id, static_cast<ObjectId>(i)).second)
            throw ModelError("duplicate object id '" + spec.id + "'");
        om.classes_.push_back(*c);
        om.ids_.push_back(spec.id);
    }

    om.values_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& spec = objects[i];
        const auto cls = om.classes_[i];
        const auto fields = model.fields(cls);
        std::vector<Value> vals(fields.size());
        std::vector<bool> seen(fields.size(), false);
        vals[0] = Value::single(Atom::id_string(static_cast<ObjectId>(i)));
        seen[0] = true;
        auto where = [&](const std::string& f) { return "object '" + spec.id + "' field '" + f + "'"; };
        auto resolve = [&](const Field& f, const std::string& ref) {
            auto it = om.by_id_.find(ref);
            if (it == om.by_id_.end()) throw ModelError(where(f.name) + ": dangling reference '" + ref + "'");
            if (!model.is_subclass_of(om.classes_[it->second], f.type.target))
                throw ModelError(where(f.name) + ": '" + ref + "' is not a " + model.class_name(f.type.target));
            return Atom::object(it->second);
        };
        for (const auto& [fname, input] : spec.fields) {
            if (fname == kIdField) throw ModelError(where(fname) + ": id is given separately");
            const Field* f = model.find_field(cls, fname);
            if (!f) throw ModelError(where(fname) + ": no such field in class " + model.class_name(cls));
            if (seen[f->slot]) throw ModelError(where(fname) + ": given twice");
            seen[f->slot] = true;
            Value v;
            if (std::holds_alternative<std::monostate>(input)) {
                if (f->multiplicity != Multiplicity::Optional)
                    throw ModelError(where(fname) + ": no value for a field of multiplicity " + std::string(to_string(f->multiplicity)));
                v = Value::bottom();
            } else if (const bool* b = std::get_if<bool>(&input)) {
                if (f->type.base != BaseType::Boolean) throw ModelError(where(fname) + ": Boolean value for non-Boolean field");
                v = Value::single(Atom::boolean(*b));
            } else if (const auto* s = std::get_if<std::string>(&input)) {
                if (!f->type.is_reference()) throw ModelError(where(fname) + ": reference value for Boolean field");
                if (f->multiplicity == Multiplicity::Many) throw ModelError(where(fname) + ": many-valued field needs a list");
                v = Value::single(resolve(*f, *s));
            } else {
                const auto& list = std::get<std::vector<std::string>>(input);
                if (f->multiplicity != Multiplicity::Many)
                    throw ModelError(where(fname) + ": list value for a field of multiplicity " + std::string(to_string(f->multiplicity)));
                std::vector<Atom> atoms;
                atoms.reserve(list.size());
                for (const auto& ref : list) atoms.push_back(resolve(*f, ref));
                v = Value::set(std::move(atoms));
            }
            vals[f->slot] = std::move(v);
        }
        for (const auto& f : fields) {
            if (seen[f.slot]) continue;
            switch (f.multiplicity) {
            case Multiplicity::Optional: vals[f.slot] = Value::bottom(); break;
            case Multiplicity::Many: vals[f.slot] = Value::set({}); break;
            case Multiplicity::One: throw ModelError(where(f.name) + ": missing value");
            }
        }
        om.values_[i] = std::move(vals);
    }

    om.instances_.resize(model.class_count());
    om.direct_.resize(model.class_count());
    for (std::size_t i = 0; i < n; ++i) {
        om.direct_[om.classes_[i]].push_back(static_cast<ObjectId>(i));
        for (auto c = om.classes_[i]; c != kNoClass; c = model.parent(c))
            om.instances_[c].push_back(static_cast<ObjectId>(i));
    }
    return om;
}

std::optional<ObjectId> ObjectModel::find(std::string_view id) const
{
    auto it = by_id_.find(std::string(id));
    if (it == by_id_.end()) return std::nullopt;
    return it->second;
}

ObjectId ObjectModel::object(std::string_view id) const
{
    auto o = find(id);
    if (!o) throw ModelError("unknown object '" + std::string(id) + "'");
    return *o;
}

std::string ObjectModel::atom_text(Atom a) const
{
    switch (a.kind) {
    case Atom::Kind::Boolean: return a.value ? "true" : "false";
    case Atom::Kind::String: return ids_[a.value];
    case Atom::Kind::Object: return ids_[a.value];
    }
    return "?";
}

std::vector<ObjectSpec> ObjectModel::to_specs() const
{
    const auto& model = *cm_;
    std::vector<ObjectSpec> out;
    out.reserve(size());
    for (ObjectId o = 0; o < size(); ++o) {
        ObjectSpec spec;
        spec.class_name = model.class_name(classes_[o]);
        spec.id = ids_[o];
        for (const auto& f : model.fields(classes_[o])) {
            if (f.slot == 0) continue;
            const auto& v = values_[o][f.slot];
            FieldInput in;
            if (v.is_bottom()) {
                in = std::monostate{};
            } else if (v.is_single()) {
                if (f.type.base == BaseType::Boolean) in = v.atom().value != 0;
                else in = ids_[v.atom().value];
            } else {
                std::vector<std::string> refs;
                for (auto a : v.elements()) refs.push_back(ids_[a.value]);
                in = std::move(refs);
            }
            spec.fields.emplace_back(f.name, std::move(in));
        }
        out.push_back(std::move(spec));
    }
    return out;
}

} // namespace oral
