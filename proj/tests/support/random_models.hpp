// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "oral/acl.hpp"
#include "oral/rng.hpp"
#include "oral/rule.hpp"
#include "oral/semantics.hpp"

namespace oral::testing {

inline std::shared_ptr<const ClassModel> random_class_model(Rng& rng, std::size_t max_classes = 5)
{
    const auto n = static_cast<std::size_t>(rng.uniform_int(2, static_cast<std::int64_t>(max_classes)));
    std::vector<ClassSpec> specs(n);
    int field_no = 0;
    for (std::size_t c = 0; c < n; ++c) {
        specs[c].name = "C" + std::to_string(c);
        if (c > 0 && rng.bernoulli(0.3)) specs[c].parent = "C" + std::to_string(rng.index(c));
        const auto nf = rng.uniform_int(0, 3);
        for (int f = 0; f < nf; ++f) {
            FieldSpec fs;
            fs.name = "f" + std::to_string(field_no++);
            if (rng.bernoulli(0.35)) {
                fs.type = "Boolean";
            } else {
                fs.type = "C" + std::to_string(rng.index(n));
                fs.multiplicity = static_cast<Multiplicity>(rng.index(3));
            }
            specs[c].fields.push_back(fs);
        }
    }
    return std::make_shared<const ClassModel>(ClassModel::build(specs));
}

inline std::shared_ptr<const ObjectModel> random_object_model(Rng& rng, std::shared_ptr<const ClassModel> cm, std::size_t max_objects = 30)
{
    const auto nc = cm->class_count();
    const auto n = std::max<std::size_t>(nc, static_cast<std::size_t>(rng.uniform_int(static_cast<std::int64_t>(nc), static_cast<std::int64_t>(max_objects))));
    std::vector<ClassId> cls(n);
    for (std::size_t i = 0; i < n; ++i) cls[i] = i < nc ? static_cast<ClassId>(i) : static_cast<ClassId>(rng.index(nc));
    auto id = [](std::size_t i) { return "o" + std::to_string(i); };
    auto instances_of = [&](ClassId c) {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < n; ++i)
            if (cm->is_subclass_of(cls[i], c)) out.push_back(i);
        return out;
    };
    std::vector<ObjectSpec> specs(n);
    for (std::size_t i = 0; i < n; ++i) {
        specs[i].class_name = cm->class_name(cls[i]);
        specs[i].id = id(i);
        for (const auto& f : cm->fields(cls[i])) {
            if (f.slot == 0) continue;
            if (f.type.base == BaseType::Boolean) {
                specs[i].fields.emplace_back(f.name, rng.bernoulli(0.5));
                continue;
            }
            auto targets = instances_of(f.type.target);
            if (f.multiplicity == Multiplicity::Many) {
                std::vector<std::string> refs;
                for (auto k : rng.sample(targets.size(), rng.index(4))) refs.push_back(id(targets[k]));
                specs[i].fields.emplace_back(f.name, refs);
            } else if (f.multiplicity == Multiplicity::One || rng.bernoulli(0.7)) {
                specs[i].fields.emplace_back(f.name, id(targets[rng.index(targets.size())]));
            }
        }
    }
    return std::make_shared<const ObjectModel>(ObjectModel::build(cm, specs));
}

inline Path random_path(Rng& rng, const ClassModel& cm, ClassId anchor, std::size_t max_len, bool allow_empty)
{
    Path p;
    ClassId cur = anchor;
    const auto len = rng.uniform_int(allow_empty ? 0 : 1, static_cast<std::int64_t>(max_len));
    for (std::int64_t i = 0; i < len; ++i) {
        auto fields = cm.fields(cur);
        const auto& f = fields[rng.index(fields.size())];
        p.push_back(f.name);
        if (!f.type.is_reference()) break;
        cur = f.type.target;
    }
    return p;
}

inline AtomicCondition random_condition(Rng& rng, const ClassModel& cm, const ObjectModel& om, ClassId anchor)
{
    for (;;) {
        Path p = random_path(rng, cm, anchor, 3, false);
        auto info = path_info(cm, anchor, p);
        if (info.type.is_reference()) {
            if (rng.bernoulli(0.5)) continue;
            p.push_back(std::string(kIdField));
            info = path_info(cm, anchor, p);
        }
        AtomicCondition c;
        c.path = p;
        auto constant = [&]() -> Constant {
            if (info.type.base == BaseType::Boolean) return rng.bernoulli(0.5);
            if (rng.bernoulli(0.1)) return std::string("missing");
            return om.id_of(static_cast<ObjectId>(rng.index(om.size())));
        };
        if (info.multiplicity == Multiplicity::Many) {
            c.op = ConditionOp::Contains;
            c.values.push_back(constant());
        } else {
            c.op = ConditionOp::In;
            const auto k = rng.uniform_int(1, 3);
            for (int i = 0; i < k; ++i) c.values.push_back(constant());
        }
        canonicalize(c);
        return c;
    }
}

/// Random well-formed rule over the given models.
inline Rule random_rule(Rng& rng, const ClassModel& cm, const ObjectModel& om, const std::vector<std::string>& actions)
{
    Rule r;
    const auto st = static_cast<ClassId>(rng.index(cm.class_count()));
    const auto rt = static_cast<ClassId>(rng.index(cm.class_count()));
    r.subject_type = cm.class_name(st);
    r.resource_type = cm.class_name(rt);
    for (auto k = rng.uniform_int(0, 2); k > 0; --k) r.subject_condition.push_back(random_condition(rng, cm, om, st));
    for (auto k = rng.uniform_int(0, 2); k > 0; --k) r.resource_condition.push_back(random_condition(rng, cm, om, rt));
    const auto want = rng.uniform_int(0, 2);
    for (int tries = 0; tries < 200 && static_cast<std::int64_t>(r.constraint.size()) < want; ++tries) {
        AtomicConstraint c;
        c.subject_path = random_path(rng, cm, st, 3, true);
        c.resource_path = random_path(rng, cm, rt, 3, true);
        auto a = path_info(cm, st, c.subject_path);
        auto b = path_info(cm, rt, c.resource_path);
        if (!compatible_types(cm, a.type, b.type) || a.type.base == BaseType::String) continue;
        c.op = op_from_mul(a.multiplicity, b.multiplicity);
        r.constraint.push_back(c);
    }
    const auto na = rng.uniform_int(1, static_cast<std::int64_t>(actions.size()));
    for (auto k : rng.sample(actions.size(), static_cast<std::size_t>(na))) r.actions.push_back(actions[k]);
    canonicalize(r);
    return r;
}

/**
 * Brute-force meaning computed from the object specs alone, with its own
 * navigation over textual values; shares no code with the library's
 * evaluators beyond the data structures.
 */
class BruteForce {
public:
    explicit BruteForce(const ObjectModel& om)
        : om_(om)
    {
        for (const auto& s : om.to_specs()) objects_[s.id] = s;
    }

    SubjectPermissionRelation meaning(const std::vector<std::string>& actions, const Rule& r) const
    {
        SubjectPermissionRelation out;
        for (ObjectId s = 0; s < om_.size(); ++s) {
            if (!has_type(s, r.subject_type)) continue;
            if (!all_conditions(s, r.subject_condition)) continue;
            for (ObjectId o = 0; o < om_.size(); ++o) {
                if (!has_type(o, r.resource_type)) continue;
                if (!all_conditions(o, r.resource_condition)) continue;
                bool ok = true;
                for (const auto& c : r.constraint) ok = ok && constraint(s, o, c);
                if (!ok) continue;
                for (const auto& a : r.actions)
                    if (std::find(actions.begin(), actions.end(), a) != actions.end()) out.insert({s, o, a});
            }
        }
        return out;
    }

private:
    struct V {
        bool bottom = true;
        bool is_set = false;
        std::set<std::string> elems;
    };

    bool has_type(ObjectId o, const std::string& type) const
    {
        const auto& cm = om_.class_model();
        return cm.is_subclass_of(om_.class_of(o), cm.class_id(type));
    }

    V step(const std::string& obj, const std::string& field) const
    {
        const auto& spec = objects_.at(obj);
        V v;
        if (field == "id") {
            v.bottom = false;
            v.elems.insert("s:" + obj);
            return v;
        }
        for (const auto& [name, in] : spec.fields) {
            if (name != field) continue;
            if (const bool* b = std::get_if<bool>(&in)) {
                v.bottom = false;
                v.elems.insert(*b ? "b:true" : "b:false");
            } else if (const auto* s = std::get_if<std::string>(&in)) {
                v.bottom = false;
                v.elems.insert("o:" + *s);
            } else if (const auto* l = std::get_if<std::vector<std::string>>(&in)) {
                v.bottom = false;
                v.is_set = true;
                for (const auto& x : *l) v.elems.insert("o:" + x);
            }
        }
        return v;
    }

    V nav(ObjectId o, const Path& p) const
    {
        V cur;
        cur.bottom = false;
        cur.elems.insert("o:" + om_.id_of(o));
        for (const auto& f : p) {
            if (cur.bottom) return cur;
            V next;
            next.bottom = false;
            next.is_set = cur.is_set;
            for (const auto& e : cur.elems) {
                V part = step(e.substr(2), f);
                if (!cur.is_set) {
                    next = part;
                    break;
                }
                next.elems.insert(part.elems.begin(), part.elems.end());
            }
            cur = next;
        }
        return cur;
    }

    static std::string encode(const Constant& c)
    {
        if (const bool* b = std::get_if<bool>(&c)) return *b ? "b:true" : "b:false";
        return "s:" + std::get<std::string>(c);
    }

    bool condition(ObjectId o, const AtomicCondition& c) const
    {
        V v = nav(o, c.path);
        if (v.bottom) return false;
        if (c.op == ConditionOp::In) {
            if (v.is_set) return false;
            for (const auto& k : c.values)
                if (v.elems.count(encode(k))) return true;
            return false;
        }
        return v.is_set && c.values.size() == 1 && v.elems.count(encode(c.values.front()));
    }

    bool all_conditions(ObjectId o, const Condition& cs) const
    {
        for (const auto& c : cs)
            if (!condition(o, c)) return false;
        return true;
    }

    bool constraint(ObjectId s, ObjectId r, const AtomicConstraint& c) const
    {
        V a = nav(s, c.subject_path);
        V b = nav(r, c.resource_path);
        if (a.bottom || b.bottom) return false;
        switch (c.op) {
        case ConstraintOp::Equal: return a.is_set == b.is_set && a.elems == b.elems;
        case ConstraintOp::In: return !a.is_set && b.is_set && b.elems.count(*a.elems.begin());
        case ConstraintOp::Contains: return a.is_set && !b.is_set && a.elems.count(*b.elems.begin());
        case ConstraintOp::Supseteq: return a.is_set && b.is_set && std::includes(a.elems.begin(), a.elems.end(), b.elems.begin(), b.elems.end());
        }
        return false;
    }

    const ObjectModel& om_;
    std::map<std::string, ObjectSpec> objects_;
};

} // namespace oral::testing
