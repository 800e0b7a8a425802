// SPDX-License-Identifier: Apache-2.0
#include "oral/semantics.hpp"

#include <algorithm>

#include "oral/error.hpp"

namespace oral {

Multiplicity combine(Multiplicity a, Multiplicity b)
{
    if (a == Multiplicity::Many || b == Multiplicity::Many) return Multiplicity::Many;
    if (a == Multiplicity::One && b == Multiplicity::One) return Multiplicity::One;
    return Multiplicity::Optional;
}

PathInfo path_info(const ClassModel& cm, ClassId anchor, const Path& p)
{
    PathInfo info{FieldType::reference(anchor), Multiplicity::One, p.size()};
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!info.type.is_reference())
            throw TypeError("path '" + path_text(p) + "' continues past non-reference field '" + p[i - 1] + "'");
        const Field* f = cm.find_field(info.type.target, p[i]);
        if (!f)
            throw TypeError("class " + cm.class_name(info.type.target) + " has no field '" + p[i] + "' (path '" + path_text(p) + "')");
        info.type = f->type;
        info.multiplicity = combine(info.multiplicity, f->multiplicity);
    }
    return info;
}

Multiplicity multiplicity_of_path(const ClassModel& cm, ClassId anchor, const Path& p)
{
    return path_info(cm, anchor, p).multiplicity;
}

ConstraintOp op_from_mul(Multiplicity m1, Multiplicity m2)
{
    if (m1 == Multiplicity::Many && m2 == Multiplicity::Many) return ConstraintOp::Supseteq;
    if (m1 == Multiplicity::Many) return ConstraintOp::Contains;
    if (m2 == Multiplicity::Many) return ConstraintOp::In;
    return ConstraintOp::Equal;
}

namespace {

// Returns nullopt on ill-typed steps; `why` receives a description.
std::optional<Value> navigate(const ObjectModel& om, ObjectId o, const Path& p, std::string* why)
{
    const auto& cm = om.class_model();
    Value cur = Value::single(Atom::object(o));
    auto fail = [&](const std::string& msg) -> std::optional<Value> {
        if (why) *why = msg;
        return std::nullopt;
    };
    for (const auto& step : p) {
        auto nid = cm.field_name_id(step);
        if (!nid) return fail("no class declares field '" + step + "'");
        if (cur.is_bottom()) return Value::bottom();
        if (cur.is_single()) {
            auto a = cur.atom();
            if (a.kind != Atom::Kind::Object) return fail("cannot navigate '" + step + "' from a non-object value");
            auto slot = cm.slot_of(om.class_of(a.value), *nid);
            if (slot < 0) return fail("class " + cm.class_name(om.class_of(a.value)) + " has no field '" + step + "'");
            cur = om.field(a.value, static_cast<std::uint32_t>(slot));
        } else {
            std::vector<Atom> collected;
            for (auto a : cur.elements()) {
                if (a.kind != Atom::Kind::Object) return fail("cannot navigate '" + step + "' from a non-object value");
                auto slot = cm.slot_of(om.class_of(a.value), *nid);
                if (slot < 0) return fail("class " + cm.class_name(om.class_of(a.value)) + " has no field '" + step + "'");
                const auto& v = om.field(a.value, static_cast<std::uint32_t>(slot));
                if (v.is_single()) collected.push_back(v.atom());
                else if (v.is_set()) collected.insert(collected.end(), v.elements().begin(), v.elements().end());
            }
            cur = Value::set(std::move(collected));
        }
    }
    return cur;
}

} // namespace

Value nav(const ObjectModel& om, ObjectId o, const Path& p)
{
    std::string why;
    auto v = navigate(om, o, p, &why);
    if (!v) throw TypeError("navigating '" + path_text(p) + "' from " + om.id_of(o) + ": " + why);
    return std::move(*v);
}

std::optional<Value> try_nav(const ObjectModel& om, ObjectId o, const Path& p)
{
    return navigate(om, o, p, nullptr);
}

std::optional<Atom> constant_atom(const ObjectModel& om, const Constant& c)
{
    if (const bool* b = std::get_if<bool>(&c)) return Atom::boolean(*b);
    auto o = om.find(std::get<std::string>(c));
    if (!o) return std::nullopt;
    return Atom::id_string(*o);
}

bool satisfies(const ObjectModel& om, ObjectId o, const AtomicCondition& c)
{
    auto v = try_nav(om, o, c.path);
    if (!v) return false;
    if (c.op == ConditionOp::In) {
        if (!v->is_single()) return false;
        for (const auto& k : c.values) {
            auto a = constant_atom(om, k);
            if (a && *a == v->atom()) return true;
        }
        return false;
    }
    if (!v->is_set() || c.values.size() != 1) return false;
    auto a = constant_atom(om, c.values.front());
    return a && v->contains(*a);
}

bool satisfies(const ObjectModel& om, ObjectId o, std::span<const AtomicCondition> cond)
{
    return std::all_of(cond.begin(), cond.end(), [&](const AtomicCondition& c) { return satisfies(om, o, c); });
}

bool satisfies(const ObjectModel& om, ObjectId s, ObjectId r, const AtomicConstraint& c)
{
    auto v1 = try_nav(om, s, c.subject_path);
    auto v2 = try_nav(om, r, c.resource_path);
    if (!v1 || !v2 || v1->is_bottom() || v2->is_bottom()) return false;
    switch (c.op) {
    case ConstraintOp::Equal:
        if (v1->is_single() && v2->is_single()) return v1->atom() == v2->atom();
        if (v1->is_set() && v2->is_set()) return v1->elements() == v2->elements();
        return false;
    case ConstraintOp::In:
        return v1->is_single() && v2->contains(v1->atom());
    case ConstraintOp::Contains:
        return v2->is_single() && v1->contains(v2->atom());
    case ConstraintOp::Supseteq:
        return v1->includes(*v2);
    }
    return false;
}

bool satisfies(const ObjectModel& om, ObjectId s, ObjectId r, std::span<const AtomicConstraint> cons)
{
    return std::all_of(cons.begin(), cons.end(), [&](const AtomicConstraint& c) { return satisfies(om, s, r, c); });
}

SubjectPermissionRelation rule_meaning(const ObjectModel& om, std::span<const std::string> actions, const Rule& rule)
{
    const auto& cm = om.class_model();
    const auto st = cm.class_id(rule.subject_type);
    const auto rt = cm.class_id(rule.resource_type);
    std::vector<std::string> acts;
    for (const auto& a : rule.actions)
        if (std::find(actions.begin(), actions.end(), a) != actions.end()) acts.push_back(a);

    SubjectPermissionRelation out;
    if (acts.empty()) return out;
    std::vector<ObjectId> resources;
    for (auto r : om.instances(rt))
        if (satisfies(om, r, rule.resource_condition)) resources.push_back(r);
    for (auto s : om.instances(st)) {
        if (!satisfies(om, s, rule.subject_condition)) continue;
        for (auto r : resources) {
            if (!satisfies(om, s, r, rule.constraint)) continue;
            for (const auto& a : acts) out.insert(PermissionTuple{s, r, a});
        }
    }
    return out;
}

SubjectPermissionRelation policy_meaning(const ObjectModel& om, std::span<const std::string> actions, std::span<const Rule> rules)
{
    SubjectPermissionRelation out;
    for (const auto& r : rules) out.merge(rule_meaning(om, actions, r));
    return out;
}

bool is_valid(const ObjectModel& om, std::span<const std::string> actions, const Rule& rule, const SubjectPermissionRelation& sp0)
{
    auto m = rule_meaning(om, actions, rule);
    return std::includes(sp0.begin(), sp0.end(), m.begin(), m.end());
}

double wsc(const AtomicCondition& c)
{
    const double vals = c.op == ConditionOp::Contains ? 1.0 : static_cast<double>(c.values.size());
    return static_cast<double>(c.path.size()) + vals;
}

double wsc(const AtomicConstraint& c)
{
    return static_cast<double>(c.subject_path.size() + c.resource_path.size());
}

double wsc(const Rule& r, const WscWeights& w)
{
    double sc = 0, rc = 0, cons = 0;
    for (const auto& c : r.subject_condition) sc += wsc(c);
    for (const auto& c : r.resource_condition) rc += wsc(c);
    for (const auto& c : r.constraint) cons += wsc(c);
    return w.w1 * sc + w.w1 * rc + w.w2 * cons + w.w3 * static_cast<double>(r.actions.size());
}

double wsc(std::span<const Rule> rules, const WscWeights& w)
{
    double total = 0;
    for (const auto& r : rules) total += wsc(r, w);
    return total;
}

std::string_view to_string(Requirement r)
{
    switch (r) {
    case Requirement::Ok: return "ok";
    case Requirement::UnknownClass: return "unknown class";
    case Requirement::UnknownField: return "unknown field";
    case Requirement::EmptyActions: return "empty action set";
    case Requirement::TypeCorrectPaths: return "requirement 1: paths are type-correct";
    case Requirement::ConstraintSameType: return "requirement 2(a): constraint paths have the same type";
    case Requirement::ConstraintNotString: return "requirement 2(b): constraint paths are not String-typed";
    case Requirement::ConditionNotReference: return "requirement 3: condition path is not reference-typed";
    case Requirement::InConditionMultiplicity: return "requirement 4: 'in' condition needs a single-valued path";
    case Requirement::ContainsConditionMultiplicity: return "requirement 5: 'contains' condition needs a many-valued path and an atomic value";
    case Requirement::EqualConstraintMultiplicity: return "requirement 6: '=' constraint needs single-valued paths";
    case Requirement::InConstraintMultiplicity: return "requirement 7: 'in' constraint needs single-valued subject path and many-valued resource path";
    case Requirement::ContainsConstraintMultiplicity: return "requirement 8: 'contains' constraint needs many-valued subject path and single-valued resource path";
    case Requirement::SupseteqConstraintMultiplicity: return "requirement 9: 'supseteq' constraint needs many-valued paths";
    }
    return "?";
}

namespace {

struct Typed {
    bool ok = false;
    PathInfo info;
};

} // namespace

bool compatible_types(const ClassModel& cm, const FieldType& a, const FieldType& b)
{
    if (a == b) return true;
    return a.is_reference() && b.is_reference() && (cm.is_subclass_of(a.target, b.target) || cm.is_subclass_of(b.target, a.target));
}

WellFormedness check_well_formed(const ClassModel& cm, const Rule& rule)
{
    auto fail = [](Requirement r, std::string msg) { return WellFormedness{r, std::move(msg)}; };
    auto st = cm.find_class(rule.subject_type);
    if (!st) return fail(Requirement::UnknownClass, "unknown subject type '" + rule.subject_type + "'");
    auto rt = cm.find_class(rule.resource_type);
    if (!rt) return fail(Requirement::UnknownClass, "unknown resource type '" + rule.resource_type + "'");
    if (rule.actions.empty()) return fail(Requirement::EmptyActions, "rule has no actions");

    // Requirement 1 for every path first, so that later checks can rely on types.
    auto type_of = [&](ClassId anchor, const Path& p, PathInfo& out) -> std::optional<WellFormedness> {
        for (const auto& f : p)
            if (!cm.field_name_id(f)) return fail(Requirement::UnknownField, "unknown field '" + f + "' in path '" + path_text(p) + "'");
        try {
            out = path_info(cm, anchor, p);
        } catch (const TypeError& e) {
            return fail(Requirement::TypeCorrectPaths, e.what());
        }
        return std::nullopt;
    };
    std::vector<PathInfo> sc(rule.subject_condition.size()), rc(rule.resource_condition.size());
    std::vector<std::pair<PathInfo, PathInfo>> cons(rule.constraint.size());
    for (std::size_t i = 0; i < sc.size(); ++i)
        if (auto e = type_of(*st, rule.subject_condition[i].path, sc[i])) return *e;
    for (std::size_t i = 0; i < rc.size(); ++i)
        if (auto e = type_of(*rt, rule.resource_condition[i].path, rc[i])) return *e;
    for (std::size_t i = 0; i < cons.size(); ++i) {
        if (auto e = type_of(*st, rule.constraint[i].subject_path, cons[i].first)) return *e;
        if (auto e = type_of(*rt, rule.constraint[i].resource_path, cons[i].second)) return *e;
    }
    auto constants_typed = [&](const AtomicCondition& c, const PathInfo& info) {
        for (const auto& k : c.values) {
            const bool is_bool = std::holds_alternative<bool>(k);
            if (info.type.base == BaseType::Boolean && !is_bool) return false;
            if (info.type.base == BaseType::String && is_bool) return false;
        }
        return true;
    };
    for (std::size_t i = 0; i < sc.size(); ++i)
        if (!sc[i].type.is_reference() && !constants_typed(rule.subject_condition[i], sc[i]))
            return fail(Requirement::TypeCorrectPaths, "constant of wrong type in '" + to_string(rule.subject_condition[i], "subject") + "'");
    for (std::size_t i = 0; i < rc.size(); ++i)
        if (!rc[i].type.is_reference() && !constants_typed(rule.resource_condition[i], rc[i]))
            return fail(Requirement::TypeCorrectPaths, "constant of wrong type in '" + to_string(rule.resource_condition[i], "resource") + "'");

    for (std::size_t i = 0; i < cons.size(); ++i) {
        const auto& [a, b] = cons[i];
        if (!compatible_types(cm, a.type, b.type)) return fail(Requirement::ConstraintSameType, "paths of '" + to_string(rule.constraint[i]) + "' have different types");
        if (a.type.base == BaseType::String) return fail(Requirement::ConstraintNotString, "'" + to_string(rule.constraint[i]) + "' compares String paths");
    }

    auto each_condition = [&](auto&& check) -> std::optional<WellFormedness> {
        for (std::size_t i = 0; i < sc.size(); ++i)
            if (auto e = check(rule.subject_condition[i], sc[i], "subject")) return e;
        for (std::size_t i = 0; i < rc.size(); ++i)
            if (auto e = check(rule.resource_condition[i], rc[i], "resource")) return e;
        return std::nullopt;
    };
    if (auto e = each_condition([&](const AtomicCondition& c, const PathInfo& info, const char* side) -> std::optional<WellFormedness> {
            if (info.type.is_reference()) return fail(Requirement::ConditionNotReference, "'" + to_string(c, side) + "' has a reference-typed path");
            return std::nullopt;
        }))
        return *e;
    if (auto e = each_condition([&](const AtomicCondition& c, const PathInfo& info, const char* side) -> std::optional<WellFormedness> {
            if (c.op == ConditionOp::In && info.multiplicity == Multiplicity::Many)
                return fail(Requirement::InConditionMultiplicity, "'" + to_string(c, side) + "' uses 'in' on a many-valued path");
            return std::nullopt;
        }))
        return *e;
    if (auto e = each_condition([&](const AtomicCondition& c, const PathInfo& info, const char* side) -> std::optional<WellFormedness> {
            if (c.op == ConditionOp::Contains && (info.multiplicity != Multiplicity::Many || c.values.size() != 1))
                return fail(Requirement::ContainsConditionMultiplicity, "'" + to_string(c, side) + "' misuses 'contains'");
            return std::nullopt;
        }))
        return *e;

    const std::pair<ConstraintOp, Requirement> order[] = {
        {ConstraintOp::Equal, Requirement::EqualConstraintMultiplicity},
        {ConstraintOp::In, Requirement::InConstraintMultiplicity},
        {ConstraintOp::Contains, Requirement::ContainsConstraintMultiplicity},
        {ConstraintOp::Supseteq, Requirement::SupseteqConstraintMultiplicity},
    };
    for (const auto& [op, req] : order) {
        for (std::size_t i = 0; i < cons.size(); ++i) {
            if (rule.constraint[i].op != op) continue;
            const bool m1 = cons[i].first.multiplicity == Multiplicity::Many;
            const bool m2 = cons[i].second.multiplicity == Multiplicity::Many;
            bool ok = true;
            switch (op) {
            case ConstraintOp::Equal: ok = !m1 && !m2; break;
            case ConstraintOp::In: ok = !m1 && m2; break;
            case ConstraintOp::Contains: ok = m1 && !m2; break;
            case ConstraintOp::Supseteq: ok = m1 && m2; break;
            }
            if (!ok) return fail(req, "'" + to_string(rule.constraint[i]) + "' has operator/multiplicity mismatch");
        }
    }
    return {};
}

void validate(const AclPolicy& acl)
{
    if (!acl.object_model) throw ModelError("ACL policy has no object model");
    const auto n = acl.object_model->size();
    for (const auto& t : acl.sp0) {
        if (t.subject >= n || t.resource >= n) throw ModelError("subject-permission tuple references an unknown object");
        if (!std::binary_search(acl.actions.begin(), acl.actions.end(), t.action))
            throw ModelError("subject-permission tuple uses undeclared action '" + t.action + "'");
    }
}

std::string tuple_text(const ObjectModel& om, const PermissionTuple& t)
{
    return "<" + om.id_of(t.subject) + ", " + om.id_of(t.resource) + ", " + t.action + ">";
}

} // namespace oral
