// SPDX-License-Identifier: Apache-2.0
#include "oral/evaluator.hpp"

#include <algorithm>
#include <bit>
#include <map>

#include "oral/error.hpp"

namespace oral {

namespace {

template <typename T>
void sort_unique(std::vector<T>& v)
{
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::size_t mix(std::size_t h, std::size_t v)
{
    return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

} // namespace

void IndexedRule::normalize()
{
    sort_unique(subject_cond);
    sort_unique(resource_cond);
    sort_unique(constraint);
    sort_unique(actions);
}

std::size_t IndexedRuleHash::operator()(const IndexedRule& r) const
{
    std::size_t h = mix(r.subject_type, r.resource_type);
    for (auto c : r.subject_cond) h = mix(h, c);
    h = mix(h, 0xffff);
    for (auto c : r.resource_cond) h = mix(h, c);
    h = mix(h, 0xfffe);
    for (auto c : r.constraint) h = mix(h, c);
    h = mix(h, 0xfffd);
    for (auto a : r.actions) h = mix(h, a);
    return h;
}

Evaluator::Evaluator(std::shared_ptr<const AclPolicy> acl)
    : acl_(std::move(acl))
{
    const auto& om = *acl_->object_model;
    const auto& cm = om.class_model();
    n_ = om.size();
    zero_ = Bitset(n_);
    for (const auto& a : acl_->actions) intern_action(a);
    act_count_ = action_names_.size();

    instances_.assign(cm.class_count(), Bitset(n_));
    for (ClassId c = 0; c < cm.class_count(); ++c)
        for (auto o : om.instances(c)) instances_[c].set(o);

    for (const auto& t : acl_->sp0) {
        auto it = action_ids_.find(t.action);
        if (it == action_ids_.end() || it->second >= act_count_) continue;
        tuples_.push_back({t.subject, t.resource, it->second});
    }
    std::sort(tuples_.begin(), tuples_.end(), [](const Tuple& a, const Tuple& b) {
        if (a.action != b.action) return a.action < b.action;
        if (a.subject != b.subject) return a.subject < b.subject;
        return a.resource < b.resource;
    });
    row_index_.assign(act_count_ * n_, -1);
    for (std::size_t i = 0; i < tuples_.size(); ++i) {
        const auto& t = tuples_[i];
        auto& slot = row_index_[t.action * n_ + t.subject];
        if (slot < 0) {
            slot = static_cast<std::int32_t>(sp0_rows_.size());
            sp0_rows_.emplace_back(n_);
            row_base_.push_back(i);
        }
        sp0_rows_[static_cast<std::size_t>(slot)].set(t.resource);
    }
}

std::optional<std::size_t> Evaluator::tuple_index(ObjectId s, ObjectId r, ActionId a) const
{
    if (a >= act_count_ || s >= n_ || r >= n_) return std::nullopt;
    auto slot = row_index_[a * n_ + s];
    if (slot < 0) return std::nullopt;
    const auto& row = sp0_rows_[static_cast<std::size_t>(slot)];
    if (!row.test(r)) return std::nullopt;
    std::size_t rank = row_base_[static_cast<std::size_t>(slot)];
    const auto* w = row.data();
    for (std::size_t i = 0; i < (r >> 6); ++i) rank += static_cast<std::size_t>(std::popcount(w[i]));
    const auto low = w[r >> 6] & ((std::uint64_t{1} << (r & 63)) - 1);
    return rank + static_cast<std::size_t>(std::popcount(low));
}

Bitset Evaluator::all_tuples() const
{
    Bitset b(tuples_.size());
    b.fill();
    return b;
}

PermissionTuple Evaluator::permission_tuple(std::size_t index) const
{
    const auto& t = tuples_[index];
    return {t.subject, t.resource, action_names_[t.action]};
}

ActionId Evaluator::intern_action(const std::string& name)
{
    auto [it, inserted] = action_ids_.try_emplace(name, static_cast<ActionId>(action_names_.size()));
    if (inserted) action_names_.push_back(name);
    return it->second;
}

bool Evaluator::resolve_path(const Path& p, std::vector<std::uint32_t>& out) const
{
    out.clear();
    const auto& cm = class_model();
    for (const auto& f : p) {
        auto id = cm.field_name_id(f);
        if (!id) return false;
        out.push_back(*id);
    }
    return true;
}

CondId Evaluator::intern(AtomicCondition c)
{
    canonicalize(c);
    auto key = to_string(c, "");
    auto it = condition_ids_.find(key);
    if (it != condition_ids_.end()) return it->second;
    CondEntry e;
    e.wsc = oral::wsc(c);
    e.resolvable = resolve_path(c.path, e.path);
    e.ast = std::move(c);
    e.key = key;
    auto id = static_cast<CondId>(conditions_.size());
    conditions_.push_back(std::move(e));
    condition_ids_.emplace(std::move(key), id);
    return id;
}

ConsId Evaluator::intern(const AtomicConstraint& c)
{
    auto key = to_string(c);
    auto it = constraint_ids_.find(key);
    if (it != constraint_ids_.end()) return it->second;
    ConsEntry e;
    e.ast = c;
    e.key = key;
    e.wsc = oral::wsc(c);
    e.resolvable = resolve_path(c.subject_path, e.p1) && resolve_path(c.resource_path, e.p2);
    auto id = static_cast<ConsId>(constraints_.size());
    constraints_.push_back(std::move(e));
    constraint_ids_.emplace(std::move(key), id);
    return id;
}

bool Evaluator::is_id_condition(CondId id) const
{
    const auto& p = conditions_[id].ast.path;
    return p.size() == 1 && p.front() == kIdField;
}

std::optional<Value> Evaluator::nav_ids(ObjectId o, const std::vector<std::uint32_t>& path) const
{
    const auto& om = object_model();
    const auto& cm = om.class_model();
    Value cur = Value::single(Atom::object(o));
    for (auto nid : path) {
        if (cur.is_bottom()) return cur;
        if (cur.is_single()) {
            auto a = cur.atom();
            if (a.kind != Atom::Kind::Object) return std::nullopt;
            auto slot = cm.slot_of(om.class_of(a.value), nid);
            if (slot < 0) return std::nullopt;
            cur = om.field(a.value, static_cast<std::uint32_t>(slot));
            continue;
        }
        std::vector<Atom> out;
        for (auto a : cur.elements()) {
            if (a.kind != Atom::Kind::Object) return std::nullopt;
            auto slot = cm.slot_of(om.class_of(a.value), nid);
            if (slot < 0) return std::nullopt;
            const auto& v = om.field(a.value, static_cast<std::uint32_t>(slot));
            if (v.is_single()) out.push_back(v.atom());
            else if (v.is_set()) out.insert(out.end(), v.elements().begin(), v.elements().end());
        }
        cur = Value::set(std::move(out));
    }
    return cur;
}

const Bitset& Evaluator::condition_meaning(CondId id)
{
    auto& e = conditions_[id];
    if (e.meaning) return *e.meaning;
    Bitset m(n_);
    if (e.resolvable) {
        const auto& om = object_model();
        std::vector<Atom> atoms;
        for (const auto& k : e.ast.values)
            if (auto a = constant_atom(om, k)) atoms.push_back(*a);
        std::sort(atoms.begin(), atoms.end());
        const bool contains = e.ast.op == ConditionOp::Contains;
        if (!contains || e.ast.values.size() == 1) {
            for (ObjectId o = 0; o < n_; ++o) {
                auto v = nav_ids(o, e.path);
                if (!v) continue;
                bool ok = false;
                if (contains) ok = v->is_set() && !atoms.empty() && v->contains(atoms.front());
                else ok = v->is_single() && std::binary_search(atoms.begin(), atoms.end(), v->atom());
                if (ok) m.set(o);
            }
        }
    }
    e.meaning = std::move(m);
    return *e.meaning;
}

namespace {

std::uint64_t atom_key(Atom a)
{
    return (static_cast<std::uint64_t>(a.kind) << 32) | a.value;
}

} // namespace

void Evaluator::build_constraint(ConsEntry& e)
{
    e.built = true;
    e.rows.assign(n_, Bitset());
    if (!e.resolvable) return;

    std::vector<std::optional<Value>> left(n_), right(n_);
    for (ObjectId o = 0; o < n_; ++o) {
        auto v1 = nav_ids(o, e.p1);
        if (v1 && !v1->is_bottom()) left[o] = std::move(v1);
        auto v2 = nav_ids(o, e.p2);
        if (v2 && !v2->is_bottom()) right[o] = std::move(v2);
    }

    auto row_for = [&](ObjectId s) -> Bitset& {
        if (e.rows[s].size() == 0) e.rows[s] = Bitset(n_);
        return e.rows[s];
    };

    switch (e.ast.op) {
    case ConstraintOp::Equal: {
        std::map<std::pair<int, std::vector<Atom>>, Bitset> by_value;
        auto key = [](const Value& v) {
            return v.is_single() ? std::make_pair(0, std::vector<Atom>{v.atom()}) : std::make_pair(1, v.elements());
        };
        for (ObjectId r = 0; r < n_; ++r) {
            if (!right[r]) continue;
            auto [it, _] = by_value.try_emplace(key(*right[r]), n_);
            it->second.set(r);
        }
        for (ObjectId s = 0; s < n_; ++s) {
            if (!left[s]) continue;
            auto it = by_value.find(key(*left[s]));
            if (it != by_value.end()) row_for(s) = it->second;
        }
        break;
    }
    case ConstraintOp::In: {
        std::unordered_map<std::uint64_t, Bitset> holders;
        for (ObjectId r = 0; r < n_; ++r) {
            if (!right[r] || !right[r]->is_set()) continue;
            for (auto a : right[r]->elements()) holders.try_emplace(atom_key(a), n_).first->second.set(r);
        }
        for (ObjectId s = 0; s < n_; ++s) {
            if (!left[s] || !left[s]->is_single()) continue;
            auto it = holders.find(atom_key(left[s]->atom()));
            if (it != holders.end()) row_for(s) = it->second;
        }
        break;
    }
    case ConstraintOp::Contains: {
        std::unordered_map<std::uint64_t, Bitset> by_atom;
        for (ObjectId r = 0; r < n_; ++r) {
            if (!right[r] || !right[r]->is_single()) continue;
            by_atom.try_emplace(atom_key(right[r]->atom()), n_).first->second.set(r);
        }
        for (ObjectId s = 0; s < n_; ++s) {
            if (!left[s] || !left[s]->is_set()) continue;
            for (auto a : left[s]->elements()) {
                auto it = by_atom.find(atom_key(a));
                if (it != by_atom.end()) row_for(s) |= it->second;
            }
        }
        break;
    }
    case ConstraintOp::Supseteq: {
        std::vector<ObjectId> rs;
        for (ObjectId r = 0; r < n_; ++r)
            if (right[r]) rs.push_back(r);
        for (ObjectId s = 0; s < n_; ++s) {
            if (!left[s]) continue;
            for (auto r : rs)
                if (left[s]->includes(*right[r])) row_for(s).set(r);
        }
        break;
    }
    }
}

const Bitset& Evaluator::constraint_row(ConsId id, ObjectId s)
{
    auto& e = constraints_[id];
    if (!e.built) build_constraint(e);
    const auto& row = e.rows[s];
    return row.size() == 0 ? zero_ : row;
}

Bitset Evaluator::characterized(ClassId c, const std::vector<CondId>& cond)
{
    Bitset b = instances_[c];
    for (auto id : cond) {
        b &= condition_meaning(id);
        if (b.none()) break;
    }
    return b;
}

IndexedRule Evaluator::index(const Rule& r)
{
    const auto& cm = class_model();
    IndexedRule out;
    out.subject_type = cm.class_id(r.subject_type);
    out.resource_type = cm.class_id(r.resource_type);
    for (const auto& c : r.subject_condition) out.subject_cond.push_back(intern(c));
    for (const auto& c : r.resource_condition) out.resource_cond.push_back(intern(c));
    for (const auto& c : r.constraint) out.constraint.push_back(intern(c));
    for (const auto& a : r.actions) out.actions.push_back(intern_action(a));
    out.normalize();
    return out;
}

Rule Evaluator::rule(const IndexedRule& r) const
{
    const auto& cm = class_model();
    Rule out;
    out.subject_type = cm.class_name(r.subject_type);
    out.resource_type = cm.class_name(r.resource_type);
    for (auto c : r.subject_cond) out.subject_condition.push_back(conditions_[c].ast);
    for (auto c : r.resource_cond) out.resource_condition.push_back(conditions_[c].ast);
    for (auto c : r.constraint) out.constraint.push_back(constraints_[c].ast);
    for (auto a : r.actions) out.actions.push_back(action_names_[a]);
    canonicalize(out);
    return out;
}

std::string Evaluator::text(const IndexedRule& r) const
{
    return to_string(rule(r));
}

double Evaluator::wsc(const IndexedRule& r, const WscWeights& w) const
{
    double sc = 0, rc = 0, cons = 0;
    for (auto c : r.subject_cond) sc += conditions_[c].wsc;
    for (auto c : r.resource_cond) rc += conditions_[c].wsc;
    for (auto c : r.constraint) cons += constraints_[c].wsc;
    return w.w1 * sc + w.w1 * rc + w.w2 * cons + w.w3 * static_cast<double>(r.actions.size());
}

Coverage Evaluator::compute(const IndexedRule& r)
{
    Coverage cov;
    cov.covered = Bitset(tuples_.size());
    std::vector<ActionId> acts;
    for (auto a : r.actions)
        if (a < act_count_) acts.push_back(a);
    if (acts.empty()) return cov;
    Bitset subjects = characterized(r.subject_type, r.subject_cond);
    if (subjects.none()) return cov;
    Bitset resources = characterized(r.resource_type, r.resource_cond);
    if (resources.none()) return cov;

    Bitset row(n_);
    auto* cw = cov.covered.data();
    subjects.for_each([&](std::size_t s) {
        row = resources;
        for (auto c : r.constraint) {
            row &= constraint_row(c, static_cast<ObjectId>(s));
            if (row.none()) return;
        }
        const auto cnt = row.count();
        if (cnt == 0) return;
        for (auto a : acts) {
            cov.total += cnt;
            auto slot = row_index_[a * n_ + s];
            if (slot < 0) continue;
            const auto& sp = sp0_rows_[static_cast<std::size_t>(slot)];
            std::size_t rank = row_base_[static_cast<std::size_t>(slot)];
            const auto* rw = row.data();
            const auto* sw = sp.data();
            for (std::size_t w = 0; w < row.word_count(); ++w) {
                auto m = rw[w] & sw[w];
                while (m) {
                    const auto b = std::countr_zero(m);
                    const auto idx = rank + static_cast<std::size_t>(std::popcount(sw[w] & ((std::uint64_t{1} << b) - 1)));
                    cw[idx >> 6] |= std::uint64_t{1} << (idx & 63);
                    ++cov.covered_count;
                    m &= m - 1;
                }
                rank += static_cast<std::size_t>(std::popcount(sw[w]));
            }
        }
    });
    return cov;
}

std::shared_ptr<const Coverage> Evaluator::coverage(const IndexedRule& r)
{
    auto it = cache_.find(r);
    if (it != cache_.end()) return it->second;
    auto cov = std::make_shared<const Coverage>(compute(r));
    if (cache_.size() >= cache_limit_) cache_.clear();
    cache_.emplace(r, cov);
    return cov;
}

SubjectPermissionRelation Evaluator::meaning(const IndexedRule& r)
{
    SubjectPermissionRelation out;
    std::vector<ActionId> acts;
    for (auto a : r.actions)
        if (a < act_count_) acts.push_back(a);
    if (acts.empty()) return out;
    Bitset subjects = characterized(r.subject_type, r.subject_cond);
    Bitset resources = characterized(r.resource_type, r.resource_cond);
    Bitset row(n_);
    subjects.for_each([&](std::size_t s) {
        row = resources;
        for (auto c : r.constraint) row &= constraint_row(c, static_cast<ObjectId>(s));
        row.for_each([&](std::size_t res) {
            for (auto a : acts) out.insert(PermissionTuple{static_cast<ObjectId>(s), static_cast<ObjectId>(res), action_names_[a]});
        });
    });
    return out;
}

} // namespace oral
