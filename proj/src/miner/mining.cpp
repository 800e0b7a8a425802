// SPDX-License-Identifier: Apache-2.0
#include "oral/mining.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "oral/semantics.hpp"

namespace oral::mine {

bool operator<(const RuleQuality& a, const RuleQuality& b)
{
    const double x = a.coverage * b.wsc;
    const double y = b.coverage * a.wsc;
    if (x != y) return x < y;
    if (a.constraints != b.constraints) return a.constraints < b.constraints;
    // 1/TCPL with TCPL = 0 on top.
    if (a.tcpl == b.tcpl) return false;
    if (a.tcpl == 0) return false;
    if (b.tcpl == 0) return true;
    return a.tcpl > b.tcpl;
}

std::size_t tcpl(const Evaluator& ev, const IndexedRule& r)
{
    std::size_t n = 0;
    for (auto c : r.constraint) n += ev.constraint(c).subject_path.size() + ev.constraint(c).resource_path.size();
    return n;
}

RuleQuality quality(Evaluator& ev, const IndexedRule& r, const Bitset& sp, const WscWeights& w)
{
    RuleQuality q;
    q.coverage = static_cast<double>(ev.coverage(r)->covered.count_and(sp));
    q.wsc = std::max(ev.wsc(r, w), 1e-9);
    q.constraints = r.constraint.size();
    q.tcpl = tcpl(ev, r);
    return q;
}

const std::vector<ConditionPath>& PathCatalog::condition_paths(ClassId c, std::size_t max_len)
{
    auto key = std::make_pair(c, max_len);
    auto it = cond_.find(key);
    if (it != cond_.end()) return it->second;
    std::vector<ConditionPath> out;
    Path p;
    auto walk = [&](auto&& self, ClassId cur, Multiplicity mul) -> void {
        if (p.size() >= max_len) return;
        for (const auto& f : cm_.fields(cur)) {
            if (f.name == kIdField) continue;
            const auto m = p.empty() ? f.multiplicity : combine(mul, f.multiplicity);
            p.push_back(f.name);
            if (f.type.base == BaseType::Boolean) {
                out.push_back({p, m});
            } else if (f.type.is_reference()) {
                if (p.size() < max_len) {
                    p.push_back(std::string(kIdField));
                    out.push_back({p, m});
                    p.pop_back();
                }
                self(self, f.type.target, m);
            }
            p.pop_back();
        }
    };
    walk(walk, c, Multiplicity::One);
    return cond_.emplace(key, std::move(out)).first->second;
}

const std::vector<NavPath>& PathCatalog::nav_paths(ClassId c, std::size_t cap)
{
    auto key = std::make_pair(c, cap);
    auto it = nav_.find(key);
    if (it != nav_.end()) return it->second;
    std::vector<NavPath> out;
    out.push_back({{}, c, Multiplicity::One});
    Path p;
    std::set<std::pair<ClassId, std::string>> used;
    auto walk = [&](auto&& self, ClassId cur, Multiplicity mul) -> void {
        if (p.size() >= cap) return;
        for (const auto& f : cm_.fields(cur)) {
            if (!f.type.is_reference()) continue;
            auto edge = std::make_pair(f.declared_in, f.name);
            if (used.count(edge)) continue;
            used.insert(edge);
            const auto m = p.empty() ? f.multiplicity : combine(mul, f.multiplicity);
            p.push_back(f.name);
            out.push_back({p, f.type.target, m});
            self(self, f.type.target, m);
            p.pop_back();
            used.erase(edge);
        }
    };
    walk(walk, c, Multiplicity::One);
    return nav_.emplace(key, std::move(out)).first->second;
}

std::vector<ClassId> PathCatalog::reach(ClassId c, std::size_t cap)
{
    std::set<ClassId> out;
    for (const auto& np : nav_paths(c, cap)) {
        out.insert(np.end);
        for (auto a : cm_.ancestors(np.end)) out.insert(a);
    }
    return {out.begin(), out.end()};
}

std::vector<NavPath> PathCatalog::paths(ClassId c, ClassId t, std::size_t extra, std::size_t cap)
{
    std::vector<NavPath> typed;
    std::size_t shortest = std::numeric_limits<std::size_t>::max();
    for (const auto& np : nav_paths(c, cap)) {
        if (!cm_.is_subclass_of(np.end, t)) continue;
        typed.push_back(np);
        shortest = std::min(shortest, np.path.size());
    }
    std::vector<NavPath> out;
    for (auto& np : typed)
        if (np.path.size() <= shortest + extra) out.push_back(std::move(np));
    return out;
}

std::vector<ConsId> candidate_constraints(Evaluator& ev, PathCatalog& paths, ClassId st, ClassId rt, const ConstraintLimits& lim)
{
    const auto& cm = ev.class_model();
    std::set<std::string> seen;
    std::vector<std::pair<std::string, ConsId>> out;
    auto rs = paths.reach(st, lim.mtpl);
    auto rr = paths.reach(rt, lim.mtpl);
    std::vector<ClassId> common;
    std::set_intersection(rs.begin(), rs.end(), rr.begin(), rr.end(), std::back_inserter(common));
    for (auto t : common) {
        auto p1s = paths.paths(st, t, lim.sped, lim.mtpl);
        auto p2s = paths.paths(rt, t, lim.rped, lim.mtpl);
        for (const auto& p1 : p1s) {
            for (const auto& p2 : p2s) {
                if (p1.path.size() + p2.path.size() > lim.mtpl) continue;
                if (!cm.is_subclass_of(p1.end, p2.end) && !cm.is_subclass_of(p2.end, p1.end)) continue;
                AtomicConstraint c{p1.path, op_from_mul(p1.multiplicity, p2.multiplicity), p2.path};
                auto key = to_string(c);
                if (!seen.insert(key).second) continue;
                out.emplace_back(key, ev.intern(c));
            }
        }
    }
    std::sort(out.begin(), out.end());
    std::vector<ConsId> ids;
    for (const auto& [k, id] : out) ids.push_back(id);
    return ids;
}

namespace {

Constant to_constant(const ObjectModel& om, Atom a)
{
    if (a.kind == Atom::Kind::Boolean) return a.value != 0;
    return om.id_of(a.value);
}

} // namespace

std::vector<CondId> compute_condition(Evaluator& ev, PathCatalog& paths, const std::vector<ObjectId>& objs, ClassId c, std::size_t max_len)
{
    const auto& om = ev.object_model();
    std::vector<CondId> out;
    for (const auto& cp : paths.condition_paths(c, max_len)) {
        bool bottom = false;
        std::set<Atom> in_vals;
        std::optional<std::vector<Atom>> common;
        for (auto o : objs) {
            auto v = nav(om, o, cp.path);
            if (v.is_bottom()) {
                bottom = true;
                break;
            }
            if (cp.multiplicity != Multiplicity::Many) {
                in_vals.insert(v.atom());
            } else if (!common) {
                common = v.elements();
            } else {
                std::vector<Atom> next;
                std::set_intersection(common->begin(), common->end(), v.elements().begin(), v.elements().end(), std::back_inserter(next));
                *common = std::move(next);
            }
        }
        if (bottom) continue;
        if (cp.multiplicity != Multiplicity::Many) {
            AtomicCondition ac{cp.path, ConditionOp::In, {}};
            for (auto a : in_vals) ac.values.push_back(to_constant(om, a));
            out.push_back(ev.intern(std::move(ac)));
        } else if (common) {
            for (auto a : *common) out.push_back(ev.intern(AtomicCondition{cp.path, ConditionOp::Contains, {to_constant(om, a)}}));
        }
    }
    Bitset want(ev.object_count());
    for (auto o : objs) want.set(o);
    if (!(ev.characterized(c, out) == want)) {
        AtomicCondition ac{{std::string(kIdField)}, ConditionOp::In, {}};
        for (auto o : objs) ac.values.push_back(om.id_of(o));
        out.push_back(ev.intern(std::move(ac)));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

bool on_path(const Path& cond, const Path& p)
{
    if (cond == p) return true;
    return cond.size() == p.size() + 1 && cond.back() == kIdField && std::equal(p.begin(), p.end(), cond.begin());
}

} // namespace

std::vector<CondId> remove_path(const Evaluator& ev, const std::vector<CondId>& cond, const Path& p)
{
    std::vector<CondId> out;
    for (auto c : cond)
        if (!on_path(ev.condition(c).path, p)) out.push_back(c);
    return out;
}

bool path_appears(const Evaluator& ev, const std::vector<CondId>& cond, const Path& p)
{
    for (auto c : cond)
        if (on_path(ev.condition(c).path, p)) return true;
    return false;
}

std::vector<CondId> condition_lub(Evaluator& ev, const std::vector<CondId>& a, const std::vector<CondId>& b)
{
    std::vector<CondId> out;
    for (auto x : a) {
        const auto& cx = ev.condition(x);
        for (auto y : b) {
            const auto& cy = ev.condition(y);
            if (cx.path != cy.path || cx.op != cy.op) continue;
            if (cx.op == ConditionOp::Contains) {
                if (x == y) out.push_back(x);
                continue;
            }
            AtomicCondition u{cx.path, ConditionOp::In, cx.values};
            u.values.insert(u.values.end(), cy.values.begin(), cy.values.end());
            out.push_back(ev.intern(std::move(u)));
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool well_formed(const Evaluator& ev, const IndexedRule& r)
{
    return oral::well_formed(ev.class_model(), ev.rule(r));
}

} // namespace oral::mine
