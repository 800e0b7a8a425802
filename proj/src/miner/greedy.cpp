// SPDX-License-Identifier: Apache-2.0
#include "oral/miner_greedy.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <unordered_set>

#include "oral/semantics.hpp"

namespace oral::greedy {

using mine::RuleQuality;

namespace {

bool contains_id(const std::vector<std::uint32_t>& v, std::uint32_t x) { return std::binary_search(v.begin(), v.end(), x); }

template <typename T>
std::vector<T> without(const std::vector<T>& v, std::uint32_t mask)
{
    std::vector<T> out;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!(mask >> i & 1U)) out.push_back(v[i]);
    return out;
}

void dedupe(std::vector<IndexedRule>& rules)
{
    std::sort(rules.begin(), rules.end());
    rules.erase(std::unique(rules.begin(), rules.end()), rules.end());
}

// Subject and resource conditions of b are subsets of a's, and b's types are supertypes.
bool subsumes_conditions(const ClassModel& cm, const IndexedRule& b, const IndexedRule& a)
{
    return cm.is_subclass_of(a.subject_type, b.subject_type) && cm.is_subclass_of(a.resource_type, b.resource_type)
        && std::includes(a.subject_cond.begin(), a.subject_cond.end(), b.subject_cond.begin(), b.subject_cond.end())
        && std::includes(a.resource_cond.begin(), a.resource_cond.end(), b.resource_cond.begin(), b.resource_cond.end())
        && std::includes(a.constraint.begin(), a.constraint.end(), b.constraint.begin(), b.constraint.end());
}

} // namespace

std::vector<SeedQuality> seed_qualities(const Evaluator& ev)
{
    const auto& om = ev.object_model();
    std::map<std::pair<ObjectId, ActionId>, std::size_t> perm;
    std::map<ObjectId, std::size_t> subj;
    for (const auto& t : ev.tuples()) {
        ++perm[{t.resource, t.action}];
        ++subj[t.subject];
    }
    std::vector<SeedQuality> out;
    out.reserve(ev.sp0_size());
    for (std::size_t i = 0; i < ev.sp0_size(); ++i) {
        const auto& t = ev.tuples()[i];
        out.push_back({perm[{t.resource, t.action}], subj[t.subject], tuple_text(om, ev.permission_tuple(i))});
    }
    return out;
}

GreedyMiner::GreedyMiner(Evaluator& ev, const GreedyParams& params)
    : ev_(ev)
    , params_(params)
    , paths_(ev.class_model())
    , sp0_(ev.all_tuples())
{
    action_range_.assign(ev.act_count(), {0, 0});
    const auto& ts = ev.tuples();
    for (std::size_t i = 0; i < ts.size(); ++i) {
        auto& [lo, hi] = action_range_[ts[i].action];
        if (hi == 0) lo = i;
        hi = i + 1;
    }
}

std::vector<ConsId> GreedyMiner::candidate_constraint(ObjectId s, ObjectId r)
{
    const auto& om = ev_.object_model();
    const auto key = std::make_pair(om.class_of(s), om.class_of(r));
    auto it = cc_cache_.find(key);
    if (it == cc_cache_.end()) {
        mine::ConstraintLimits lim{params_.limits.sped, params_.limits.rped, params_.limits.mtpl};
        it = cc_cache_.emplace(key, mine::candidate_constraints(ev_, paths_, key.first, key.second, lim)).first;
    }
    std::vector<ConsId> out;
    for (auto c : it->second)
        if (ev_.constraint_holds(c, s, r)) out.push_back(c);
    return out;
}

IndexedRule GreedyMiner::generalize(const IndexedRule& rho, std::span<const ConsId> cc, const Bitset& uncov)
{
    IndexedRule best = rho;
    RuleQuality best_q = quality(rho, uncov);
    struct Result {
        ConsId c;
        IndexedRule rule;
        std::size_t covered;
    };
    std::vector<Result> results;
    for (auto c : cc) {
        if (contains_id(rho.constraint, c)) continue;
        const auto& ac = ev_.constraint(c);
        const bool s_app = mine::path_appears(ev_, rho.subject_cond, ac.subject_path);
        const bool r_app = mine::path_appears(ev_, rho.resource_cond, ac.resource_path);
        auto attempt = [&](bool drop_s, bool drop_r) -> std::optional<IndexedRule> {
            IndexedRule g = rho;
            if (drop_s) g.subject_cond = mine::remove_path(ev_, g.subject_cond, ac.subject_path);
            if (drop_r) g.resource_cond = mine::remove_path(ev_, g.resource_cond, ac.resource_path);
            g.constraint.push_back(c);
            g.normalize();
            if (!ev_.valid(g)) return std::nullopt;
            return g;
        };
        std::optional<IndexedRule> g;
        if (s_app && r_app) g = attempt(true, true);
        if (!g && s_app) g = attempt(true, false);
        if (!g && r_app) g = attempt(false, true);
        if (g) {
            auto n = ev_.coverage(*g)->covered.count_and(uncov);
            results.push_back({c, std::move(*g), n});
        }
    }
    std::stable_sort(results.begin(), results.end(), [](const Result& a, const Result& b) { return a.covered > b.covered; });
    std::vector<ConsId> rest;
    for (const auto& res : results) rest.push_back(res.c);
    for (std::size_t i = 0; i < results.size(); ++i) {
        auto g = generalize(results[i].rule, std::span<const ConsId>(rest).subspan(i + 1), uncov);
        auto q = quality(g, uncov);
        if (q > best_q) {
            best = std::move(g);
            best_q = q;
        }
    }
    return best;
}

IndexedRule GreedyMiner::add_candidate_rule(ClassId st, const std::vector<ObjectId>& subjects, ClassId rt,
    const std::vector<ObjectId>& resources, const std::vector<ConsId>& cc, std::vector<ActionId> actions, Bitset& uncov)
{
    IndexedRule rho;
    rho.subject_type = st;
    rho.subject_cond = mine::compute_condition(ev_, paths_, subjects, st, params_.limits.mspl);
    rho.resource_type = rt;
    rho.resource_cond = mine::compute_condition(ev_, paths_, resources, rt, params_.limits.mrpl);
    rho.actions = std::move(actions);
    rho.normalize();
    auto g = generalize(rho, cc, uncov);
    uncov.and_not(ev_.coverage(g)->covered);
    return g;
}

bool GreedyMiner::merge_rules(std::vector<IndexedRule>& rules)
{
    dedupe(rules);
    using Key = std::tuple<ClassId, ClassId, std::vector<ConsId>>;
    std::vector<IndexedRule> pool = rules;
    std::vector<RuleQuality> q;
    std::vector<bool> alive;
    std::map<IndexedRule, std::size_t> live;
    std::map<Key, std::vector<std::size_t>> groups;
    struct Pair {
        RuleQuality hi, lo;
        std::size_t i, j;
    };
    // Descending pair quality; earlier-created pairs first among equals.
    auto worse = [](const Pair& a, const Pair& b) {
        if (a.hi < b.hi) return true;
        if (b.hi < a.hi) return false;
        if (a.lo < b.lo) return true;
        if (b.lo < a.lo) return false;
        return std::tie(a.i, a.j) > std::tie(b.i, b.j);
    };
    std::priority_queue<Pair, std::vector<Pair>, decltype(worse)> heap(worse);
    auto key_of = [](const IndexedRule& r) { return Key{r.subject_type, r.resource_type, r.constraint}; };
    auto push_pairs = [&](std::size_t k) {
        for (auto o : groups[key_of(pool[k])]) {
            if (o == k || !alive[o]) continue;
            const bool kb = q[o] < q[k];
            heap.push({kb ? q[k] : q[o], kb ? q[o] : q[k], std::min(o, k), std::max(o, k)});
        }
    };
    for (std::size_t i = 0; i < pool.size(); ++i) {
        q.push_back(quality(pool[i], sp0_));
        alive.push_back(true);
        live[pool[i]] = i;
        groups[key_of(pool[i])].push_back(i);
    }
    for (const auto& [key, idx] : groups)
        for (std::size_t a = 0; a < idx.size(); ++a)
            for (std::size_t b = a + 1; b < idx.size(); ++b) {
                const auto i = idx[a], j = idx[b];
                const bool jb = q[i] < q[j];
                heap.push({jb ? q[j] : q[i], jb ? q[i] : q[j], i, j});
            }
    bool merged = false;
    while (!heap.empty()) {
        const auto p = heap.top();
        heap.pop();
        if (!alive[p.i] || !alive[p.j]) continue;
        const auto& a = pool[p.i];
        const auto& b = pool[p.j];
        IndexedRule m = a;
        m.subject_cond = mine::condition_lub(ev_, a.subject_cond, b.subject_cond);
        m.resource_cond = mine::condition_lub(ev_, a.resource_cond, b.resource_cond);
        m.actions.insert(m.actions.end(), b.actions.begin(), b.actions.end());
        m.normalize();
        if (!ev_.valid(m)) continue;
        merged = true;
        alive[p.i] = alive[p.j] = false;
        live.erase(pool[p.i]);
        live.erase(pool[p.j]);
        if (live.count(m)) continue;
        const auto k = pool.size();
        pool.push_back(std::move(m));
        q.push_back(quality(pool[k], sp0_));
        alive.push_back(true);
        live[pool[k]] = k;
        groups[key_of(pool[k])].push_back(k);
        push_pairs(k);
    }
    if (!merged) return false;
    rules.clear();
    for (std::size_t i = 0; i < pool.size(); ++i)
        if (alive[i]) rules.push_back(std::move(pool[i]));
    dedupe(rules);
    return true;
}

bool GreedyMiner::eliminate_conditions(IndexedRule& r)
{
    // Conjuncts are addressed as (side, position) in a combined list.
    std::vector<std::pair<int, CondId>> conj;
    for (auto c : r.subject_cond) conj.push_back({0, c});
    for (auto c : r.resource_cond) conj.push_back({1, c});
    if (conj.empty()) return false;
    auto build = [&](const std::vector<bool>& drop) {
        IndexedRule out = r;
        out.subject_cond.clear();
        out.resource_cond.clear();
        for (std::size_t i = 0; i < conj.size(); ++i) {
            if (drop[i]) continue;
            (conj[i].first == 0 ? out.subject_cond : out.resource_cond).push_back(conj[i].second);
        }
        return out;
    };
    if (conj.size() <= params_.mcse) {
        IndexedRule best = r;
        RuleQuality best_q = quality(r, sp0_);
        const std::uint32_t n = 1U << conj.size();
        for (std::uint32_t mask = 1; mask < n; ++mask) {
            std::vector<bool> drop(conj.size());
            for (std::size_t i = 0; i < conj.size(); ++i) drop[i] = mask >> i & 1U;
            auto cand = build(drop);
            if (!ev_.valid(cand)) continue;
            auto q = quality(cand, sp0_);
            if (q > best_q) {
                best = std::move(cand);
                best_q = q;
            }
        }
        if (best == r) return false;
        r = std::move(best);
        return true;
    }
    // Q_ac = ⟨|val|, |p|, isId(p), toString(p)⟩, descending.
    std::vector<std::size_t> order(conj.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    auto qac = [&](std::size_t i) {
        const auto& c = ev_.condition(conj[i].second);
        return std::make_tuple(c.values.size(), c.path.size(), ev_.is_id_condition(conj[i].second), path_text(c.path));
    };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return qac(a) > qac(b); });
    std::vector<bool> drop(conj.size());
    bool changed = false;
    for (auto i : order) {
        drop[i] = true;
        if (ev_.valid(build(drop))) {
            changed = true;
        } else {
            drop[i] = false;
        }
    }
    if (changed) r = build(drop);
    return changed;
}

bool GreedyMiner::eliminate_constraints(IndexedRule& r)
{
    if (r.constraint.empty()) return false;
    if (r.constraint.size() <= params_.mcse) {
        IndexedRule best = r;
        RuleQuality best_q = quality(r, sp0_);
        const std::uint32_t n = 1U << r.constraint.size();
        for (std::uint32_t mask = 1; mask < n; ++mask) {
            IndexedRule cand = r;
            cand.constraint = without(r.constraint, mask);
            if (!ev_.valid(cand)) continue;
            auto q = quality(cand, sp0_);
            if (q > best_q) {
                best = std::move(cand);
                best_q = q;
            }
        }
        if (best == r) return false;
        r = std::move(best);
        return true;
    }
    bool changed = false;
    for (std::size_t i = r.constraint.size(); i-- > 0;) {
        IndexedRule cand = r;
        cand.constraint.erase(cand.constraint.begin() + static_cast<std::ptrdiff_t>(i));
        if (ev_.valid(cand)) {
            r = std::move(cand);
            changed = true;
        }
    }
    return changed;
}

bool GreedyMiner::remove_overlapping_actions(std::vector<IndexedRule>& rules)
{
    const auto& cm = ev_.class_model();
    bool changed = false;
    for (std::size_t i = 0; i < rules.size(); ++i) {
        for (std::size_t j = 0; j < rules.size(); ++j) {
            if (i == j || !subsumes_conditions(cm, rules[j], rules[i])) continue;
            auto& acts = rules[i].actions;
            for (std::size_t k = acts.size(); k-- > 0 && acts.size() > 1;) {
                if (contains_id(rules[j].actions, acts[k])) {
                    acts.erase(acts.begin() + static_cast<std::ptrdiff_t>(k));
                    changed = true;
                }
            }
        }
    }
    return changed;
}

namespace {

std::vector<std::uint32_t> cover_counts(Evaluator& ev, const std::vector<IndexedRule>& rules)
{
    std::vector<std::uint32_t> count(ev.sp0_size(), 0);
    for (const auto& r : rules) ev.coverage(r)->covered.for_each([&](std::size_t i) { ++count[i]; });
    return count;
}

} // namespace

std::vector<std::size_t> GreedyMiner::worst_first(const std::vector<IndexedRule>& rules)
{
    std::vector<std::pair<RuleQuality, std::string>> key(rules.size());
    for (std::size_t i = 0; i < rules.size(); ++i) key[i] = {quality(rules[i], sp0_), ev_.text(rules[i])};
    std::vector<std::size_t> order(rules.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    // Among equals, the later canonical text goes first.
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (key[a].first < key[b].first) return true;
        if (key[b].first < key[a].first) return false;
        return key[a].second > key[b].second;
    });
    return order;
}

bool GreedyMiner::remove_redundant_actions(std::vector<IndexedRule>& rules)
{
    auto count = cover_counts(ev_, rules);
    bool changed = false;
    std::vector<bool> gone(rules.size());
    for (auto i : worst_first(rules)) {
        auto& r = rules[i];
        auto cov = ev_.coverage(r);
        std::vector<ActionId> acts;
        for (auto a : r.actions) {
            bool redundant = a < action_range_.size();
            if (redundant) {
                const auto [lo, hi] = action_range_[a];
                for (std::size_t t = lo; t < hi && redundant; ++t)
                    if (cov->covered.test(t) && count[t] < 2) redundant = false;
            }
            if (!redundant) {
                acts.push_back(a);
                continue;
            }
            const auto [lo, hi] = action_range_[a];
            for (std::size_t t = lo; t < hi; ++t)
                if (cov->covered.test(t)) --count[t];
            changed = true;
        }
        if (acts.empty()) gone[i] = true;
        r.actions = std::move(acts);
    }
    std::vector<IndexedRule> kept;
    for (std::size_t i = 0; i < rules.size(); ++i)
        if (!gone[i]) kept.push_back(std::move(rules[i]));
    rules = std::move(kept);
    return changed;
}

bool GreedyMiner::propagate_constants(IndexedRule& r)
{
    bool changed = false;
    auto once = [&]() -> bool {
        for (auto cid : r.constraint) {
            const auto ac = ev_.constraint(cid);
            if (ac.op != ConstraintOp::Equal) continue;
            for (int side = 0; side < 2; ++side) {
                const auto& from = side == 0 ? r.subject_cond : r.resource_cond;
                const auto& p = side == 0 ? ac.subject_path : ac.resource_path;
                const auto& q = side == 0 ? ac.resource_path : ac.subject_path;
                for (auto k : from) {
                    const auto& cond = ev_.condition(k);
                    if (cond.op != ConditionOp::In || cond.values.size() != 1) continue;
                    if (cond.path.size() != p.size() + 1 || cond.path.back() != kIdField) continue;
                    if (!std::equal(p.begin(), p.end(), cond.path.begin())) continue;
                    Path np = q;
                    np.push_back(std::string(kIdField));
                    IndexedRule cand = r;
                    auto& to = side == 0 ? cand.resource_cond : cand.subject_cond;
                    to.push_back(ev_.intern(AtomicCondition{np, ConditionOp::In, cond.values}));
                    cand.constraint.erase(std::find(cand.constraint.begin(), cand.constraint.end(), cid));
                    cand.normalize();
                    if (!mine::well_formed(ev_, cand) || !ev_.valid(cand)) continue;
                    if (!ev_.coverage(r)->covered.is_subset_of(ev_.coverage(cand)->covered)) continue;
                    r = std::move(cand);
                    return true;
                }
            }
        }
        return false;
    };
    while (once()) changed = true;
    return changed;
}

namespace {

// Path with its first cycle (a sub-path from some class back to the same class) removed.
std::optional<Path> drop_cycle(const ClassModel& cm, ClassId anchor, const Path& p)
{
    std::vector<ClassId> seen{anchor};
    ClassId cur = anchor;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const auto* f = cm.find_field(cur, p[i]);
        if (!f || !f->type.is_reference()) return std::nullopt;
        cur = f->type.target;
        for (std::size_t k = 0; k < seen.size(); ++k) {
            if (seen[k] != cur) continue;
            Path out(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(k));
            out.insert(out.end(), p.begin() + static_cast<std::ptrdiff_t>(i + 1), p.end());
            return out;
        }
        seen.push_back(cur);
    }
    return std::nullopt;
}

} // namespace

bool GreedyMiner::remove_cycles(std::vector<IndexedRule>& rules)
{
    const auto& cm = ev_.class_model();
    auto count = cover_counts(ev_, rules);
    bool changed = false;
    for (auto& r : rules) {
        std::vector<IndexedRule> cands;
        auto cond_variants = [&](int side) {
            const auto& cond = side == 0 ? r.subject_cond : r.resource_cond;
            const auto anchor = side == 0 ? r.subject_type : r.resource_type;
            for (std::size_t k = 0; k < cond.size(); ++k) {
                auto c = ev_.condition(cond[k]);
                auto np = drop_cycle(cm, anchor, c.path);
                if (!np || np->empty()) continue;
                c.path = std::move(*np);
                IndexedRule cand = r;
                auto& to = side == 0 ? cand.subject_cond : cand.resource_cond;
                to[k] = ev_.intern(std::move(c));
                cand.normalize();
                cands.push_back(std::move(cand));
            }
        };
        cond_variants(0);
        cond_variants(1);
        for (std::size_t k = 0; k < r.constraint.size(); ++k) {
            auto c = ev_.constraint(r.constraint[k]);
            for (int side = 0; side < 2; ++side) {
                auto& p = side == 0 ? c.subject_path : c.resource_path;
                auto np = drop_cycle(cm, side == 0 ? r.subject_type : r.resource_type, p);
                if (!np) continue;
                auto nc = c;
                (side == 0 ? nc.subject_path : nc.resource_path) = std::move(*np);
                IndexedRule cand = r;
                cand.constraint[k] = ev_.intern(nc);
                cand.normalize();
                cands.push_back(std::move(cand));
            }
        }
        for (auto& cand : cands) {
            if (!mine::well_formed(ev_, cand) || !ev_.valid(cand)) continue;
            auto old_cov = ev_.coverage(r);
            auto new_cov = ev_.coverage(cand);
            bool keeps = true;
            old_cov->covered.for_each([&](std::size_t t) {
                if (count[t] == 1 && !new_cov->covered.test(t)) keeps = false;
            });
            if (!keeps) continue;
            old_cov->covered.for_each([&](std::size_t t) { --count[t]; });
            new_cov->covered.for_each([&](std::size_t t) { ++count[t]; });
            r = std::move(cand);
            changed = true;
            break;
        }
    }
    return changed;
}

bool GreedyMiner::simplify_rules(std::vector<IndexedRule>& rules)
{
    bool changed = false;
    for (auto& r : rules) changed |= eliminate_conditions(r);
    for (auto& r : rules) changed |= eliminate_constraints(r);
    dedupe(rules);
    changed |= remove_overlapping_actions(rules);
    changed |= remove_redundant_actions(rules);
    for (auto& r : rules) changed |= propagate_constants(r);
    changed |= remove_cycles(rules);
    dedupe(rules);
    return changed;
}

void GreedyMiner::merge_and_simplify(std::vector<IndexedRule>& rules)
{
    while (true) {
        const bool m = merge_rules(rules);
        const bool s = simplify_rules(rules);
        if (!m && !s) return;
    }
}

bool GreedyMiner::merge_rules_inheritance(std::vector<IndexedRule>& rules)
{
    const auto& cm = ev_.class_model();
    bool changed = false;
    for (int side = 0; side < 2; ++side) {
        auto type_of = [side](IndexedRule& r) -> ClassId& { return side == 0 ? r.subject_type : r.resource_type; };
        std::map<IndexedRule, std::vector<std::size_t>> groups;
        for (std::size_t i = 0; i < rules.size(); ++i) {
            IndexedRule key = rules[i];
            type_of(key) = kNoClass;
            groups[key].push_back(i);
        }
        std::vector<bool> removed(rules.size());
        std::vector<IndexedRule> added;
        for (auto& [key, members] : groups) {
            if (members.size() < 2) continue;
            std::set<std::pair<std::size_t, ClassId>> supers; // (depth, class)
            for (auto i : members)
                for (auto a : cm.ancestors(type_of(rules[i]))) supers.insert({cm.ancestors(a).size(), a});
            for (const auto& [depth, a] : supers) {
                std::vector<std::size_t> under;
                for (auto i : members)
                    if (!removed[i] && cm.is_subclass_of(type_of(rules[i]), a)) under.push_back(i);
                if (under.size() < 2) continue;
                IndexedRule lifted = key;
                type_of(lifted) = a;
                if (!mine::well_formed(ev_, lifted) || !ev_.valid(lifted)) continue;
                for (auto i : under) removed[i] = true;
                added.push_back(std::move(lifted));
                changed = true;
            }
        }
        std::vector<IndexedRule> next;
        for (std::size_t i = 0; i < rules.size(); ++i)
            if (!removed[i]) next.push_back(std::move(rules[i]));
        for (auto& r : added) next.push_back(std::move(r));
        rules = std::move(next);
        dedupe(rules);
    }
    return changed;
}

void GreedyMiner::remove_redundant(std::vector<IndexedRule>& rules)
{
    const auto order = worst_first(rules);
    std::vector<bool> gone(rules.size());
    for (auto i : order) {
        const auto& ci = ev_.coverage(rules[i])->covered;
        for (std::size_t j = 0; j < rules.size(); ++j) {
            if (j == i || gone[j]) continue;
            if (ci.is_subset_of(ev_.coverage(rules[j])->covered)) {
                gone[i] = true;
                break;
            }
        }
    }
    std::vector<IndexedRule> next;
    for (std::size_t i = 0; i < rules.size(); ++i)
        if (!gone[i]) next.push_back(std::move(rules[i]));
    rules = std::move(next);
}

std::vector<IndexedRule> GreedyMiner::select(std::vector<IndexedRule> rules)
{
    std::vector<std::string> text(rules.size());
    for (std::size_t i = 0; i < rules.size(); ++i) text[i] = ev_.text(rules[i]);
    Bitset uncov = sp0_;
    std::vector<bool> used(rules.size());
    std::vector<IndexedRule> out;
    while (uncov.any()) {
        std::optional<std::size_t> best;
        RuleQuality best_q;
        for (std::size_t i = 0; i < rules.size(); ++i) {
            if (used[i]) continue;
            if (!ev_.coverage(rules[i])->covered.intersects(uncov)) {
                used[i] = true;
                continue;
            }
            auto q = quality(rules[i], uncov);
            if (!best || q > best_q || (q == best_q && text[i] < text[*best])) {
                best = i;
                best_q = q;
            }
        }
        if (!best) break;
        used[*best] = true;
        uncov.and_not(ev_.coverage(rules[*best])->covered);
        out.push_back(rules[*best]);
    }
    return out;
}

std::vector<IndexedRule> GreedyMiner::run()
{
    const auto& om = ev_.object_model();
    const auto& ts = ev_.tuples();

    // Phase 1.
    auto sq = seed_qualities(ev_);
    std::vector<std::size_t> seeds(ts.size());
    for (std::size_t i = 0; i < seeds.size(); ++i) seeds[i] = i;
    std::sort(seeds.begin(), seeds.end(), [&](std::size_t a, std::size_t b) { return sq[a] > sq[b]; });
    sq.clear();

    // SP0 tuple indices per (resource, action) and per (subject, resource).
    std::map<std::pair<ObjectId, ActionId>, std::vector<ObjectId>> holders;
    std::map<std::pair<ObjectId, ObjectId>, std::vector<ActionId>> acts_of;
    for (const auto& t : ts) {
        holders[{t.resource, t.action}].push_back(t.subject);
        acts_of[{t.subject, t.resource}].push_back(t.action);
    }

    Bitset uncov = sp0_;
    std::vector<IndexedRule> rules, batch;
    std::size_t in_batch = 0;
    for (auto seed : seeds) {
        if (!uncov.test(seed)) continue;
        const auto [s, r, a] = ts[seed];
        const auto cc = candidate_constraint(s, r);
        const auto st = om.class_of(s);
        const auto rt = om.class_of(r);
        std::vector<ObjectId> ss;
        for (auto s2 : holders[{r, a}])
            if (om.class_of(s2) == st && (s2 == s || candidate_constraint(s2, r) == cc)) ss.push_back(s2);
        batch.push_back(add_candidate_rule(st, ss, rt, {r}, cc, {a}, uncov));
        batch.push_back(add_candidate_rule(st, {s}, rt, {r}, cc, acts_of[{s, r}], uncov));
        if (++in_batch == params_.batch_size) {
            merge_rules(batch);
            rules.insert(rules.end(), batch.begin(), batch.end());
            batch.clear();
            in_batch = 0;
        }
    }
    merge_rules(batch);
    rules.insert(rules.end(), batch.begin(), batch.end());
    dedupe(rules);

    // Phase 2.
    merge_and_simplify(rules);
    merge_rules_inheritance(rules);
    merge_and_simplify(rules);
    remove_redundant(rules);

    // Phase 3.
    return select(std::move(rules));
}

std::vector<Rule> mine_greedy(std::shared_ptr<const AclPolicy> acl, const GreedyParams& params)
{
    Evaluator ev(std::move(acl));
    GreedyMiner miner(ev, params);
    std::vector<Rule> out;
    for (const auto& r : miner.run()) out.push_back(ev.rule(r));
    std::sort(out.begin(), out.end(), [](const Rule& a, const Rule& b) { return to_string(a) < to_string(b); });
    return out;
}

std::vector<Rule> simplify_policy(std::shared_ptr<const AclPolicy> acl, const std::vector<Rule>& rules, const GreedyParams& params)
{
    Evaluator ev(std::move(acl));
    GreedyMiner miner(ev, params);
    std::vector<IndexedRule> ir;
    for (const auto& r : rules) ir.push_back(ev.index(r));
    while (miner.simplify_rules(ir)) { }
    std::vector<Rule> out;
    for (const auto& r : ir) out.push_back(ev.rule(r));
    std::sort(out.begin(), out.end(), [](const Rule& a, const Rule& b) { return to_string(a) < to_string(b); });
    return out;
}

} // namespace oral::greedy
