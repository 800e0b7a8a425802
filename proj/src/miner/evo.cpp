// SPDX-License-Identifier: Apache-2.0
#include "oral/miner_evo.hpp"

#include <algorithm>
#include <set>
#include <variant>

#include "oral/semantics.hpp"

namespace oral::evo {

namespace {

Constant to_constant(const ObjectModel& om, Atom a)
{
    if (a.kind == Atom::Kind::Boolean) return a.value != 0;
    return om.id_of(a.value);
}

std::vector<CondId>& side_cond(IndexedRule& r, Part side) { return side == Part::SubjectCondition ? r.subject_cond : r.resource_cond; }
const std::vector<CondId>& side_cond(const IndexedRule& r, Part side) { return side == Part::SubjectCondition ? r.subject_cond : r.resource_cond; }
ClassId side_type(const IndexedRule& r, Part side) { return side == Part::SubjectCondition ? r.subject_type : r.resource_type; }

const Part kParts[] = {Part::SubjectCondition, Part::ResourceCondition, Part::Constraint};

} // namespace

RuleGrammar::RuleGrammar(Evaluator& ev, const PathLimits& limits)
    : ev_(ev)
    , limits_(limits)
    , paths_(ev.class_model())
{
    std::set<ActionId> acts;
    for (const auto& t : ev.tuples()) acts.insert(t.action);
    actions_.assign(acts.begin(), acts.end());
}

RuleGrammar::Slots& RuleGrammar::slots(ClassId t, Part side)
{
    const auto key = std::make_pair(t, static_cast<int>(side));
    auto it = slots_.find(key);
    if (it != slots_.end()) return it->second;
    const auto& om = ev_.object_model();
    const auto& objs = om.instances(t);
    Slots out;
    auto add = [&](ConditionSlot s) {
        if (s.values.empty()) return;
        out.by_path[s.path] = out.slots.size();
        out.slots.push_back(std::move(s));
    };
    ConditionSlot id{{std::string(kIdField)}, ConditionOp::In, {}};
    for (auto o : objs) id.values.push_back(om.id_of(o));
    const auto max_len = side == Part::SubjectCondition ? limits_.mspl : limits_.mrpl;
    for (const auto& cp : paths_.condition_paths(t, max_len)) {
        std::set<Atom> seen;
        for (auto o : objs) {
            auto v = nav(om, o, cp.path);
            if (v.is_single()) seen.insert(v.atom());
            for (auto a : v.elements()) seen.insert(a);
        }
        ConditionSlot s{cp.path, cp.multiplicity == Multiplicity::Many ? ConditionOp::Contains : ConditionOp::In, {}};
        for (auto a : seen) s.values.push_back(to_constant(om, a));
        add(std::move(s));
    }
    std::sort(id.values.begin(), id.values.end(), constant_less);
    add(std::move(id));
    return slots_.emplace(key, std::move(out)).first->second;
}

const std::vector<ConditionSlot>& RuleGrammar::condition_slots(ClassId t, Part side) { return slots(t, side).slots; }

std::optional<std::size_t> RuleGrammar::slot_of(ClassId t, Part side, const Path& p)
{
    const auto& s = slots(t, side);
    auto it = s.by_path.find(p);
    if (it == s.by_path.end()) return std::nullopt;
    return it->second;
}

const std::vector<ConsId>& RuleGrammar::constraints(ClassId st, ClassId rt)
{
    const auto key = std::make_pair(st, rt);
    auto it = cons_.find(key);
    if (it != cons_.end()) return it->second;
    mine::ConstraintLimits lim{limits_.sped, limits_.rped, limits_.mtpl};
    return cons_.emplace(key, mine::candidate_constraints(ev_, paths_, st, rt, lim)).first->second;
}

std::vector<CondId> RuleGrammar::random_slot(ClassId t, Part side, std::size_t slot, Rng& rng)
{
    const auto& s = condition_slots(t, side)[slot];
    const std::size_t max_k = std::holds_alternative<bool>(s.values.front()) ? 1 : 3;
    const auto k = static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(std::min(max_k, s.values.size()))));
    auto pick = rng.sample(s.values.size(), k);
    std::sort(pick.begin(), pick.end());
    std::vector<CondId> out;
    if (s.op == ConditionOp::In) {
        AtomicCondition c{s.path, ConditionOp::In, {}};
        for (auto i : pick) c.values.push_back(s.values[i]);
        out.push_back(ev_.intern(std::move(c)));
    } else {
        for (auto i : pick) out.push_back(ev_.intern(AtomicCondition{s.path, ConditionOp::Contains, {s.values[i]}}));
    }
    return out;
}

std::vector<CondId> RuleGrammar::random_condition(ClassId t, Part side, Rng& rng)
{
    std::vector<CondId> out;
    const auto n = condition_slots(t, side).size();
    for (std::size_t i = 0; i < n; ++i) {
        if (!rng.bernoulli(0.5)) continue;
        auto c = random_slot(t, side, i, rng);
        out.insert(out.end(), c.begin(), c.end());
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<ConsId> RuleGrammar::random_constraint(ClassId st, ClassId rt, Rng& rng)
{
    std::vector<ConsId> out;
    for (auto c : constraints(st, rt))
        if (rng.bernoulli(0.5)) out.push_back(c);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<CondId> RuleGrammar::slot_conjuncts(const std::vector<CondId>& cond, ClassId t, Part side, std::size_t slot)
{
    const auto& path = condition_slots(t, side)[slot].path;
    std::vector<CondId> out;
    for (auto c : cond)
        if (ev_.condition(c).path == path) out.push_back(c);
    return out;
}

std::vector<Nonterminal> RuleGrammar::nonterminals(const IndexedRule& r, Part part)
{
    std::vector<Nonterminal> out{{part, Nonterminal::Kind::Root, 0}};
    if (part == Part::Constraint) {
        const auto n = constraints(r.subject_type, r.resource_type).size();
        for (std::size_t i = 0; i < n; ++i) out.push_back({part, Nonterminal::Kind::Slot, i});
        return out;
    }
    const auto t = side_type(r, part);
    const auto n = condition_slots(t, part).size();
    for (std::size_t i = 0; i < n; ++i) out.push_back({part, Nonterminal::Kind::Slot, i});
    std::set<std::size_t> present;
    for (auto c : side_cond(r, part))
        if (auto s = slot_of(t, part, ev_.condition(c).path)) present.insert(*s);
    for (auto i : present) out.push_back({part, Nonterminal::Kind::Values, i});
    return out;
}

IndexedRule RuleGrammar::regrow(const IndexedRule& r, const Nonterminal& n, Rng& rng)
{
    IndexedRule out = r;
    if (n.part == Part::Constraint) {
        const auto& cands = constraints(r.subject_type, r.resource_type);
        if (n.kind == Nonterminal::Kind::Root) {
            out.constraint = random_constraint(r.subject_type, r.resource_type, rng);
        } else {
            const auto c = cands[n.index];
            std::erase(out.constraint, c);
            if (rng.bernoulli(0.5)) out.constraint.push_back(c);
        }
        out.normalize();
        return out;
    }
    const auto t = side_type(r, n.part);
    auto& cond = side_cond(out, n.part);
    if (n.kind == Nonterminal::Kind::Root) {
        cond = random_condition(t, n.part, rng);
    } else {
        for (auto c : slot_conjuncts(cond, t, n.part, n.index)) std::erase(cond, c);
        if (n.kind == Nonterminal::Kind::Values || rng.bernoulli(0.5)) {
            auto add = random_slot(t, n.part, n.index, rng);
            cond.insert(cond.end(), add.begin(), add.end());
        }
    }
    out.normalize();
    return out;
}

bool RuleGrammar::occurs(const IndexedRule& r, const Nonterminal& n, const IndexedRule& like)
{
    if (n.part == Part::Constraint) return r.subject_type == like.subject_type && r.resource_type == like.resource_type;
    if (side_type(r, n.part) != side_type(like, n.part)) return false;
    if (n.kind != Nonterminal::Kind::Values) return true;
    return !slot_conjuncts(side_cond(r, n.part), side_type(r, n.part), n.part, n.index).empty();
}

bool RuleGrammar::derivable(const IndexedRule& r)
{
    for (auto side : {Part::SubjectCondition, Part::ResourceCondition}) {
        const auto t = side_type(r, side);
        std::set<std::size_t> in_slots;
        for (auto c : side_cond(r, side)) {
            const auto& ac = ev_.condition(c);
            auto s = slot_of(t, side, ac.path);
            if (!s || condition_slots(t, side)[*s].op != ac.op) return false;
            if (ac.op == ConditionOp::In && !in_slots.insert(*s).second) return false;
        }
    }
    const auto& cands = constraints(r.subject_type, r.resource_type);
    for (auto c : r.constraint)
        if (std::find(cands.begin(), cands.end(), c) == cands.end()) return false;
    if (r.actions.empty()) return false;
    for (auto a : r.actions)
        if (!std::binary_search(actions_.begin(), actions_.end(), a)) return false;
    return true;
}

namespace {

IndexedRule mutate_parts(RuleGrammar& g, const IndexedRule& r, std::size_t count, Rng& rng)
{
    IndexedRule out = r;
    for (auto p : rng.sample(3, count)) {
        auto nts = g.nonterminals(out, kParts[p]);
        out = g.regrow(out, rng.pick(nts), rng);
    }
    return out;
}

} // namespace

IndexedRule single_mutation(RuleGrammar& g, const IndexedRule& r, Rng& rng) { return mutate_parts(g, r, 1, rng); }

IndexedRule double_mutation(RuleGrammar& g, const IndexedRule& r, Rng& rng) { return mutate_parts(g, r, 2, rng); }

IndexedRule simplify_mutation(const IndexedRule& r, Rng& rng)
{
    const auto n = r.subject_cond.size() + r.resource_cond.size() + r.constraint.size();
    if (n == 0) return r;
    IndexedRule out = r;
    auto k = rng.index(n);
    if (k < r.subject_cond.size()) {
        out.subject_cond.erase(out.subject_cond.begin() + static_cast<std::ptrdiff_t>(k));
        return out;
    }
    k -= r.subject_cond.size();
    if (k < r.resource_cond.size()) {
        out.resource_cond.erase(out.resource_cond.begin() + static_cast<std::ptrdiff_t>(k));
        return out;
    }
    k -= r.resource_cond.size();
    out.constraint.erase(out.constraint.begin() + static_cast<std::ptrdiff_t>(k));
    return out;
}

IndexedRule action_mutation(const IndexedRule& r, const std::vector<ActionId>& allowed, ActionId keep, Rng& rng)
{
    std::set<ActionId> choice(allowed.begin(), allowed.end());
    choice.insert(r.actions.begin(), r.actions.end());
    choice.erase(keep);
    if (choice.empty()) return r;
    std::vector<ActionId> v(choice.begin(), choice.end());
    const auto a = rng.pick(v);
    IndexedRule out = r;
    if (std::binary_search(r.actions.begin(), r.actions.end(), a)) {
        std::erase(out.actions, a);
        if (out.actions.empty()) return r;
    } else {
        out.actions.push_back(a);
        out.normalize();
    }
    return out;
}

std::pair<IndexedRule, IndexedRule> crossover(RuleGrammar& g, const IndexedRule& a, const IndexedRule& b, Rng& rng)
{
    const auto part = kParts[rng.index(3)];
    auto nts = g.nonterminals(a, part);
    rng.shuffle(nts);
    std::optional<Nonterminal> chosen;
    for (const auto& n : nts) {
        if (g.occurs(b, n, a)) {
            chosen = n;
            break;
        }
    }
    if (!chosen) return {a, b};
    IndexedRule x = a, y = b;
    if (part == Part::Constraint) {
        if (chosen->kind == Nonterminal::Kind::Root) {
            std::swap(x.constraint, y.constraint);
        } else {
            const auto c = g.constraints(a.subject_type, a.resource_type)[chosen->index];
            const bool in_a = std::binary_search(a.constraint.begin(), a.constraint.end(), c);
            const bool in_b = std::binary_search(b.constraint.begin(), b.constraint.end(), c);
            std::erase(x.constraint, c);
            std::erase(y.constraint, c);
            if (in_b) x.constraint.push_back(c);
            if (in_a) y.constraint.push_back(c);
        }
    } else if (chosen->kind == Nonterminal::Kind::Root) {
        std::swap(side_cond(x, part), side_cond(y, part));
    } else {
        const auto t = side_type(a, part);
        auto ca = g.slot_conjuncts(side_cond(a, part), t, part, chosen->index);
        auto cb = g.slot_conjuncts(side_cond(b, part), t, part, chosen->index);
        auto& xc = side_cond(x, part);
        auto& yc = side_cond(y, part);
        for (auto c : ca) std::erase(xc, c);
        for (auto c : cb) std::erase(yc, c);
        xc.insert(xc.end(), cb.begin(), cb.end());
        yc.insert(yc.end(), ca.begin(), ca.end());
    }
    x.normalize();
    y.normalize();
    return {x, y};
}

int id_count(const Evaluator& ev, const IndexedRule& r)
{
    auto has = [&](const std::vector<CondId>& cond) {
        return std::any_of(cond.begin(), cond.end(), [&](CondId c) { return ev.is_id_condition(c); });
    };
    return (has(r.subject_cond) ? 1 : 0) + (has(r.resource_cond) ? 1 : 0);
}

namespace {

greedy::GreedyParams greedy_params(const EvoParams& p)
{
    greedy::GreedyParams g;
    g.limits = p.limits;
    g.mcse = p.mcse;
    g.weights = p.weights;
    return g;
}

bool better(const EvoMiner::Individual& a, const EvoMiner::Individual& b)
{
    if (a.fitness != b.fitness) return a.fitness < b.fitness;
    return a.text < b.text;
}

} // namespace

EvoMiner::EvoMiner(Evaluator& ev, const EvoParams& params)
    : ev_(ev)
    , params_(params)
    , grammar_(ev, params.limits)
    , greedy_(ev, greedy_params(params))
    , sp0_(ev.all_tuples())
{
    for (const auto& t : ev.tuples()) {
        holders_[{t.resource, t.action}].push_back(t.subject);
        acts_of_[{t.subject, t.resource}].push_back(t.action);
    }
}

Fitness EvoMiner::fitness(const IndexedRule& r, const Bitset& uncov)
{
    auto cov = ev_.coverage(r);
    const auto hit = cov->covered.count_and(uncov);
    return {cov->total - hit, uncov.count() - hit, id_count(ev_, r), ev_.wsc(r, params_.weights)};
}

EvoMiner::Individual EvoMiner::individual(IndexedRule r, const Bitset& uncov)
{
    auto f = fitness(r, uncov);
    auto text = ev_.text(r);
    return {std::move(r), f, std::move(text)};
}

IndexedRule EvoMiner::candidate_rule(std::size_t seed, const Bitset& uncov, bool all_actions)
{
    const auto& om = ev_.object_model();
    const auto [s, r, a] = ev_.tuples()[seed];
    const auto cc = greedy_.candidate_constraint(s, r);
    const auto st = om.class_of(s);
    const auto rt = om.class_of(r);
    Bitset scratch = uncov;
    if (all_actions) return greedy_.add_candidate_rule(st, {s}, rt, {r}, cc, acts_of_[{s, r}], scratch);
    std::vector<ObjectId> ss;
    for (auto s2 : holders_[{r, a}])
        if (om.class_of(s2) == st && (s2 == s || greedy_.candidate_constraint(s2, r) == cc)) ss.push_back(s2);
    return greedy_.add_candidate_rule(st, ss, rt, {r}, cc, {a}, scratch);
}

IndexedRule EvoMiner::random_rule(std::size_t seed, Rng& rng)
{
    const auto& om = ev_.object_model();
    const auto& cm = ev_.class_model();
    const auto [s, r, a] = ev_.tuples()[seed];
    auto pick_type = [&](ClassId t) {
        auto anc = cm.ancestors(t);
        if (anc.empty() || rng.bernoulli(0.8)) return t;
        return rng.pick(anc);
    };
    auto pick_cond = [&](ClassId t, Part side) -> std::vector<CondId> {
        switch (rng.index(3)) {
        case 0: return {};
        case 1: {
            std::vector<std::size_t> single;
            const auto& slots = grammar_.condition_slots(t, side);
            for (std::size_t i = 0; i < slots.size(); ++i)
                if (slots[i].op == ConditionOp::In) single.push_back(i);
            if (single.empty()) return {};
            return grammar_.random_slot(t, side, rng.pick(single), rng);
        }
        default: return grammar_.random_condition(t, side, rng);
        }
    };
    IndexedRule out;
    out.subject_type = pick_type(om.class_of(s));
    out.resource_type = pick_type(om.class_of(r));
    out.subject_cond = pick_cond(out.subject_type, Part::SubjectCondition);
    out.resource_cond = pick_cond(out.resource_type, Part::ResourceCondition);
    out.constraint = grammar_.random_constraint(out.subject_type, out.resource_type, rng);
    out.actions = {a};
    out.normalize();
    return out;
}

std::vector<EvoMiner::Individual> EvoMiner::initial_population(std::size_t seed, const Bitset& uncov, Rng& rng)
{
    std::vector<Individual> pop;
    const auto half = params_.pop_size - params_.pop_size / 2;
    pop.push_back(individual(candidate_rule(seed, uncov, false), uncov));
    if (params_.pop_size > 1) pop.push_back(individual(candidate_rule(seed, uncov, true), uncov));
    auto trim = [&](std::vector<std::uint32_t>& v, std::size_t max_target) {
        const auto target = static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(max_target)));
        while (v.size() > target) v.erase(v.begin() + static_cast<std::ptrdiff_t>(rng.index(v.size())));
    };
    while (pop.size() < half) {
        IndexedRule r = pop[rng.index(pop.size())].rule;
        trim(r.subject_cond, 7);
        trim(r.resource_cond, 7);
        trim(r.constraint, 3);
        pop.push_back(individual(std::move(r), uncov));
    }
    while (pop.size() < params_.pop_size) pop.push_back(individual(random_rule(seed, rng), uncov));
    return pop;
}

std::optional<IndexedRule> EvoMiner::evolve_rule_for_seed(std::size_t seed, const Bitset& uncov, Rng& rng)
{
    const auto [s, r, a] = ev_.tuples()[seed];
    const auto& allowed = acts_of_[{s, r}];
    auto pop = initial_population(seed, uncov, rng);
    std::vector<double> mutation_weights{params_.w_single, params_.w_double, params_.w_action, params_.w_simplify};
    if (params_.classic_operators) mutation_weights = {1, 0, 0, 0};
    auto best_of = [&](const std::vector<std::size_t>& idx) {
        std::size_t b = idx.front();
        for (auto i : idx)
            if (better(pop[i], pop[b])) b = i;
        return b;
    };
    std::multiset<std::string> present;
    for (const auto& ind : pop) present.insert(ind.text);
    auto add = [&](IndexedRule r) {
        auto ind = individual(std::move(r), uncov);
        if (present.count(ind.text)) return;
        present.insert(ind.text);
        pop.push_back(std::move(ind));
    };
    for (std::size_t gen = 0; gen < params_.generations_search; ++gen) {
        auto picked = rng.sample(pop.size(), params_.tournament);
        if (rng.bernoulli(params_.p_mutation)) {
            const auto& parent = pop[best_of(picked)].rule;
            IndexedRule child;
            switch (rng.weighted(mutation_weights)) {
            case 0: child = single_mutation(grammar_, parent, rng); break;
            case 1: child = double_mutation(grammar_, parent, rng); break;
            case 2: child = action_mutation(parent, allowed, a, rng); break;
            default: child = simplify_mutation(parent, rng); break;
            }
            add(std::move(child));
        } else {
            const auto first = best_of(picked);
            std::erase(picked, first);
            if (picked.empty()) continue;
            const auto second = best_of(picked);
            auto [x, y] = crossover(grammar_, pop[first].rule, pop[second].rule, rng);
            add(std::move(x));
            add(std::move(y));
        }
        while (pop.size() > params_.pop_size) {
            std::size_t worst = 0;
            for (std::size_t i = 1; i < pop.size(); ++i)
                if (better(pop[worst], pop[i])) worst = i;
            present.erase(present.find(pop[worst].text));
            pop.erase(pop.begin() + static_cast<std::ptrdiff_t>(worst));
        }
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < pop.size(); ++i)
        if (better(pop[i], pop[best])) best = i;
    const auto& rho = pop[best].rule;
    if (!ev_.valid(rho) || !ev_.coverage(rho)->covered.intersects(uncov)) return std::nullopt;
    return rho;
}

double EvoMiner::policy_wsc(const std::vector<IndexedRule>& rules) const
{
    double w = 0;
    for (const auto& r : rules) w += ev_.wsc(r, params_.weights);
    return w;
}

bool EvoMiner::covers_sp0(const std::vector<IndexedRule>& rules)
{
    Bitset all(ev_.sp0_size());
    for (const auto& r : rules) all |= ev_.coverage(r)->covered;
    return sp0_.is_subset_of(all);
}

IndexedRule EvoMiner::improve_step(const IndexedRule& r, Rng& rng)
{
    if (params_.classic_operators) return single_mutation(grammar_, r, rng);
    const auto op = rng.weighted({params_.p_single, params_.p_double, params_.p_type_single, params_.p_type_double});
    IndexedRule base = r;
    if (op >= 2) {
        const auto& cm = ev_.class_model();
        const bool sp = cm.parent(r.subject_type) != kNoClass;
        const bool rp = cm.parent(r.resource_type) != kNoClass;
        std::vector<int> choices;
        if (sp) choices.push_back(0);
        if (rp) choices.push_back(1);
        if (sp && rp) choices.push_back(2);
        if (!choices.empty()) {
            const auto c = rng.pick(choices);
            if (c != 1) base.subject_type = cm.parent(r.subject_type);
            if (c != 0) base.resource_type = cm.parent(r.resource_type);
        }
    }
    return op % 2 == 0 ? single_mutation(grammar_, base, rng) : double_mutation(grammar_, base, rng);
}

void EvoMiner::improve_policy(std::vector<IndexedRule>& rules, Rng& rng)
{
    trace_.assign(1, policy_wsc(rules));
    for (std::size_t i = 0; i < rules.size(); ++i) {
        bool improved = false;
        for (std::size_t gen = 1; gen <= params_.generations_improve; ++gen) {
            if (gen == params_.generations_improve / 2 && !improved) break;
            const auto& rho = rules[i];
            auto cand = improve_step(rho, rng);
            if (cand == rho || cand.actions.empty()) continue;
            if (!mine::well_formed(ev_, cand) || !ev_.valid(cand) || id_count(ev_, cand) > id_count(ev_, rho)) continue;
            const auto& cc = ev_.coverage(cand)->covered;
            std::vector<IndexedRule> next;
            std::size_t pos = 0;
            for (std::size_t j = 0; j < rules.size(); ++j) {
                if (j == i || ev_.coverage(rules[j])->covered.is_subset_of(cc)) continue;
                if (j < i) ++pos;
                next.push_back(rules[j]);
            }
            next.insert(next.begin() + static_cast<std::ptrdiff_t>(pos), cand);
            const double w = policy_wsc(next);
            if (!(w < trace_.back()) || !covers_sp0(next)) continue;
            rules = std::move(next);
            i = pos;
            trace_.push_back(w);
            improved = true;
        }
    }
}

bool EvoMiner::narrow_types(std::vector<IndexedRule>& rules)
{
    const auto& cm = ev_.class_model();
    bool changed = false;
    for (std::size_t i = 0; i < rules.size(); ++i) {
        for (auto side : {Part::SubjectCondition, Part::ResourceCondition}) {
            bool again = true;
            while (again) {
                again = false;
                const auto t = side_type(rules[i], side);
                for (auto child : cm.children(t)) {
                    IndexedRule cand = rules[i];
                    (side == Part::SubjectCondition ? cand.subject_type : cand.resource_type) = child;
                    if (!mine::well_formed(ev_, cand)) continue;
                    auto next = rules;
                    next[i] = cand;
                    if (!covers_sp0(next)) continue;
                    rules[i] = std::move(cand);
                    changed = again = true;
                    break;
                }
            }
        }
    }
    return changed;
}

void EvoMiner::merge_rules_and_simplify2(std::vector<IndexedRule>& rules)
{
    do greedy_.merge_and_simplify(rules);
    while (narrow_types(rules));
}

std::vector<IndexedRule> EvoMiner::run()
{
    Rng rng(params_.seed);
    auto sq = greedy::seed_qualities(ev_);
    std::vector<std::size_t> seeds(ev_.sp0_size());
    for (std::size_t i = 0; i < seeds.size(); ++i) seeds[i] = i;
    std::sort(seeds.begin(), seeds.end(), [&](std::size_t a, std::size_t b) { return sq[a] > sq[b]; });
    sq.clear();

    // Phase 1.
    std::vector<IndexedRule> rules;
    Bitset uncov = sp0_;
    std::size_t next = 0, failures = 0, iteration = 0;
    while (uncov.any()) {
        while (!uncov.test(seeds[next])) ++next;
        const auto seed = seeds[next];
        auto search_rng = rng.substream("search", iteration++);
        auto rho = evolve_rule_for_seed(seed, uncov, search_rng);
        if (!rho) {
            if (++failures < params_.max_failures) continue;
            rho = candidate_rule(seed, uncov, false);
            ++forced_;
        }
        failures = 0;
        uncov.and_not(ev_.coverage(*rho)->covered);
        rules.push_back(std::move(*rho));
    }

    // Phase 2.
    auto improve_rng = rng.substream("improve");
    improve_policy(rules, improve_rng);
    merge_rules_and_simplify2(rules);
    return rules;
}

std::vector<Rule> mine_evolutionary(std::shared_ptr<const AclPolicy> acl, const EvoParams& params)
{
    Evaluator ev(std::move(acl));
    EvoMiner miner(ev, params);
    std::vector<Rule> out;
    for (const auto& r : miner.run()) out.push_back(ev.rule(r));
    std::sort(out.begin(), out.end(), [](const Rule& a, const Rule& b) { return to_string(a) < to_string(b); });
    return out;
}

} // namespace oral::evo
