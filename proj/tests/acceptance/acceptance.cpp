// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "oral/evaluator.hpp"
#include "oral/metrics.hpp"
#include "oral/miner_evo.hpp"
#include "oral/miner_greedy.hpp"
#include "oral/mining.hpp"
#include "oral/policies.hpp"
#include "oral/semantics.hpp"
#include "../support/random_models.hpp"

using namespace oral;
using gen::PolicyName;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

struct Target {
    PolicyName policy;
    double greedy_wsc, evo_wsc;
    double objects, fields, sp0;
};

constexpr Target kTargets[] = {
    {PolicyName::Emr, 50, 49, 344, 3.5, 708},
    {PolicyName::Healthcare, 54, 54, 737, 3.5, 2207},
    {PolicyName::ProjectManagement, 76, 76, 181, 2.7, 322},
    {PolicyName::University, 54, 54, 731, 2.2, 2439},
};

constexpr int kGreedySeeds = 30;
constexpr int kEvoSeeds = 10;

std::string fmt(const char* f, double a)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string name(PolicyName p) { return std::string(gen::to_string(p)); }

bool within(double v, double target, double tol) { return std::abs(v - target) <= tol * target; }

greedy::GreedyParams greedy_params(PolicyName p)
{
    greedy::GreedyParams g;
    g.limits = gen::mining_limits(p);
    return g;
}

evo::EvoParams evo_params(PolicyName p, std::uint64_t seed)
{
    evo::EvoParams e;
    e.limits = gen::mining_limits(p);
    e.seed = seed;
    return e;
}

bool consistent(const gen::Dataset& d, const std::vector<Rule>& rules)
{
    return policy_meaning(*d.acl->object_model, d.acl->actions, rules) == d.acl->sp0;
}

struct MiningResult {
    double syn = 0, rsem = 0, wsc = 0;
    int consistent = 0, runs = 0;
};

/// Mines one policy over the given seeds at the table size and compares with the simplified original rules.
MiningResult mine_policy(PolicyName p, int seeds, const std::function<std::vector<Rule>(const gen::Dataset&, int)>& mine)
{
    MiningResult r;
    const int n = gen::sample_policy(p).default_n;
    for (int s = 0; s < seeds; ++s) {
        auto d = gen::generate(p, n, static_cast<std::uint64_t>(s));
        auto mined = mine(d, s);
        auto reference = greedy::simplify_policy(d.acl, d.rules, greedy_params(p));
        r.syn += metrics::syn_sim(mined, reference);
        r.rsem += metrics::rsem_sim(d.acl->object_model, d.acl->actions, mined, reference);
        r.wsc += wsc(mined);
        r.consistent += consistent(d, mined) ? 1 : 0;
        ++r.runs;
    }
    r.syn /= seeds;
    r.rsem /= seeds;
    r.wsc /= seeds;
    return r;
}

Outcome semantics_oracle()
{
    Outcome o;
    const auto start = Clock::now();
    Rng rng(7001);
    const std::vector<std::string> acts{"read", "write", "share"};
    int models = 0, rules = 0, mismatches = 0;
    for (; models < 120; ++models) {
        auto cm = testing::random_class_model(rng, 5);
        auto om = testing::random_object_model(rng, cm, 30);
        testing::BruteForce oracle(*om);
        auto acl = std::make_shared<AclPolicy>();
        acl->class_model = cm;
        acl->object_model = om;
        acl->actions = acts;
        Evaluator ev(acl);
        for (int i = 0; i < 10; ++i, ++rules) {
            auto r = testing::random_rule(rng, *cm, *om, acts);
            auto expect = oracle.meaning(acts, r);
            if (rule_meaning(*om, acts, r) != expect || ev.meaning(ev.index(r)) != expect) ++mismatches;
        }
    }
    const double t = seconds_since(start);
    o.require(mismatches == 0, std::to_string(mismatches) + " mismatching rules");
    o.require(t < 10, "took " + fmt("%.1f s", t));
    o.detail = std::to_string(models) + " models, " + std::to_string(rules) + " rules, " + fmt("%.2f s", t) + (o.detail.empty() ? "" : ": " + o.detail);
    return o;
}

struct Runs {
    MiningResult greedy[4], evo[4];
};

Runs run_miners()
{
    Runs runs;
    for (std::size_t i = 0; i < 4; ++i) {
        const auto p = kTargets[i].policy;
        runs.greedy[i] = mine_policy(p, kGreedySeeds, [&](const gen::Dataset& d, int) { return greedy::mine_greedy(d.acl, greedy_params(p)); });
        runs.evo[i] = mine_policy(p, kEvoSeeds, [&](const gen::Dataset& d, int s) {
            return evo::mine_evolutionary(d.acl, evo_params(p, static_cast<std::uint64_t>(s)));
        });
    }
    return runs;
}

Outcome consistency(const Runs& runs)
{
    Outcome o;
    int total = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        for (const auto* r : {&runs.greedy[i], &runs.evo[i]}) {
            total += r->runs;
            o.require(r->consistent == r->runs, name(kTargets[i].policy) + " " + std::to_string(r->runs - r->consistent) + " inconsistent");
        }
    }
    if (o.pass) o.detail = std::to_string(total) + " mined policies, all with meaning SP0";
    return o;
}

Outcome reproduction(const MiningResult (&results)[4], bool evolutionary)
{
    Outcome o;
    std::string rows;
    for (std::size_t i = 0; i < 4; ++i) {
        const auto& r = results[i];
        const auto& t = kTargets[i];
        const double target = evolutionary ? t.evo_wsc : t.greedy_wsc;
        rows += (rows.empty() ? "" : ", ") + name(t.policy) + " " + fmt("%.3f", r.syn) + "/" + fmt("%.3f", r.rsem) + "/" + fmt("%.1f", r.wsc);
        o.require(r.syn >= 0.97, name(t.policy) + " SynSim " + fmt("%.3f", r.syn));
        o.require(r.rsem >= 0.99, name(t.policy) + " RSemSim " + fmt("%.3f", r.rsem));
        o.require(within(r.wsc, target, 0.10), name(t.policy) + " WSC " + fmt("%.1f", r.wsc) + " vs " + fmt("%.0f", target));
    }
    o.detail = std::to_string(evolutionary ? kEvoSeeds : kGreedySeeds) + " seeds, SynSim/RSemSim/WSC: " + rows + (o.detail.empty() ? "" : ": " + o.detail);
    return o;
}

Outcome dataset_stats()
{
    Outcome o;
    std::string rows;
    for (const auto& t : kTargets) {
        const int n = gen::sample_policy(t.policy).default_n;
        double objects = 0, fields = 0, sp0 = 0;
        for (int s = 0; s < 30; ++s) {
            auto d = gen::generate(t.policy, n, static_cast<std::uint64_t>(s));
            auto st = gen::stats(*d.acl, d.rules);
            objects += static_cast<double>(st.objects);
            fields += st.fields_per_object;
            sp0 += static_cast<double>(st.sp0);
        }
        objects /= 30;
        fields /= 30;
        sp0 /= 30;
        rows += (rows.empty() ? "" : ", ") + name(t.policy) + " " + fmt("%.0f", objects) + "/" + fmt("%.2f", fields) + "/" + fmt("%.0f", sp0);
        o.require(within(objects, t.objects, 0.15), name(t.policy) + " #obj");
        o.require(within(fields, t.fields, 0.15), name(t.policy) + " #field/obj");
        o.require(within(sp0, t.sp0, 0.15), name(t.policy) + " |SP0|");
    }
    o.detail = "#obj/#field/|SP0| over 30 seeds: " + rows + (o.detail.empty() ? "" : ": " + o.detail);
    return o;
}

double slope(const std::vector<double>& x, const std::vector<double>& y)
{
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double num = 0, den = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        num += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
        den += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
    }
    return num / den;
}

double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

Outcome scaling()
{
    Outcome o;
    const auto p = PolicyName::Emr;
    std::vector<double> sizes, tg, te;
    for (int n : {6, 12, 24, 48, 96}) {
        std::vector<double> g, e;
        double sp0 = 0;
        for (std::uint64_t s = 0; s < 3; ++s) {
            auto d = gen::generate(p, n, 500 + s);
            sp0 += static_cast<double>(d.acl->sp0.size());
            auto t0 = Clock::now();
            auto gr = greedy::mine_greedy(d.acl, greedy_params(p));
            g.push_back(seconds_since(t0));
            t0 = Clock::now();
            auto er = evo::mine_evolutionary(d.acl, evo_params(p, s));
            e.push_back(seconds_since(t0));
            o.require(consistent(d, gr) && consistent(d, er), "inconsistent at n=" + std::to_string(n));
        }
        sizes.push_back(sp0 / 3);
        tg.push_back(median(g));
        te.push_back(median(e));
    }
    const double span = sizes.back() / sizes.front();
    const double sg = slope(sizes, tg);
    const double se = slope(sizes, te);
    o.require(span >= 8, "|SP0| spans only " + fmt("%.1fx", span));
    o.require(sg <= 2.2, "greedy slope " + fmt("%.2f", sg));
    o.require(se <= 1.5, "evolutionary slope " + fmt("%.2f", se));
    o.detail = "emr, |SP0| " + fmt("%.0f", sizes.front()) + ".." + fmt("%.0f", sizes.back()) + " (" + fmt("%.1fx", span) + "), slopes greedy " +
        fmt("%.2f", sg) + ", evolutionary " + fmt("%.2f", se) + (o.detail.empty() ? "" : ": " + o.detail);
    return o;
}

template <typename T>
bool total_order(const std::vector<T>& values)
{
    for (const auto& a : values) {
        if (a < a) return false;
        for (const auto& b : values) {
            if (int(a < b) + int(b < a) + int(a == b) != 1) return false;
            for (const auto& c : values)
                if (a < b && b < c && !(a < c)) return false;
        }
    }
    return true;
}

SubjectPermissionRelation meaning_of(Evaluator& ev, const std::vector<IndexedRule>& rules)
{
    std::vector<Rule> rs;
    for (const auto& r : rules) rs.push_back(ev.rule(r));
    return policy_meaning(ev.object_model(), ev.acl().actions, rs);
}

Outcome properties()
{
    Outcome o;
    int checks = 0;
    auto expect = [&](bool ok, const std::string& what) {
        ++checks;
        o.require(ok, what);
    };
    Rng rng(4242);
    for (const auto& t : kTargets) {
        const auto p = t.policy;
        const auto pn = name(p);
        auto d = gen::generate(p, p == PolicyName::Emr ? 6 : 2, 11);
        Evaluator ev(d.acl);
        const auto& om = ev.object_model();
        greedy::GreedyMiner gm(ev, greedy_params(p));

        // Phase-1 loop invariant: each added rule is valid and covers its seed.
        Bitset uncov = ev.all_tuples();
        std::vector<IndexedRule> phase1;
        bool invariant = true;
        for (std::size_t seed = 0; seed < ev.sp0_size(); ++seed) {
            if (!uncov.test(seed)) continue;
            const auto [s, r, a] = ev.tuples()[seed];
            auto rule = gm.add_candidate_rule(om.class_of(s), {s}, om.class_of(r), {r}, gm.candidate_constraint(s, r), {a}, uncov);
            invariant = invariant && ev.valid(rule) && ev.coverage(rule)->covered.test(seed) && !uncov.test(seed);
            phase1.push_back(rule);
        }
        expect(invariant, pn + " phase-1 validity");

        // LUB merge meaning contains both operands.
        mine::PathCatalog paths(ev.class_model());
        bool lub_ok = true;
        for (int i = 0; i < 40; ++i) {
            const auto c = om.class_of(ev.tuples()[rng.index(ev.sp0_size())].subject);
            const auto& inst = om.instances(c);
            const auto x = mine::compute_condition(ev, paths, {inst[rng.index(inst.size())]}, c, 3);
            const auto y = mine::compute_condition(ev, paths, {inst[rng.index(inst.size())]}, c, 3);
            const auto l = ev.characterized(c, mine::condition_lub(ev, x, y));
            lub_ok = lub_ok && ev.characterized(c, x).is_subset_of(l) && ev.characterized(c, y).is_subset_of(l);
        }
        expect(lub_ok, pn + " LUB superset");

        // Simplification preserves meaning.
        auto rules = phase1;
        const auto before = meaning_of(ev, rules);
        bool simp_ok = true;
        while (gm.simplify_rules(rules)) simp_ok = simp_ok && meaning_of(ev, rules) == before;
        gm.merge_and_simplify(rules);
        expect(simp_ok && meaning_of(ev, rules) == before, pn + " simplification preserves meaning");

        // Evolutionary phase 2, population and grammar properties.
        auto ep = evo_params(p, 3);
        ep.pop_size = 60;
        evo::EvoMiner em(ev, ep);
        auto fragmented = phase1;
        em.improve_policy(fragmented, rng);
        const auto& trace = em.improvement_trace();
        bool decreasing = !trace.empty();
        for (std::size_t i = 1; i < trace.size(); ++i) decreasing = decreasing && trace[i] < trace[i - 1];
        expect(decreasing && meaning_of(ev, fragmented) == before, pn + " phase-2 WSC strictly decreases");

        bool covering = true, grammar_ok = true;
        std::vector<evo::Fitness> fitnesses;
        std::vector<mine::RuleQuality> qualities;
        for (std::size_t seed = 0; seed < ev.sp0_size(); seed += ev.sp0_size() / 6 + 1) {
            auto pop = em.initial_population(seed, ev.all_tuples(), rng);
            covering = covering && std::any_of(pop.begin(), pop.end(), [&](const auto& ind) {
                return ev.valid(ind.rule) && ev.coverage(ind.rule)->covered.test(seed);
            });
            for (std::size_t k = 0; k < pop.size(); k += 5) {
                auto& g = em.grammar();
                const auto& r = pop[k].rule;
                for (const auto& x : {r, evo::single_mutation(g, r, rng), evo::double_mutation(g, r, rng), evo::crossover(g, r, pop[0].rule, rng).first})
                    grammar_ok = grammar_ok && g.derivable(x) && mine::well_formed(ev, x);
                fitnesses.push_back(pop[k].fitness);
                qualities.push_back(gm.quality(r, ev.all_tuples()));
            }
        }
        expect(covering, pn + " initial population covers its seed");
        expect(grammar_ok, pn + " grammar rules well-formed");
        expect(total_order(fitnesses) && total_order(qualities), pn + " comparators are total orders");
        auto seeds = greedy::seed_qualities(ev);
        seeds.resize(std::min<std::size_t>(seeds.size(), 60));
        expect(total_order(seeds), pn + " seed quality is a total order");
    }
    o.detail = std::to_string(checks) + " property checks" + (o.detail.empty() ? "" : ": " + o.detail);
    return o;
}

Outcome classic_ablation()
{
    Outcome o;
    std::string rows;
    for (const auto& t : kTargets) {
        auto r = mine_policy(t.policy, 3, [&](const gen::Dataset& d, int s) {
            auto e = evo_params(t.policy, static_cast<std::uint64_t>(s));
            e.classic_operators = true;
            return evo::mine_evolutionary(d.acl, e);
        });
        rows += (rows.empty() ? "" : ", ") + name(t.policy) + " " + fmt("%.3f", r.syn) + "/" + fmt("%.3f", r.rsem);
        o.require(r.consistent == r.runs, name(t.policy) + " inconsistent");
    }
    o.detail = "3 seeds, consistent; SynSim/RSemSim " + rows + (o.detail.empty() ? "" : ": " + o.detail);
    return o;
}

} // namespace

int main()
{
    int failed = 0;
    auto report = [&](int id, const char* title, const Outcome& o, double t) {
        std::printf("[%s] %d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), t);
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    };
    auto timed = [](auto&& f) {
        const auto start = Clock::now();
        auto o = f();
        return std::make_pair(o, seconds_since(start));
    };

    auto [c1, t1] = timed(semantics_oracle);
    report(1, "semantics oracle", c1, t1);

    const auto start = Clock::now();
    const auto runs = run_miners();
    const double mining = seconds_since(start);
    report(2, "consistency", consistency(runs), mining);
    report(3, "greedy reproduction", reproduction(runs.greedy, false), 0);
    report(4, "evolutionary reproduction", reproduction(runs.evo, true), 0);

    auto [c5, t5] = timed(dataset_stats);
    report(5, "dataset statistics", c5, t5);
    auto [c6, t6] = timed(scaling);
    report(6, "scaling trend", c6, t6);
    auto [c7, t7] = timed(properties);
    report(7, "property suites", c7, t7);
    auto [c8, t8] = timed(classic_ablation);
    report(8, "classic operators ablation", c8, t8);

    std::printf("%d of 8 criteria failed\n", failed);
    return failed == 0 ? 0 : 1;
}
