// SPDX-License-Identifier: Apache-2.0
#include "oral/metrics.hpp"

#include <memory>

#include "oral/evaluator.hpp"

namespace oral::metrics {

namespace {

std::set<std::string> condition_set(const Condition& c)
{
    std::set<std::string> out;
    for (auto a : c) {
        canonicalize(a);
        out.insert(to_string(a, ""));
    }
    return out;
}

std::set<std::string> constraint_set(const Constraint& c)
{
    std::set<std::string> out;
    for (const auto& a : c) out.insert(to_string(a));
    return out;
}

template <typename Sim>
void best_matches(std::size_t mined, std::size_t reference, Sim sim, std::vector<std::size_t>& match, std::vector<double>& score)
{
    match.assign(mined, 0);
    score.assign(mined, 0.0);
    for (std::size_t i = 0; i < mined; ++i) {
        for (std::size_t j = 0; j < reference; ++j) {
            const double s = sim(i, j);
            if (j == 0 || s > score[i]) {
                score[i] = s;
                match[i] = j;
            }
        }
    }
}

double mean_or_empty(const std::vector<double>& v, bool reference_empty)
{
    if (v.empty()) return reference_empty ? 1.0 : 0.0;
    if (reference_empty) return 0.0;
    double s = 0;
    for (auto x : v) s += x;
    return s / static_cast<double>(v.size());
}

std::vector<SubjectPermissionRelation> meanings(Evaluator& ev, const std::vector<Rule>& rules)
{
    std::vector<SubjectPermissionRelation> out;
    for (const auto& r : rules) out.push_back(ev.meaning(ev.index(r)));
    return out;
}

} // namespace

ComponentSimilarity syn_components(const Rule& a, const Rule& b)
{
    ComponentSimilarity c;
    c.subject_type = a.subject_type == b.subject_type ? 1.0 : 0.0;
    c.subject_condition = jaccard(condition_set(a.subject_condition), condition_set(b.subject_condition));
    c.resource_type = a.resource_type == b.resource_type ? 1.0 : 0.0;
    c.resource_condition = jaccard(condition_set(a.resource_condition), condition_set(b.resource_condition));
    c.constraint = jaccard(constraint_set(a.constraint), constraint_set(b.constraint));
    c.actions = jaccard(std::set<std::string>(a.actions.begin(), a.actions.end()), std::set<std::string>(b.actions.begin(), b.actions.end()));
    return c;
}

double syn_sim(const std::vector<Rule>& mined, const std::vector<Rule>& reference)
{
    std::vector<std::size_t> match;
    std::vector<double> score;
    best_matches(mined.size(), reference.size(), [&](std::size_t i, std::size_t j) { return syn_sim(mined[i], reference[j]); }, match, score);
    return mean_or_empty(score, reference.empty());
}

double rsem_sim(std::shared_ptr<const ObjectModel> om, const std::vector<std::string>& actions, const std::vector<Rule>& mined, const std::vector<Rule>& reference)
{
    auto acl = std::make_shared<AclPolicy>();
    acl->class_model = om->class_model_ptr();
    acl->object_model = std::move(om);
    acl->actions = actions;
    Evaluator ev(acl);
    const auto m = meanings(ev, mined);
    const auto r = meanings(ev, reference);
    std::vector<std::size_t> match;
    std::vector<double> score;
    best_matches(mined.size(), reference.size(), [&](std::size_t i, std::size_t j) { return jaccard(m[i], r[j]); }, match, score);
    return mean_or_empty(score, reference.empty());
}

SimilarityReport compare(const AclPolicy& acl, const std::vector<Rule>& mined, const std::vector<Rule>& reference, const WscWeights& w)
{
    SimilarityReport rep;
    auto shared = std::make_shared<AclPolicy>();
    shared->class_model = acl.class_model;
    shared->object_model = acl.object_model;
    shared->actions = acl.actions;
    Evaluator ev(shared);
    const auto m = meanings(ev, mined);
    const auto r = meanings(ev, reference);

    std::vector<std::size_t> syn_match, sem_match;
    std::vector<double> syn_score, sem_score;
    best_matches(mined.size(), reference.size(), [&](std::size_t i, std::size_t j) { return syn_sim(mined[i], reference[j]); }, syn_match, syn_score);
    best_matches(mined.size(), reference.size(), [&](std::size_t i, std::size_t j) { return jaccard(m[i], r[j]); }, sem_match, sem_score);
    for (std::size_t i = 0; i < mined.size(); ++i) {
        RuleMatch rm;
        rm.mined = i;
        if (!reference.empty()) {
            rm.syn_match = syn_match[i];
            rm.syn = syn_components(mined[i], reference[syn_match[i]]);
            rm.sem_match = sem_match[i];
            rm.sem = sem_score[i];
        }
        rep.per_rule.push_back(rm);
    }
    rep.syn_sim = mean_or_empty(syn_score, reference.empty());
    rep.rsem_sim = mean_or_empty(sem_score, reference.empty());
    rep.wsc_mined = wsc(mined, w);
    rep.wsc_reference = wsc(reference, w);
    return rep;
}

} // namespace oral::metrics
