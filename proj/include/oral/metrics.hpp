// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <iterator>
#include <memory>
#include <set>
#include <vector>

#include "oral/acl.hpp"
#include "oral/rule.hpp"
#include "oral/semantics.hpp"

namespace oral::metrics {

/// |a ∩ b| / |a ∪ b|, with J(∅, ∅) = 1.
template <typename T>
double jaccard(const std::set<T>& a, const std::set<T>& b)
{
    if (a.empty() && b.empty()) return 1.0;
    std::size_t common = 0;
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j) {
            ++i;
        } else if (*j < *i) {
            ++j;
        } else {
            ++common;
            ++i;
            ++j;
        }
    }
    return static_cast<double>(common) / static_cast<double>(a.size() + b.size() - common);
}

/// Component Jaccards: subject type, subject condition, resource type,
/// resource condition, constraint, actions.
struct ComponentSimilarity {
    double subject_type = 0;
    double subject_condition = 0;
    double resource_type = 0;
    double resource_condition = 0;
    double constraint = 0;
    double actions = 0;

    [[nodiscard]] double mean() const
    {
        return (subject_type + subject_condition + resource_type + resource_condition + constraint + actions) / 6.0;
    }
};

ComponentSimilarity syn_components(const Rule& a, const Rule& b);
inline double syn_sim(const Rule& a, const Rule& b) { return syn_components(a, b).mean(); }

struct RuleMatch {
    std::size_t mined = 0;
    std::size_t syn_match = 0; // index into the reference rules
    ComponentSimilarity syn;
    std::size_t sem_match = 0;
    double sem = 0;
};

struct SimilarityReport {
    double syn_sim = 0;
    double rsem_sim = 0;
    std::vector<RuleMatch> per_rule;
    double wsc_mined = 0;
    double wsc_reference = 0;
};

/// Mean over mined rules of the best syntactic match in reference. An
/// empty mined policy scores 1 against an empty reference and 0 otherwise.
double syn_sim(const std::vector<Rule>& mined, const std::vector<Rule>& reference);

/// Same extension for J(⟦ρ1⟧, ⟦ρ2⟧) over the given object model.
double rsem_sim(std::shared_ptr<const ObjectModel> om, const std::vector<std::string>& actions, const std::vector<Rule>& mined, const std::vector<Rule>& reference);

/// Full report; best-match ties go to the earliest reference rule.
SimilarityReport compare(const AclPolicy& acl, const std::vector<Rule>& mined, const std::vector<Rule>& reference, const WscWeights& w = {});

} // namespace oral::metrics
