// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "oral/acl.hpp"
#include "oral/evaluator.hpp"
#include "oral/limits.hpp"
#include "oral/mining.hpp"
#include "oral/rule.hpp"

namespace oral::greedy {

struct GreedyParams {
    PathLimits limits;
    std::size_t mcse = 5;
    std::size_t batch_size = 1000;
    WscWeights weights;
};

/// Mined policy in canonical rule order. ⟦result⟧ = SP0.
std::vector<Rule> mine_greedy(std::shared_ptr<const AclPolicy> acl, const GreedyParams& params = {});

/// The original rules after simplification against their own meaning; the
/// reference policy for similarity measurements.
std::vector<Rule> simplify_policy(std::shared_ptr<const AclPolicy> acl, const std::vector<Rule>& rules, const GreedyParams& params = {});

/// ⟨freq(⟨r,a⟩), freq(s), toString(⟨s,r,a⟩)⟩, larger is better.
struct SeedQuality {
    std::size_t perm_freq = 0;
    std::size_t subj_freq = 0;
    std::string tie_break;

    friend auto operator<=>(const SeedQuality&, const SeedQuality&) = default;
};

/// Seed qualities for every SP0 tuple, indexed like Evaluator::tuples().
std::vector<SeedQuality> seed_qualities(const Evaluator& ev);

/**
 * Building blocks of the greedy miner over one evaluator. Rules are kept
 * valid throughout; every mutating step preserves the meaning of the rule
 * set it is applied to.
 */
class GreedyMiner {
public:
    GreedyMiner(Evaluator& ev, const GreedyParams& params);

    std::vector<IndexedRule> run();

    std::vector<ConsId> candidate_constraint(ObjectId s, ObjectId r);
    IndexedRule generalize(const IndexedRule& rho, std::span<const ConsId> cc, const Bitset& uncov);
    IndexedRule add_candidate_rule(ClassId st, const std::vector<ObjectId>& subjects, ClassId rt, const std::vector<ObjectId>& resources,
        const std::vector<ConsId>& cc, std::vector<ActionId> actions, Bitset& uncov);

    mine::RuleQuality quality(const IndexedRule& r, const Bitset& sp) { return mine::quality(ev_, r, sp, params_.weights); }

    bool merge_rules(std::vector<IndexedRule>& rules);
    bool simplify_rules(std::vector<IndexedRule>& rules);
    void merge_and_simplify(std::vector<IndexedRule>& rules);
    bool merge_rules_inheritance(std::vector<IndexedRule>& rules);
    void remove_redundant(std::vector<IndexedRule>& rules);
    std::vector<IndexedRule> select(std::vector<IndexedRule> rules);

    // Individual simplification steps, exposed for testing.
    bool eliminate_conditions(IndexedRule& r);
    bool eliminate_constraints(IndexedRule& r);
    bool remove_overlapping_actions(std::vector<IndexedRule>& rules);
    bool remove_redundant_actions(std::vector<IndexedRule>& rules);
    bool propagate_constants(IndexedRule& r);
    bool remove_cycles(std::vector<IndexedRule>& rules);

private:
    std::vector<std::size_t> worst_first(const std::vector<IndexedRule>& rules);

    Evaluator& ev_;
    GreedyParams params_;
    mine::PathCatalog paths_;
    Bitset sp0_;
    std::map<std::pair<ClassId, ClassId>, std::vector<ConsId>> cc_cache_;
    std::vector<std::pair<std::size_t, std::size_t>> action_range_;
};

} // namespace oral::greedy
