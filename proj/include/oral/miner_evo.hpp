// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "oral/acl.hpp"
#include "oral/evaluator.hpp"
#include "oral/limits.hpp"
#include "oral/miner_greedy.hpp"
#include "oral/mining.hpp"
#include "oral/rng.hpp"
#include "oral/rule.hpp"

namespace oral::evo {

struct EvoParams {
    PathLimits limits;
    std::size_t mcse = 5;
    std::size_t pop_size = 200;
    std::size_t generations_search = 2000;
    std::size_t tournament = 15;
    std::size_t generations_improve = 1000;

    // Search phase: mutation vs crossover, then weights among mutations.
    double p_mutation = 0.9;
    double w_single = 1.0;
    double w_action = 1.0;
    double w_simplify = 1.0;
    double w_double = 0.7;

    // Improvement phase.
    double p_single = 0.09;
    double p_double = 0.81;
    double p_type_single = 0.01;
    double p_type_double = 0.09;

    /// Only single mutation and crossover.
    bool classic_operators = false;
    /// Consecutive failed searches on one seed before its first candidate rule is accepted as is.
    std::size_t max_failures = 10;
    std::uint64_t seed = 0;
    WscWeights weights;
};

/// ⟨FAR, FRR, ID, WSC⟩, smaller is better.
struct Fitness {
    std::size_t far = 0;
    std::size_t frr = 0;
    int id = 0;
    double wsc = 0;

    friend auto operator<=>(const Fitness&, const Fitness&) = default;
};

enum class Part : std::uint8_t { SubjectCondition, ResourceCondition, Constraint };

/// Optional atomic condition of a grammar: `path in V` for single-valued
/// paths, a conjunction of `path contains v` for many-valued ones.
struct ConditionSlot {
    Path path;
    ConditionOp op = ConditionOp::In;
    std::vector<Constant> values; // observed among the instances
};

/// Occurrence of a nonterminal in one part of a derivation tree.
struct Nonterminal {
    enum class Kind : std::uint8_t { Root, Slot, Values };
    Part part = Part::SubjectCondition;
    Kind kind = Kind::Root;
    std::size_t index = 0;

    friend bool operator==(const Nonterminal&, const Nonterminal&) = default;
};

/**
 * Grammar specialized to one ACL policy. A rule of the language is an
 * IndexedRule whose conjuncts are drawn from the slots of its types: each
 * slot is either absent or holds one atomic condition (one or more
 * `contains` conjuncts for many-valued paths), and each candidate atomic
 * constraint is either absent or present.
 */
class RuleGrammar {
public:
    RuleGrammar(Evaluator& ev, const PathLimits& limits);

    const std::vector<ConditionSlot>& condition_slots(ClassId t, Part side);
    std::optional<std::size_t> slot_of(ClassId t, Part side, const Path& p);
    const std::vector<ConsId>& constraints(ClassId st, ClassId rt);
    [[nodiscard]] const std::vector<ActionId>& actions() const { return actions_; }

    /// Conjuncts of one slot, drawn with 1..3 values (one for Boolean paths).
    std::vector<CondId> random_slot(ClassId t, Part side, std::size_t slot, Rng& rng);
    std::vector<CondId> random_condition(ClassId t, Part side, Rng& rng);
    std::vector<ConsId> random_constraint(ClassId st, ClassId rt, Rng& rng);

    /// Conjuncts of cond that belong to the given slot.
    std::vector<CondId> slot_conjuncts(const std::vector<CondId>& cond, ClassId t, Part side, std::size_t slot);

    std::vector<Nonterminal> nonterminals(const IndexedRule& r, Part part);
    IndexedRule regrow(const IndexedRule& r, const Nonterminal& n, Rng& rng);
    [[nodiscard]] bool occurs(const IndexedRule& r, const Nonterminal& n, const IndexedRule& like);

    /// Derivable by the grammar: every conjunct lies in a slot of its side's
    /// type, each In slot is used at most once and the actions occur in SP0.
    bool derivable(const IndexedRule& r);

    [[nodiscard]] Evaluator& evaluator() const { return ev_; }

private:
    struct Slots {
        std::vector<ConditionSlot> slots;
        std::map<Path, std::size_t> by_path;
    };
    Slots& slots(ClassId t, Part side);

    Evaluator& ev_;
    PathLimits limits_;
    mine::PathCatalog paths_;
    std::map<std::pair<ClassId, int>, Slots> slots_;
    std::map<std::pair<ClassId, ClassId>, std::vector<ConsId>> cons_;
    std::vector<ActionId> actions_;
};

IndexedRule single_mutation(RuleGrammar& g, const IndexedRule& r, Rng& rng);
IndexedRule double_mutation(RuleGrammar& g, const IndexedRule& r, Rng& rng);
/// Removes one atomic condition or atomic constraint.
IndexedRule simplify_mutation(const IndexedRule& r, Rng& rng);
/// Toggles one action of `allowed` other than `keep`.
IndexedRule action_mutation(const IndexedRule& r, const std::vector<ActionId>& allowed, ActionId keep, Rng& rng);
std::pair<IndexedRule, IndexedRule> crossover(RuleGrammar& g, const IndexedRule& a, const IndexedRule& b, Rng& rng);

/// 2 if both conditions constrain `id`, 1 if one does, else 0.
int id_count(const Evaluator& ev, const IndexedRule& r);

class EvoMiner {
public:
    struct Individual {
        IndexedRule rule;
        Fitness fitness;
        std::string text;
    };

    EvoMiner(Evaluator& ev, const EvoParams& params);

    std::vector<IndexedRule> run();

    Fitness fitness(const IndexedRule& r, const Bitset& uncov);
    Individual individual(IndexedRule r, const Bitset& uncov);

    /// First element: the candidate rule built from the seed's permission holders.
    std::vector<Individual> initial_population(std::size_t seed, const Bitset& uncov, Rng& rng);
    /// Random rule for the seed's action with the seed's types or their ancestors.
    IndexedRule random_rule(std::size_t seed, Rng& rng);
    std::optional<IndexedRule> evolve_rule_for_seed(std::size_t seed, const Bitset& uncov, Rng& rng);
    void improve_policy(std::vector<IndexedRule>& rules, Rng& rng);
    void merge_rules_and_simplify2(std::vector<IndexedRule>& rules);
    /// Replaces types by children while the policy still covers SP0.
    bool narrow_types(std::vector<IndexedRule>& rules);

    /// Policy WSC before phase 2 and after each accepted replacement.
    [[nodiscard]] const std::vector<double>& improvement_trace() const { return trace_; }
    [[nodiscard]] std::size_t forced_acceptances() const { return forced_; }

    RuleGrammar& grammar() { return grammar_; }
    greedy::GreedyMiner& greedy() { return greedy_; }

private:
    double policy_wsc(const std::vector<IndexedRule>& rules) const;
    bool covers_sp0(const std::vector<IndexedRule>& rules);
    IndexedRule candidate_rule(std::size_t seed, const Bitset& uncov, bool all_actions);
    IndexedRule improve_step(const IndexedRule& r, Rng& rng);

    Evaluator& ev_;
    EvoParams params_;
    RuleGrammar grammar_;
    greedy::GreedyMiner greedy_;
    Bitset sp0_;
    std::map<std::pair<ObjectId, ActionId>, std::vector<ObjectId>> holders_;
    std::map<std::pair<ObjectId, ObjectId>, std::vector<ActionId>> acts_of_;
    std::vector<double> trace_;
    std::size_t forced_ = 0;
};

/// Mined policy in canonical rule order. ⟦result⟧ = SP0.
std::vector<Rule> mine_evolutionary(std::shared_ptr<const AclPolicy> acl, const EvoParams& params = {});

} // namespace oral::evo
