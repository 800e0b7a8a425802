// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "oral/evaluator.hpp"

namespace oral::mine {

/// ⟨|⟦ρ⟧ ∩ SP| / WSC(ρ), |con(ρ)|, 1 / TCPL(ρ)⟩, compared lexicographically.
/// A rule without constraints has TCPL 0 and ranks first on the last component.
struct RuleQuality {
    double coverage = 0;
    double wsc = 1;
    std::size_t constraints = 0;
    std::size_t tcpl = 0;

    [[nodiscard]] double ratio() const { return coverage / wsc; }
    friend bool operator<(const RuleQuality& a, const RuleQuality& b);
    friend bool operator>(const RuleQuality& a, const RuleQuality& b) { return b < a; }
    friend bool operator==(const RuleQuality& a, const RuleQuality& b) { return !(a < b) && !(b < a); }
};

std::size_t tcpl(const Evaluator& ev, const IndexedRule& r);
RuleQuality quality(Evaluator& ev, const IndexedRule& r, const Bitset& sp, const WscWeights& w);

/// Path whose last step is Boolean, or a reference followed by `id`.
struct ConditionPath {
    Path path;
    Multiplicity multiplicity = Multiplicity::One;
};

/// Path from an anchor class to a reference-typed end class.
struct NavPath {
    Path path;
    ClassId end = kNoClass;
    Multiplicity multiplicity = Multiplicity::One;
};

/**
 * Class-graph path enumeration shared by the miners.
 *
 * Condition paths may revisit classes; constraint paths follow each field at
 * most once and never exceed the absolute cap.
 */
class PathCatalog {
public:
    explicit PathCatalog(const ClassModel& cm)
        : cm_(cm)
    { }

    /// Non-reference paths from c of length at most max_len, without a bare
    /// `id` (the identity conjunct is handled separately).
    const std::vector<ConditionPath>& condition_paths(ClassId c, std::size_t max_len);

    /// Simple reference paths from c of length at most cap, including the empty path.
    const std::vector<NavPath>& nav_paths(ClassId c, std::size_t cap);

    /// Classes that are end types of paths from c, plus their ancestors.
    std::vector<ClassId> reach(ClassId c, std::size_t cap);

    /// Paths from c whose type is t or a subclass of t and whose length is at
    /// most the shortest such length plus extra.
    std::vector<NavPath> paths(ClassId c, ClassId t, std::size_t extra, std::size_t cap);

private:
    const ClassModel& cm_;
    std::map<std::pair<ClassId, std::size_t>, std::vector<ConditionPath>> cond_;
    std::map<std::pair<ClassId, std::size_t>, std::vector<NavPath>> nav_;
};

struct ConstraintLimits {
    std::size_t sped = 0;
    std::size_t rped = 0;
    std::size_t mtpl = 4;
};

/// Type-correct candidate constraints between subject type st and resource
/// type rt, interned in the evaluator and sorted by canonical text.
std::vector<ConsId> candidate_constraints(Evaluator& ev, PathCatalog& paths, ClassId st, ClassId rt, const ConstraintLimits& lim);

/// Condition characterizing objs among the instances of c, using paths of
/// length at most max_len. The `id` conjunct is added only when the other
/// conjuncts over-approximate.
std::vector<CondId> compute_condition(Evaluator& ev, PathCatalog& paths, const std::vector<ObjectId>& objs, ClassId c, std::size_t max_len);

/// Rule with the given conjunct removed when it is on path p or on p·id.
std::vector<CondId> remove_path(const Evaluator& ev, const std::vector<CondId>& cond, const Path& p);
bool path_appears(const Evaluator& ev, const std::vector<CondId>& cond, const Path& p);

/// Least upper bound of two conditions.
std::vector<CondId> condition_lub(Evaluator& ev, const std::vector<CondId>& a, const std::vector<CondId>& b);

/// Well-formed with respect to the class model.
bool well_formed(const Evaluator& ev, const IndexedRule& r);

} // namespace oral::mine
