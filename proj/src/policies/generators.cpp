// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "oral/error.hpp"
#include "oral/evaluator.hpp"
#include "oral/policies.hpp"
#include "oral/rng.hpp"

namespace oral::gen {

namespace {

/// Expected instance count of a class as a + b * N; actual counts are drawn
/// from a normal distribution with a 10% standard deviation.
struct CountLaw {
    const char* cls;
    double base;
    double per_n;
};

class Builder {
public:
    Builder(std::uint64_t seed, int n, std::span<const CountLaw> laws)
        : root_(seed)
        , n_(n)
    {
        for (const auto& l : laws) laws_[l.cls] = l;
    }

    Rng stream(std::string_view name) const { return root_.substream(name); }

    std::size_t count(const std::string& cls) const
    {
        const auto& l = laws_.at(cls);
        const double mean = l.base + l.per_n * n_;
        Rng r = root_.substream("count:" + cls);
        return static_cast<std::size_t>(std::max<long>(1, std::lround(r.normal(mean, 0.1 * mean))));
    }

    std::vector<std::string> make(const std::string& cls, const std::string& prefix)
    {
        return make(cls, prefix, count(cls));
    }

    std::vector<std::string> make(const std::string& cls, const std::string& prefix, std::size_t k)
    {
        std::vector<std::string> ids;
        for (std::size_t i = 0; i < k; ++i) {
            ids.push_back(prefix + std::to_string(i));
            index_[ids.back()] = specs_.size();
            specs_.push_back({cls, ids.back(), {}});
        }
        return ids;
    }

    std::vector<std::string> make_named(const std::string& cls, const std::vector<std::string>& names)
    {
        for (const auto& id : names) {
            index_[id] = specs_.size();
            specs_.push_back({cls, id, {}});
        }
        return names;
    }

    void set(const std::string& id, const std::string& field, FieldInput v)
    {
        specs_[index_.at(id)].fields.emplace_back(field, std::move(v));
    }

    std::shared_ptr<const ObjectModel> build(std::shared_ptr<const ClassModel> cm) const
    {
        return std::make_shared<const ObjectModel>(ObjectModel::build(std::move(cm), specs_));
    }

private:
    Rng root_;
    int n_;
    std::map<std::string, CountLaw> laws_;
    std::vector<ObjectSpec> specs_;
    std::map<std::string, std::size_t> index_;
};

const std::string& pick(Rng& r, const std::vector<std::string>& v) { return v[r.index(v.size())]; }

const std::string& pick_zipf(Rng& r, const std::vector<std::string>& v) { return v[r.zipf(v.size(), 1.5) - 1]; }

std::vector<std::string> pick_distinct(Rng& r, const std::vector<std::string>& v, std::size_t k)
{
    std::vector<std::string> out;
    for (auto i : r.sample(v.size(), std::min(k, v.size()))) out.push_back(v[i]);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::string> pick_distinct_zipf(Rng& r, const std::vector<std::string>& v, std::size_t k)
{
    std::set<std::string> out;
    for (std::size_t tries = 0; out.size() < std::min(k, v.size()) && tries < 64; ++tries) out.insert(pick_zipf(r, v));
    return {out.begin(), out.end()};
}

// EMR, N = 15 at the reference size.
constexpr CountLaw kEmrLaws[] = {
    {"Hospital", 0, 1.0 / 3},
    {"Physician", 0, 14.0 / 3},
    {"Patient", 0, 13.6},
    {"Consultation", 0, 8.0 / 3},
    {"MedicalRecord", 0, 1.8},
};

std::shared_ptr<const ObjectModel> emr(int n, std::uint64_t seed)
{
    Builder b(seed, n, kEmrLaws);
    auto hosp = b.make("Hospital", "hosp");
    auto phy = b.make("Physician", "phy");
    auto pat = b.make("Patient", "pat");
    auto con = b.make("Consultation", "consult");
    auto rec = b.make("MedicalRecord", "rec");

    Rng rh = b.stream("Hospital");
    for (const auto& h : hosp) b.set(h, "isPublic", rh.bernoulli(0.5));

    Rng rp = b.stream("Physician");
    std::map<std::string, std::string> aff;
    std::map<std::string, std::vector<std::string>> staff;
    std::vector<bool> trainee(phy.size());
    for (std::size_t i = 0; i < phy.size(); ++i) {
        trainee[i] = rp.bernoulli(0.3);
        aff[phy[i]] = pick(rp, hosp);
        staff[aff[phy[i]]].push_back(phy[i]);
        b.set(phy[i], "isTrainee", trainee[i]);
        b.set(phy[i], "affiliation", aff[phy[i]]);
        b.set(phy[i], "isOnCall", rp.bernoulli(0.5));
    }
    std::vector<std::string> seniors;
    for (std::size_t i = 0; i < phy.size(); ++i)
        if (!trainee[i]) seniors.push_back(phy[i]);
    for (std::size_t i = 0; i < phy.size() && !seniors.empty(); ++i) {
        if (!trainee[i]) continue;
        std::vector<std::string> local;
        for (const auto& s : staff[aff[phy[i]]])
            if (std::find(seniors.begin(), seniors.end(), s) != seniors.end()) local.push_back(s);
        b.set(phy[i], "supervisor", local.empty() ? pick(rp, seniors) : pick(rp, local));
    }

    Rng rq = b.stream("Patient");
    std::map<std::string, std::vector<std::string>> regs;
    for (const auto& p : pat) {
        regs[p] = pick_distinct_zipf(rq, hosp, 1 + (rq.bernoulli(0.4) ? 1 : 0));
        b.set(p, "registrations", regs[p]);
        std::set<std::string> consents;
        const auto k = rq.index(3);
        for (std::size_t j = 0; j < k; ++j) {
            const auto& h = rq.bernoulli(0.5) ? pick(rq, regs[p]) : pick(rq, hosp);
            if (!staff[h].empty()) consents.insert(pick(rq, staff[h]));
        }
        b.set(p, "consents", std::vector<std::string>(consents.begin(), consents.end()));
    }

    Rng rc = b.stream("Consultation");
    for (const auto& c : con) {
        const auto& p = pick(rc, pat);
        const auto& h = rc.bernoulli(0.5) ? pick(rc, regs[p]) : pick(rc, hosp);
        const auto& d = staff[h].empty() ? pick(rc, phy) : pick(rc, staff[h]);
        b.set(c, "physician", d);
        b.set(c, "patient", p);
        b.set(c, "isEmergency", rc.bernoulli(0.2));
    }

    Rng rr = b.stream("MedicalRecord");
    auto chosen = rr.sample(con.size(), std::min(rec.size(), con.size()));
    for (std::size_t i = 0; i < rec.size(); ++i) {
        b.set(rec[i], "consultation", i < chosen.size() ? con[chosen[i]] : pick(rr, con));
        b.set(rec[i], "isSensitive", rr.bernoulli(0.3));
    }
    return b.build(sample_policy(PolicyName::Emr).class_model);
}

// Healthcare, N = 5 at the reference size. Topics are a fixed vocabulary.
constexpr CountLaw kHealthcareLaws[] = {
    {"Ward", 0, 1},
    {"Team", 0, 2},
    {"Nurse", 0, 1},
    {"Doctor", 0, 5},
    {"Patient", 0, 10},
    {"Agent", 0, 3},
    {"HealthRecordItem", 0, 112},
};

const std::vector<std::string> kTopics{"cardiology", "dermatology", "neurology", "nutrition", "oncology", "pediatrics", "pharmacy", "psychiatry", "radiology", "surgery"};

std::shared_ptr<const ObjectModel> healthcare(int n, std::uint64_t seed)
{
    Builder b(seed, n, kHealthcareLaws);
    auto wards = b.make("Ward", "ward");
    auto teams = b.make("Team", "team");
    auto topics = b.make_named("Topic", kTopics);
    auto nurses = b.make("Nurse", "nurse");
    auto doctors = b.make("Doctor", "doc");
    auto patients = b.make("Patient", "pat");
    auto agents = b.make("Agent", "agent");
    auto records = b.make("HealthRecord", "hr", patients.size());

    std::map<std::string, std::vector<std::string>> ward_nurses, team_doctors, agents_of;
    std::map<std::string, std::string> ward_of, team_of;

    Rng rn = b.stream("Nurse");
    for (const auto& x : nurses) {
        const auto& w = pick(rn, wards);
        ward_nurses[w].push_back(x);
        b.set(x, "ward", w);
    }
    Rng rd = b.stream("Doctor");
    for (const auto& d : doctors) {
        auto ts = pick_distinct(rd, teams, 1);
        for (const auto& t : ts) team_doctors[t].push_back(d);
        b.set(d, "teams", ts);
        b.set(d, "specialties", pick_distinct(rd, topics, 1 + rd.index(2)));
    }
    Rng rp = b.stream("Patient");
    for (const auto& p : patients) {
        ward_of[p] = pick(rp, wards);
        team_of[p] = pick_zipf(rp, teams);
        b.set(p, "ward", ward_of[p]);
        b.set(p, "treatingTeam", team_of[p]);
    }
    Rng ra = b.stream("Agent");
    for (const auto& a : agents) {
        auto ps = pick_distinct(ra, patients, 1 + ra.index(2));
        for (const auto& p : ps) agents_of[p].push_back(a);
        b.set(a, "agentFor", ps);
    }
    for (std::size_t i = 0; i < records.size(); ++i) b.set(records[i], "patient", patients[i]);

    Rng ri = b.stream("HealthRecordItem");
    const auto k = b.count("HealthRecordItem");
    std::vector<std::pair<std::string, std::size_t>> items;
    for (std::size_t i = 0; i < k; ++i) {
        const double u = ri.uniform();
        items.emplace_back(u < 0.3 ? "NursingItem" : (u < 0.6 ? "NoteItem" : "HealthRecordItem"), ri.index(records.size()));
    }
    std::size_t cn = 0, cnote = 0, cp = 0;
    for (const auto& [cls, rec] : items) {
        const std::string id = cls == "NursingItem" ? "nitem" + std::to_string(cn++) : (cls == "NoteItem" ? "note" + std::to_string(cnote++) : "item" + std::to_string(cp++));
        b.make_named(cls, {id});
        const auto& p = patients[rec];
        b.set(id, "record", records[rec]);
        b.set(id, "topics", pick_distinct(ri, topics, 1 + (ri.bernoulli(0.3) ? 1 : 0)));
        std::string author;
        const double u = ri.uniform();
        const auto& wn = ward_nurses[ward_of[p]];
        const auto& td = team_doctors[team_of[p]];
        if (u < 0.3) author = !wn.empty() && ri.bernoulli(0.8) ? pick(ri, wn) : pick(ri, nurses);
        else if (u < 0.45) author = p;
        else if (u < 0.6 && !agents_of[p].empty()) author = pick(ri, agents_of[p]);
        else author = !td.empty() && ri.bernoulli(0.7) ? pick(ri, td) : pick(ri, doctors);
        if (ri.bernoulli(0.3)) b.set(id, "author", author);
    }
    return b.build(sample_policy(PolicyName::Healthcare).class_model);
}

// Project management, N = 5 at the reference size.
constexpr CountLaw kProjectLaws[] = {
    {"Department", 0, 1},
    {"Project", 0, 2},
    {"Expertise", 6, 0},
    {"Employee", 0, 3},
    {"Contractor", 0, 2},
    {"Auditor", 1, 0.4},
    {"Accountant", 1, 0.4},
    {"Planner", 1, 0.4},
    {"Task", 0, 2.5},
    {"Invoice", 0, 2},
    {"Milestone", 0, 16},
};

std::shared_ptr<const ObjectModel> project_management(int n, std::uint64_t seed)
{
    Builder b(seed, n, kProjectLaws);
    auto depts = b.make("Department", "dept");
    auto skills = b.make("Expertise", "skill");
    auto projects = b.make("Project", "proj");
    auto budgets = b.make("Budget", "budget", projects.size());
    auto schedules = b.make("Schedule", "sched", projects.size());
    auto invoices = b.make("Invoice", "inv");
    auto milestones = b.make("Milestone", "mile");
    auto managers = b.make("DepartmentManager", "mgr", depts.size());
    auto employees = b.make("Employee", "emp");
    auto contractors = b.make("Contractor", "ctr");
    auto auditors = b.make("Auditor", "aud");
    auto accountants = b.make("Accountant", "acct");
    auto planners = b.make("Planner", "plan");
    auto tasks = b.make("Task", "task");

    Rng rj = b.stream("Project");
    for (const auto& p : projects) b.set(p, "department", pick(rj, depts));
    for (std::size_t i = 0; i < projects.size(); ++i) {
        b.set(budgets[i], "project", projects[i]);
        b.set(schedules[i], "project", projects[i]);
    }
    Rng rv = b.stream("Invoice");
    for (const auto& x : invoices) b.set(x, "project", pick(rv, projects));
    Rng rm = b.stream("Milestone");
    for (const auto& x : milestones) b.set(x, "project", pick(rm, projects));

    std::vector<std::string> people;
    Rng re = b.stream("Employee");
    auto employee = [&](const std::string& id, const std::string& dept) {
        b.set(id, "department", dept);
        b.set(id, "projects", pick_distinct(re, projects, re.index(2)));
        b.set(id, "expertise", pick_distinct(re, skills, 1 + re.index(3)));
        people.push_back(id);
    };
    for (std::size_t i = 0; i < managers.size(); ++i) employee(managers[i], depts[i]);
    for (const auto& group : {&employees, &auditors, &accountants, &planners})
        for (const auto& e : *group) employee(e, pick(re, depts));
    // Each project has one leader drawn from the plain employees.
    std::map<std::string, std::vector<std::string>> led;
    for (const auto& p : projects) led[pick(re, employees)].push_back(p);
    for (const auto& group : {&managers, &employees, &auditors, &accountants, &planners})
        for (const auto& e : *group) b.set(e, "projectsLed", led[e]);

    Rng rc = b.stream("Contractor");
    std::vector<std::string> ctr_project, ctr_skills;
    for (const auto& c : contractors) {
        auto ps = pick_distinct(rc, projects, 1);
        auto ks = pick_distinct(rc, skills, 1 + rc.index(3));
        ctr_project.push_back(ps.front());
        ctr_skills.push_back(ks.front());
        b.set(c, "projects", ps);
        b.set(c, "expertise", ks);
        people.push_back(c);
    }

    // The first two tasks match a contractor, one proprietary and one not,
    // so the contractor rule and its restriction are observable at every size;
    // the second is assigned to a contractor.
    Rng rt = b.stream("Task");
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const auto& t = tasks[i];
        const bool witness = i < 2 && !contractors.empty();
        b.set(t, "project", witness ? ctr_project[0] : pick(rt, projects));
        b.set(t, "expertise", witness ? std::vector<std::string>{ctr_skills[0]} : pick_distinct_zipf(rt, skills, 1));
        b.set(t, "proprietary", witness ? i == 0 : rt.bernoulli(0.4));
        if (i == 1) b.set(t, "assignee", contractors.empty() ? pick(rt, people) : contractors.back());
        else if (rt.bernoulli(0.4)) b.set(t, "assignee", pick(rt, people));
    }
    return b.build(sample_policy(PolicyName::ProjectManagement).class_model);
}

// University, N = 5 at the reference size. Registrar and admissions are
// departments that exist at every size.
constexpr CountLaw kUniversityLaws[] = {
    {"Department", 0, 1},
    {"Course", 0, 8},
    {"Student", 0, 30},
    {"Faculty", 0, 5},
    {"Staff", 0, 2},
    {"Applicant", 0, 27},
};

std::shared_ptr<const ObjectModel> university(int n, std::uint64_t seed)
{
    Builder b(seed, n, kUniversityLaws);
    auto depts = b.make("Department", "dept");
    b.make_named("Department", {"admissions", "registrar"});
    auto courses = b.make("Course", "crs");
    auto students = b.make("Student", "stu");
    auto faculty = b.make("Faculty", "fac");
    auto staff = b.make("Staff", "staff");
    auto applicants = b.make("Applicant", "appl");
    auto gradebooks = b.make("Gradebook", "gb", courses.size());
    auto rosters = b.make("Roster", "roster", courses.size());
    auto transcripts = b.make("Transcript", "tr", static_cast<std::size_t>(std::lround(0.7 * static_cast<double>(students.size()))));
    auto applications = b.make("Application", "app", applicants.size());

    Rng rs = b.stream("Student");
    for (const auto& s : students) {
        b.set(s, "department", pick(rs, depts));
        b.set(s, "crsTaken", pick_distinct_zipf(rs, courses, 1 + rs.index(2)));
        b.set(s, "crsTA", rs.bernoulli(0.1) ? pick_distinct(rs, courses, 1) : std::vector<std::string>{});
    }
    Rng rf = b.stream("Faculty");
    std::set<std::string> chaired;
    for (const auto& f : faculty) {
        const auto& d = pick(rf, depts);
        b.set(f, "department", d);
        b.set(f, "crsTaught", pick_distinct(rf, courses, 1 + rf.index(2)));
        const bool chair = !chaired.count(d) && rf.bernoulli(0.5);
        if (chair) chaired.insert(d);
        b.set(f, "isChair", chair);
    }
    // One registrar and one admissions officer per five departments.
    Rng rt = b.stream("Staff");
    const auto office = std::max<std::size_t>(1, depts.size() / 5);
    for (std::size_t i = 0; i < staff.size(); ++i) {
        const std::string d = i < office ? "registrar" : (i < 2 * office ? "admissions" : pick(rt, depts));
        b.set(staff[i], "department", d);
    }
    for (std::size_t i = 0; i < courses.size(); ++i) {
        b.set(gradebooks[i], "course", courses[i]);
        b.set(rosters[i], "course", courses[i]);
    }
    for (std::size_t i = 0; i < transcripts.size(); ++i) b.set(transcripts[i], "student", students[i]);
    for (std::size_t i = 0; i < applicants.size(); ++i) b.set(applications[i], "applicant", applicants[i]);
    return b.build(sample_policy(PolicyName::University).class_model);
}

} // namespace

std::shared_ptr<const ObjectModel> generate_objects(PolicyName p, int n, std::uint64_t seed)
{
    if (n < 1) throw ModelError("size parameter must be positive");
    switch (p) {
    case PolicyName::Emr: return emr(n, seed);
    case PolicyName::Healthcare: return healthcare(n, seed);
    case PolicyName::ProjectManagement: return project_management(n, seed);
    case PolicyName::University: return university(n, seed);
    }
    throw ModelError("unknown policy");
}

std::shared_ptr<const AclPolicy> extract_acls(std::shared_ptr<const ObjectModel> om, const std::vector<Rule>& rules)
{
    auto acl = std::make_shared<AclPolicy>();
    acl->class_model = om->class_model_ptr();
    acl->object_model = om;
    std::set<std::string> acts;
    for (const auto& r : rules) acts.insert(r.actions.begin(), r.actions.end());
    acl->actions.assign(acts.begin(), acts.end());
    Evaluator ev(acl);
    for (const auto& r : rules) {
        auto m = ev.meaning(ev.index(r));
        acl->sp0.insert(m.begin(), m.end());
    }
    return acl;
}

PathLimits mining_limits(PolicyName p)
{
    PathLimits l;
    if (p == PolicyName::Emr) {
        l.mrpl = 4;
        l.rped = 1;
    }
    return l;
}

Dataset generate(PolicyName p, int n, std::uint64_t seed)
{
    Dataset d;
    d.policy = p;
    d.n = n;
    d.seed = seed;
    d.rules = sample_policy(p).rules;
    d.acl = extract_acls(generate_objects(p, n, seed), d.rules);
    return d;
}

PolicyStats stats(const AclPolicy& acl, const std::vector<Rule>& rules)
{
    PolicyStats s;
    s.rules = rules.size();
    std::size_t conds = 0, cons = 0;
    for (const auto& r : rules) {
        conds += condition_count(r);
        cons += r.constraint.size();
    }
    if (!rules.empty()) {
        s.conditions_per_rule = static_cast<double>(conds) / static_cast<double>(rules.size());
        s.constraints_per_rule = static_cast<double>(cons) / static_cast<double>(rules.size());
    }
    const auto& om = *acl.object_model;
    s.classes = acl.class_model->class_count();
    s.objects = om.size();
    std::size_t fields = 0;
    for (ObjectId o = 0; o < om.size(); ++o) fields += acl.class_model->fields(om.class_of(o)).size();
    if (om.size()) s.fields_per_object = static_cast<double>(fields) / static_cast<double>(om.size());
    s.sp0 = acl.sp0.size();
    s.wsc = wsc(rules);
    return s;
}

} // namespace oral::gen
