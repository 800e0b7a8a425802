// SPDX-License-Identifier: Apache-2.0
#include <array>
#include <map>
#include <mutex>

#include "oral/error.hpp"
#include "oral/io.hpp"
#include "oral/policies.hpp"

namespace oral::gen {

namespace {

using M = Multiplicity;

std::vector<ClassSpec> emr_classes()
{
    return {
        {"Hospital", std::nullopt, {{"isPublic", "Boolean", M::One}}},
        {"Person", std::nullopt, {}},
        {"Physician", "Person", {{"isTrainee", "Boolean", M::One}, {"affiliation", "Hospital", M::One}, {"supervisor", "Physician", M::Optional}, {"isOnCall", "Boolean", M::One}}},
        {"Patient", "Person", {{"registrations", "Hospital", M::Many}, {"consents", "Physician", M::Many}}},
        {"Consultation", std::nullopt, {{"physician", "Physician", M::One}, {"patient", "Patient", M::One}, {"isEmergency", "Boolean", M::One}}},
        {"MedicalRecord", std::nullopt, {{"consultation", "Consultation", M::One}, {"isSensitive", "Boolean", M::One}}},
    };
}

constexpr const char* kEmrRules = R"(
rule(Physician; subject.isTrainee = false; Consultation; true;
     subject = resource.physician and subject.affiliation in resource.patient.registrations;
     {createMedicalRecord})
rule(Physician; true; MedicalRecord; true; subject = resource.consultation.physician;
     {read, update, addNote, sign, print, archive})
rule(Physician; true; MedicalRecord; true; subject = resource.consultation.physician.supervisor;
     {read, update, addNote, approve, print})
rule(Patient; true; MedicalRecord; true; subject = resource.consultation.patient;
     {read, print, download, share, requestCopy, requestCorrection})
rule(Physician; true; MedicalRecord; true;
     subject in resource.consultation.patient.consents
     and subject.affiliation in resource.consultation.patient.registrations;
     {read, print, download, addNote})
rule(Patient; true; Consultation; true; subject = resource.patient;
     {view, reschedule, cancel, confirm, rate, requestReferral})
)";

std::vector<ClassSpec> healthcare_classes()
{
    return {
        {"Ward", std::nullopt, {}},
        {"Team", std::nullopt, {}},
        {"Topic", std::nullopt, {}},
        {"Person", std::nullopt, {}},
        {"Nurse", "Person", {{"ward", "Ward", M::One}}},
        {"Doctor", "Person", {{"teams", "Team", M::Many}, {"specialties", "Topic", M::Many}}},
        {"Patient", "Person", {{"ward", "Ward", M::One}, {"treatingTeam", "Team", M::One}}},
        {"Agent", "Person", {{"agentFor", "Patient", M::Many}}},
        {"HealthRecord", std::nullopt, {{"patient", "Patient", M::One}}},
        {"HealthRecordItem", std::nullopt, {{"record", "HealthRecord", M::One}, {"author", "Person", M::Optional}, {"topics", "Topic", M::Many}}},
        {"NursingItem", "HealthRecordItem", {}},
        {"NoteItem", "HealthRecordItem", {}},
    };
}

constexpr const char* kHealthcareRules = R"(
rule(Nurse; true; HealthRecord; true; subject.ward = resource.patient.ward;
     {addItem, readSummary, updateVitals, recordMedication, readCarePlan})
rule(Doctor; true; HealthRecord; true; subject.teams contains resource.patient.treatingTeam;
     {addItem, readSummary, prescribe})
rule(Patient; true; HealthRecord; true; subject = resource.patient;
     {addNote, readSummary, requestAppointment, requestCopy, updateContact})
rule(Agent; true; HealthRecord; true; subject.agentFor contains resource.patient;
     {addNote, readSummary, requestAppointment, requestCopy, updateContact, viewBilling, payBill})
rule(Person; true; HealthRecordItem; true; subject = resource.author;
     {update, sign})
rule(Nurse; true; NursingItem; true; subject.ward = resource.record.patient.ward;
     {read})
rule(Doctor; true; HealthRecordItem; true;
     subject.teams contains resource.record.patient.treatingTeam and subject.specialties supseteq resource.topics;
     {read})
rule(Patient; true; NoteItem; true; subject = resource.record.patient;
     {read, print})
rule(Agent; true; NoteItem; true; subject.agentFor contains resource.record.patient;
     {read, print, share})
)";

std::vector<ClassSpec> project_classes()
{
    return {
        {"Department", std::nullopt, {}},
        {"Expertise", std::nullopt, {}},
        {"Project", std::nullopt, {{"department", "Department", M::One}}},
        {"Budget", std::nullopt, {{"project", "Project", M::One}}},
        {"Schedule", std::nullopt, {{"project", "Project", M::One}}},
        {"Invoice", std::nullopt, {{"project", "Project", M::One}}},
        {"Milestone", std::nullopt, {{"project", "Project", M::One}}},
        {"Person", std::nullopt, {{"projects", "Project", M::Many}, {"expertise", "Expertise", M::Many}}},
        {"Employee", "Person", {{"department", "Department", M::One}, {"projectsLed", "Project", M::Many}}},
        {"Contractor", "Person", {}},
        {"DepartmentManager", "Employee", {}},
        {"Auditor", "Employee", {}},
        {"Accountant", "Employee", {}},
        {"Planner", "Employee", {}},
        {"Task", std::nullopt, {{"project", "Project", M::One}, {"expertise", "Expertise", M::Many}, {"proprietary", "Boolean", M::One}, {"assignee", "Person", M::Optional}}},
    };
}

constexpr const char* kProjectRules = R"(
rule(DepartmentManager; true; Budget; true; subject.department = resource.project.department;
     {read, approve, reject})
rule(DepartmentManager; true; Schedule; true; subject.department = resource.project.department;
     {read, approve})
rule(DepartmentManager; true; Project; true; subject.department = resource.department;
     {read, assignLeader, archive, rename})
rule(Employee; true; Budget; true; subject.projectsLed contains resource.project;
     {read, write, submit})
rule(Employee; true; Schedule; true; subject.projectsLed contains resource.project;
     {read, write, submit})
rule(Employee; true; Task; true; subject.projectsLed contains resource.project;
     {assign, close, prioritize})
rule(Person; true; Schedule; true; subject.projects contains resource.project;
     {read, comment})
rule(Employee; true; Task; true;
     subject.projects contains resource.project and subject.expertise supseteq resource.expertise;
     {read, request, estimate})
rule(Contractor; true; Task; resource.proprietary = false;
     subject.projects contains resource.project and subject.expertise supseteq resource.expertise;
     {read, request, estimate})
rule(Person; true; Task; true; subject = resource.assignee;
     {update, complete, logTime, attach})
rule(Auditor; true; Budget; true; subject.department = resource.project.department;
     {read, audit, flag})
rule(Accountant; true; Invoice; true; subject.department = resource.project.department;
     {read, write, pay, void})
rule(Planner; true; Schedule; true; subject.department = resource.project.department;
     {read, write, publish})
)";

std::vector<ClassSpec> university_classes()
{
    return {
        {"Department", std::nullopt, {}},
        {"Course", std::nullopt, {}},
        {"Student", std::nullopt, {{"department", "Department", M::One}, {"crsTaken", "Course", M::Many}, {"crsTA", "Course", M::Many}}},
        {"Faculty", std::nullopt, {{"department", "Department", M::One}, {"crsTaught", "Course", M::Many}, {"isChair", "Boolean", M::One}}},
        {"Staff", std::nullopt, {{"department", "Department", M::One}}},
        {"Applicant", std::nullopt, {}},
        {"Gradebook", std::nullopt, {{"course", "Course", M::One}}},
        {"Roster", std::nullopt, {{"course", "Course", M::One}}},
        {"Transcript", std::nullopt, {{"student", "Student", M::One}}},
        {"Application", std::nullopt, {{"applicant", "Applicant", M::One}}},
    };
}

constexpr const char* kUniversityRules = R"(
rule(Student; true; Gradebook; true; subject.crsTaken contains resource.course;
     {readMyScores, requestRegrade})
rule(Student; true; Gradebook; true; subject.crsTA contains resource.course;
     {addScore, readScore, updateScore, readStatistics})
rule(Faculty; true; Gradebook; true; subject.crsTaught contains resource.course;
     {addScore, readScore, changeScore, assignGrade, exportGrades, lockGrades})
rule(Staff; subject.department.id = registrar; Roster; true; true;
     {read, write, print})
rule(Faculty; true; Roster; true; subject.crsTaught contains resource.course;
     {read, print, emailClass})
rule(Student; true; Transcript; true; subject = resource.student;
     {read, print, requestCopy})
rule(Faculty; subject.isChair = true; Transcript; true; subject.department = resource.student.department;
     {read, print})
rule(Staff; subject.department.id = registrar; Transcript; true; true;
     {read, print, certify})
rule(Applicant; true; Application; true; subject = resource.applicant;
     {checkStatus, withdraw})
rule(Staff; subject.department.id = admissions; Application; true; true;
     {read, setStatus})
)";

SamplePolicy make(PolicyName name, std::vector<ClassSpec> classes, const char* rules, int n)
{
    SamplePolicy p;
    p.name = name;
    p.class_model = std::make_shared<const ClassModel>(ClassModel::build(std::move(classes)));
    p.rules = io::parse_rules(rules);
    io::check_rules(*p.class_model, p.rules);
    for (auto& r : p.rules) canonicalize(r);
    p.default_n = n;
    return p;
}

} // namespace

std::string_view to_string(PolicyName p)
{
    switch (p) {
    case PolicyName::Emr: return "emr";
    case PolicyName::Healthcare: return "healthcare";
    case PolicyName::ProjectManagement: return "project-mgmt";
    case PolicyName::University: return "university";
    }
    return "?";
}

std::optional<PolicyName> parse_policy(std::string_view text)
{
    for (auto p : kAllPolicies)
        if (to_string(p) == text) return p;
    return std::nullopt;
}

const SamplePolicy& sample_policy(PolicyName p)
{
    static const std::array<SamplePolicy, 4> all{
        make(PolicyName::Emr, emr_classes(), kEmrRules, 15),
        make(PolicyName::Healthcare, healthcare_classes(), kHealthcareRules, 5),
        make(PolicyName::ProjectManagement, project_classes(), kProjectRules, 5),
        make(PolicyName::University, university_classes(), kUniversityRules, 5),
    };
    return all[static_cast<std::size_t>(p)];
}

} // namespace oral::gen
