// SPDX-License-Identifier: Apache-2.0
#include <sys/utsname.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "oral/error.hpp"
#include "oral/io.hpp"
#include "oral/metrics.hpp"
#include "oral/miner_evo.hpp"
#include "oral/miner_greedy.hpp"
#include "oral/policies.hpp"
#include "oral/semantics.hpp"

namespace fs = std::filesystem;
using namespace oral;
using io::Json;

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr const char* kThreadsEnv = "ORAL_MAX_THREADS";

enum Exit { kOk = 0, kValidation = 1, kInternal = 2 };

/// Raised for invalid command input.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct MiningParams {
    greedy::GreedyParams greedy;
    evo::EvoParams evo;
};

template <typename T>
void take(const Json& j, const char* key, T& out)
{
    auto it = j.find(key);
    if (it == j.end()) return;
    if constexpr (std::is_unsigned_v<T> && !std::is_same_v<T, bool>) {
        if (it->is_number_integer() && it->template get<long long>() < 0) throw UsageError(std::string("parameter \"") + key + "\" must be nonnegative");
        if (it->is_number_float()) throw UsageError(std::string("parameter \"") + key + "\" must be an integer");
    }
    try {
        out = it->get<T>();
    } catch (const Json::exception&) {
        throw UsageError(std::string("parameter \"") + key + "\" has the wrong type");
    }
}

void check_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& where)
{
    if (!j.is_object()) throw UsageError(where + " must be an object");
    for (const auto& [k, v] : j.items()) {
        bool ok = false;
        for (const auto* a : allowed) ok |= k == a;
        if (!ok) throw UsageError(where + ": unknown parameter \"" + k + "\"");
    }
}

void apply_params(const Json& j, MiningParams& p)
{
    check_keys(j, {"mspl", "mrpl", "sped", "rped", "mtpl", "mcse", "batch_size", "weights", "seed", "evolutionary"}, "params");
    auto& l = p.greedy.limits;
    take(j, "mspl", l.mspl);
    take(j, "mrpl", l.mrpl);
    take(j, "sped", l.sped);
    take(j, "rped", l.rped);
    take(j, "mtpl", l.mtpl);
    take(j, "mcse", p.greedy.mcse);
    take(j, "batch_size", p.greedy.batch_size);
    take(j, "seed", p.evo.seed);
    if (auto it = j.find("weights"); it != j.end()) {
        check_keys(*it, {"w1", "w2", "w3"}, "weights");
        take(*it, "w1", p.greedy.weights.w1);
        take(*it, "w2", p.greedy.weights.w2);
        take(*it, "w3", p.greedy.weights.w3);
    }
    if (auto it = j.find("evolutionary"); it != j.end()) {
        const auto& e = *it;
        check_keys(e,
            {"pop_size", "generations_search", "tournament", "generations_improve", "p_mutation", "w_single", "w_action", "w_simplify",
                "w_double", "p_single", "p_double", "p_type_single", "p_type_double", "classic_operators", "max_failures"},
            "evolutionary");
        auto& v = p.evo;
        take(e, "pop_size", v.pop_size);
        take(e, "generations_search", v.generations_search);
        take(e, "tournament", v.tournament);
        take(e, "generations_improve", v.generations_improve);
        take(e, "p_mutation", v.p_mutation);
        take(e, "w_single", v.w_single);
        take(e, "w_action", v.w_action);
        take(e, "w_simplify", v.w_simplify);
        take(e, "w_double", v.w_double);
        take(e, "p_single", v.p_single);
        take(e, "p_double", v.p_double);
        take(e, "p_type_single", v.p_type_single);
        take(e, "p_type_double", v.p_type_double);
        take(e, "classic_operators", v.classic_operators);
        take(e, "max_failures", v.max_failures);
        if (v.pop_size < 2) throw UsageError("evolutionary.pop_size must be at least 2");
        if (v.tournament < 1) throw UsageError("evolutionary.tournament must be positive");
    }
    p.evo.limits = p.greedy.limits;
    p.evo.mcse = p.greedy.mcse;
    p.evo.weights = p.greedy.weights;
}

Json params_json(const MiningParams& p, const std::string& algorithm)
{
    const auto& l = p.greedy.limits;
    const auto& w = p.greedy.weights;
    Json j{{"mspl", l.mspl}, {"mrpl", l.mrpl}, {"sped", l.sped}, {"rped", l.rped}, {"mtpl", l.mtpl}, {"mcse", p.greedy.mcse},
        {"batch_size", p.greedy.batch_size}, {"weights", {{"w1", w.w1}, {"w2", w.w2}, {"w3", w.w3}}}, {"seed", p.evo.seed}};
    if (algorithm == "evolutionary") {
        const auto& v = p.evo;
        j["evolutionary"] = {{"pop_size", v.pop_size}, {"generations_search", v.generations_search}, {"tournament", v.tournament},
            {"generations_improve", v.generations_improve}, {"p_mutation", v.p_mutation}, {"w_single", v.w_single},
            {"w_action", v.w_action}, {"w_simplify", v.w_simplify}, {"w_double", v.w_double}, {"p_single", v.p_single},
            {"p_double", v.p_double}, {"p_type_single", v.p_type_single}, {"p_type_double", v.p_type_double},
            {"classic_operators", v.classic_operators}, {"max_failures", v.max_failures}};
    }
    return j;
}

/// Defaults, then the bundle's policy limits, then its params.json.
MiningParams bundle_params(const io::Bundle& b)
{
    MiningParams p;
    if (auto it = b.metadata.find("policy"); it != b.metadata.end() && it->is_string()) {
        if (auto name = gen::parse_policy(it->get<std::string>())) p.greedy.limits = gen::mining_limits(*name);
    }
    apply_params(b.params, p);
    return p;
}

std::size_t thread_cap()
{
    const char* v = std::getenv(kThreadsEnv);
    if (v == nullptr || *v == '\0') return 1;
    char* end = nullptr;
    const long n = std::strtol(v, &end, 10);
    if (*end != '\0' || n < 1) throw UsageError(std::string(kThreadsEnv) + " must be a positive integer");
    return static_cast<std::size_t>(n);
}

Json environment()
{
    Json env{{"version", kVersion}, {"compiler", __VERSION__}, {"hardware_threads", std::thread::hardware_concurrency()},
        {"thread_cap", thread_cap()}, {"threads_used", 1}};
    utsname u{};
    if (uname(&u) == 0) {
        env["os"] = std::string(u.sysname) + " " + u.release;
        env["machine"] = u.machine;
    }
    return env;
}

std::vector<Rule> read_rules(const fs::path& p, const ClassModel& cm)
{
    auto rules = io::parse_rules(io::read_file(p));
    io::check_rules(cm, rules);
    return rules;
}

std::string fixed(double v, int digits)
{
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
}

int cmd_generate(const std::string& policy, int n, std::uint64_t seed, const fs::path& out)
{
    auto name = gen::parse_policy(policy);
    if (!name) throw UsageError("unknown policy '" + policy + "'");
    if (n < 1) throw UsageError("--n must be positive");
    auto d = gen::generate(*name, n, seed);
    io::Bundle b;
    b.class_model = d.acl->class_model;
    b.object_model = d.acl->object_model;
    b.acl = d.acl;
    b.rules = d.rules;
    MiningParams p;
    p.greedy.limits = gen::mining_limits(*name);
    b.params = params_json(p, "greedy");
    b.params.erase("seed");
    b.metadata = {{"policy", std::string(gen::to_string(*name))}, {"n", n}, {"seed", seed}, {"version", kVersion}};
    io::write_bundle(out, b);
    std::cout << "wrote " << out.string() << ": " << b.object_model->size() << " objects, " << b.acl->sp0.size() << " tuples\n";
    return kOk;
}

int cmd_mine(const std::string& algorithm, const fs::path& in, const std::string& params_file, std::optional<std::uint64_t> seed,
    const fs::path& out, std::string meta_file)
{
    auto b = io::read_bundle(in);
    auto p = bundle_params(b);
    if (!params_file.empty()) apply_params(io::parse_json(io::read_file(params_file)), p);
    if (seed) p.evo.seed = *seed;
    thread_cap();

    const auto start = std::chrono::steady_clock::now();
    std::vector<Rule> mined;
    if (algorithm == "greedy") mined = greedy::mine_greedy(b.acl, p.greedy);
    else mined = evo::mine_evolutionary(b.acl, p.evo);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const auto& acl = *b.acl;
    if (policy_meaning(*acl.object_model, acl.actions, mined) != acl.sp0) throw std::logic_error("mined policy is not consistent with the ACLs");

    io::write_file_atomic(out, io::rules_to_text(mined));
    const double w = wsc(mined, p.greedy.weights);
    Json meta{{"algorithm", algorithm}, {"bundle", in.string()}, {"seed", p.evo.seed}, {"params", params_json(p, algorithm)},
        {"wall_time_s", wall}, {"wsc", w}, {"rules", mined.size()}, {"sp0", acl.sp0.size()}, {"environment", environment()}};
    if (meta_file.empty()) meta_file = out.string() + ".meta.json";
    io::write_file_atomic(meta_file, meta.dump(2) + "\n");
    std::cout << algorithm << ": " << mined.size() << " rules, WSC " << fixed(w, 0) << ", " << fixed(wall, 2) << " s\n";
    return kOk;
}

int cmd_compare(const fs::path& mined_file, const fs::path& ref_file, const fs::path& bundle, bool simplify_reference, bool json)
{
    auto b = io::read_bundle(bundle);
    auto mined = read_rules(mined_file, *b.class_model);
    auto reference = read_rules(ref_file, *b.class_model);
    auto p = bundle_params(b);
    if (simplify_reference) reference = greedy::simplify_policy(b.acl, reference, p.greedy);
    auto r = metrics::compare(*b.acl, mined, reference, p.greedy.weights);
    if (json) {
        Json per = Json::array();
        for (const auto& m : r.per_rule) {
            const auto& c = m.syn;
            per.push_back({{"mined", to_string(mined[m.mined])}, {"best_match", to_string(reference[m.syn_match])},
                {"components",
                    {{"subject_type", c.subject_type}, {"subject_condition", c.subject_condition}, {"resource_type", c.resource_type},
                        {"resource_condition", c.resource_condition}, {"constraint", c.constraint}, {"actions", c.actions}}},
                {"semantic_match", to_string(reference[m.sem_match])}, {"semantic", m.sem}});
        }
        Json out{{"synSim", r.syn_sim}, {"rSemSim", r.rsem_sim}, {"wscMined", r.wsc_mined}, {"wscReference", r.wsc_reference},
            {"perRule", std::move(per)}};
        std::cout << out.dump(2) << "\n";
        return kOk;
    }
    std::cout << "SynSim   RSemSim  WSC(mined)  WSC(reference)\n"
              << std::left << std::setw(9) << fixed(r.syn_sim, 3) << std::setw(9) << fixed(r.rsem_sim, 3) << std::setw(12)
              << fixed(r.wsc_mined, 0) << fixed(r.wsc_reference, 0) << "\n";
    return kOk;
}

int cmd_evaluate(const fs::path& bundle, const std::string& rules_file, const std::string& subject, const std::string& resource,
    const std::string& action)
{
    auto b = io::read_bundle(bundle);
    const auto& om = *b.object_model;
    auto rules = rules_file.empty() ? b.rules : read_rules(rules_file, *b.class_model);
    auto s = om.find(subject);
    if (!s) throw UsageError("unknown subject '" + subject + "'");
    auto r = om.find(resource);
    if (!r) throw UsageError("unknown resource '" + resource + "'");
    std::vector<std::string> actions{action};
    for (const auto& rule : rules) {
        if (rule_meaning(om, actions, rule).count({*s, *r, action})) {
            std::cout << "permit\n";
            return kOk;
        }
    }
    std::cout << "deny\n";
    return kOk;
}

int cmd_stats(const fs::path& bundle, const std::string& rules_file, bool json)
{
    auto b = io::read_bundle(bundle);
    auto rules = rules_file.empty() ? b.rules : read_rules(rules_file, *b.class_model);
    auto s = gen::stats(*b.acl, rules);
    if (json) {
        Json out{{"rules", s.rules}, {"conditionsPerRule", s.conditions_per_rule}, {"constraintsPerRule", s.constraints_per_rule},
            {"classes", s.classes}, {"objects", s.objects}, {"fieldsPerObject", s.fields_per_object}, {"sp0", s.sp0}, {"wsc", s.wsc}};
        std::cout << out.dump(2) << "\n";
        return kOk;
    }
    std::cout << "#rules  #cond/rule  #constr/rule  #classes  #obj    #field/obj  |SP0|   WSC\n"
              << std::left << std::setw(8) << s.rules << std::setw(12) << fixed(s.conditions_per_rule, 1) << std::setw(14)
              << fixed(s.constraints_per_rule, 1) << std::setw(10) << s.classes << std::setw(8) << s.objects << std::setw(12)
              << fixed(s.fields_per_object, 1) << std::setw(8) << s.sp0 << fixed(s.wsc, 0) << "\n";
    return kOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"ReBAC policy mining toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    std::string policy, algorithm = "greedy", params_file, meta_file, rules_file, subject, resource, action;
    std::string in_dir, out_path, mined_file, ref_file, bundle;
    int n = 0;
    std::uint64_t seed = 0;
    bool simplify_reference = false, json = false;

    auto* gen_cmd = app.add_subcommand("generate", "Generate a sample-policy bundle with extracted ACLs");
    gen_cmd->add_option("--policy", policy, "emr, healthcare, project-mgmt or university")->required();
    gen_cmd->add_option("--n", n, "Size parameter")->required();
    gen_cmd->add_option("--seed", seed, "Random seed")->required();
    gen_cmd->add_option("--out", out_path, "Output bundle directory")->required();

    auto* mine_cmd = app.add_subcommand("mine", "Mine rules from a bundle's ACLs");
    mine_cmd->add_option("--algorithm", algorithm)->check(CLI::IsMember({"greedy", "evolutionary"}))->capture_default_str();
    mine_cmd->add_option("--in", in_dir, "Bundle directory")->required();
    mine_cmd->add_option("--params", params_file, "Parameter JSON overriding the bundle's params.json");
    auto* seed_opt = mine_cmd->add_option("--seed", seed, "Random seed");
    mine_cmd->add_option("--out", out_path, "Mined rules file")->required();
    mine_cmd->add_option("--metadata", meta_file, "Run metadata file (default: OUT.meta.json)");

    auto* cmp_cmd = app.add_subcommand("compare", "Similarity of mined rules to reference rules");
    cmp_cmd->add_option("--mined", mined_file)->required();
    cmp_cmd->add_option("--reference", ref_file)->required();
    cmp_cmd->add_option("--bundle", bundle)->required();
    cmp_cmd->add_flag("--simplify-reference", simplify_reference, "Simplify the reference rules before comparing");
    cmp_cmd->add_flag("--json", json, "Print the full report as JSON");

    auto* eval_cmd = app.add_subcommand("evaluate", "Decide one request against a policy");
    eval_cmd->add_option("--bundle", bundle)->required();
    eval_cmd->add_option("--rules", rules_file, "Rules file (default: the bundle's rules)");
    eval_cmd->add_option("--subject", subject)->required();
    eval_cmd->add_option("--resource", resource)->required();
    eval_cmd->add_option("--action", action)->required();

    auto* stats_cmd = app.add_subcommand("stats", "Policy size statistics");
    stats_cmd->add_option("--bundle", bundle)->required();
    stats_cmd->add_option("--rules", rules_file, "Rules file (default: the bundle's rules)");
    stats_cmd->add_flag("--json", json);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kValidation;
    }

    try {
        if (*gen_cmd) return cmd_generate(policy, n, seed, out_path);
        if (*mine_cmd) return cmd_mine(algorithm, in_dir, params_file, *seed_opt ? std::optional(seed) : std::nullopt, out_path, meta_file);
        if (*cmp_cmd) return cmd_compare(mined_file, ref_file, bundle, simplify_reference, json);
        if (*eval_cmd) return cmd_evaluate(bundle, rules_file, subject, resource, action);
        if (*stats_cmd) return cmd_stats(bundle, rules_file, json);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const ModelError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const TypeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    }
    return kInternal;
}
