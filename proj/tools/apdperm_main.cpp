#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "apdperm/abelian.hpp"
#include "apdperm/constructions.hpp"
#include "apdperm/charsum.hpp"
#include "apdperm/driver.hpp"
#include "apdperm/errors.hpp"
#include "apdperm/modular.hpp"
#include "apdperm/permcore.hpp"
#include "apdperm/search.hpp"
#include "apdperm/version.hpp"

namespace {

using json = nlohmann::ordered_json;

class Stopwatch {
public:
    double ms() const {
        return std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_ =
        std::chrono::steady_clock::now();
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw apdperm::Error("cannot open " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw apdperm::Error("cannot write " + path);
    out << text;
}

json report_base(const std::string& command) {
    json j;
    j["command"] = command;
    j["version"] = apdperm::kVersion;
    return j;
}

json witness_list(const std::vector<apdperm::ApTriple>& preserved) {
    json arr = json::array();
    for (const auto& w : preserved) arr.push_back({{"a", w.a}, {"r", w.r}});
    return arr;
}

// Permutation text in the requested serialization.
std::string render_perm(const apdperm::Perm& pi, const std::string& format) {
    return format == "plain" ? apdperm::to_plain(pi) : apdperm::to_json(pi);
}

struct OutputOpts {
    std::string format = "json";
    std::string out_path;
};

void add_output_flags(CLI::App* cmd, OutputOpts& out) {
    cmd->add_option("--format", out.format, "Permutation serialization")
        ->check(CLI::IsMember({"json", "plain"}))
        ->capture_default_str();
    cmd->add_option("--out", out.out_path, "Write the permutation to a file");
}

// Report record to stdout; the permutation goes to --out when given,
// otherwise it is embedded (json) or printed with the record on stderr
// (plain, keeping stdout parseable).
void emit_perm_result(const apdperm::Perm& pi, json record,
                      const OutputOpts& out) {
    if (!out.out_path.empty()) {
        write_file(out.out_path, render_perm(pi, out.format));
        record["file"] = out.out_path;
        std::cout << record.dump() << "\n";
        return;
    }
    if (out.format == "plain") {
        std::cerr << record.dump() << "\n";
        std::cout << apdperm::to_plain(pi);
        return;
    }
    record["perm"] = json::parse(apdperm::to_json(pi));
    std::cout << record.dump() << "\n";
}

int cmd_gen(uint64_t n, const apdperm::driver::GenOptions& opts,
            const OutputOpts& out) {
    Stopwatch timer;
    apdperm::driver::GenReport rep;
    apdperm::Perm pi = apdperm::driver::generate(n, opts, &rep);

    json record = report_base("gen");
    record["n"] = n;
    record["seed"] = opts.seed;
    record["verified"] = rep.verified;
    if (rep.verified)
        record["preserved_count"] = rep.preserved_count;
    else
        record["preserved_count"] = nullptr;
    json plan = json::array();
    for (const auto& leaf : rep.leaves) {
        json row;
        row["modulus"] = leaf.modulus;
        row["planned"] = apdperm::driver::method_name(leaf.planned);
        row["used"] = apdperm::driver::method_name(leaf.used);
        if (leaf.prime != 0) row["prime"] = leaf.prime;
        if (leaf.iterations != 0) row["iterations"] = leaf.iterations;
        plan.push_back(std::move(row));
    }
    record["plan"] = std::move(plan);
    record["elapsed_ms"] = timer.ms();
    emit_perm_result(pi, std::move(record), out);
    return 0;
}

int cmd_verify(const std::string& path, unsigned threads) {
    Stopwatch timer;
    const apdperm::Perm pi = apdperm::from_any(read_file(path));
    apdperm::VerifyOptions vopts;
    vopts.threads = threads;
    const apdperm::ApReport rep = apdperm::verify(pi, vopts);

    json record = report_base("verify");
    record["file"] = path;
    record["n"] = rep.n;
    record["preserved_count"] = rep.preserved_count;
    record["verified"] = rep.preserved_count == 0;
    record["truncated"] = rep.truncated;
    record["preserved"] = witness_list(rep.preserved);
    record["elapsed_ms"] = timer.ms();
    std::cout << record.dump() << "\n";
    return rep.preserved_count == 0 ? 0 : 1;
}

int cmd_params(const std::string& case_name, uint64_t p) {
    const apdperm::CaseKind kind = apdperm::parse_case(case_name);
    const apdperm::CaseParams params = apdperm::find_params(kind, p);

    json record = report_base("params");
    record["case"] = case_name;
    record["p"] = p;
    record["t"] = params.t;
    if (params.y) record["y"] = *params.y;
    std::cout << record.dump() << "\n";
    return 0;
}

int cmd_charsum(const std::string& sum_id, uint64_t p_min, uint64_t p_max) {
    const uint64_t floor = apdperm::parameter_sum_min_prime(sum_id);
    std::cout << "p,sum_id,sum,bound,pass\n";
    bool all_pass = true;
    for (uint64_t p = std::max(p_min, floor); p <= p_max; ++p) {
        if (!apdperm::is_prime(p)) continue;
        const apdperm::ParameterSumCheck row =
            apdperm::check_parameter_sum(sum_id, p);
        all_pass = all_pass && row.pass;
        std::printf("%llu,%s,%lld,%.3f,%d\n",
                    static_cast<unsigned long long>(row.p), sum_id.c_str(),
                    static_cast<long long>(row.sum), row.bound,
                    row.pass ? 1 : 0);
    }
    return all_pass ? 0 : 1;
}

int cmd_descent(uint64_t n, const apdperm::DescentConfig& cfg,
                const OutputOpts& out) {
    Stopwatch timer;
    const apdperm::DescentOutcome outcome = apdperm::descent(n, cfg);

    json record = report_base("descent");
    record["n"] = n;
    record["seed"] = cfg.seed;
    record["success"] = outcome.success;
    record["restarts_used"] = outcome.restarts_used;
    record["iterations_used"] = outcome.iterations_used;
    record["preserved_count"] = outcome.final_preserved_count;
    record["elapsed_ms"] = timer.ms();
    if (outcome.success) {
        emit_perm_result(*outcome.perm, std::move(record), out);
        return 0;
    }
    std::cout << record.dump() << "\n";
    return 1;
}

int cmd_abelian_gen(const apdperm::AbelianGroup& group,
                    const apdperm::GroupGenOptions& opts,
                    const OutputOpts& out) {
    Stopwatch timer;
    const apdperm::Perm pi = apdperm::group_generate(group, opts);

    json record = report_base("abelian gen");
    record["group"] = group.descriptor();
    record["order"] = group.order();
    record["seed"] = opts.seed;
    record["verified"] = true;
    record["preserved_count"] = 0;
    record["elapsed_ms"] = timer.ms();
    emit_perm_result(pi, std::move(record), out);
    return 0;
}

int cmd_abelian_verify(const apdperm::AbelianGroup& group,
                       const std::string& path) {
    Stopwatch timer;
    const apdperm::Perm pi = apdperm::from_any(read_file(path));
    const apdperm::ApReport rep = apdperm::group_verify(group, pi);

    json record = report_base("abelian verify");
    record["group"] = group.descriptor();
    record["order"] = group.order();
    record["file"] = path;
    record["preserved_count"] = rep.preserved_count;
    record["verified"] = rep.preserved_count == 0;
    record["truncated"] = rep.truncated;
    record["preserved"] = witness_list(rep.preserved);
    record["elapsed_ms"] = timer.ms();
    std::cout << record.dump() << "\n";
    return rep.preserved_count == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Permutations of Z/nZ (and small abelian groups) that destroy every "
        "arithmetic progression"};
    app.require_subcommand(1);
    app.set_version_flag("--version", apdperm::kVersion);

    // gen
    uint64_t gen_n = 0;
    apdperm::driver::GenOptions gen_opts;
    bool gen_no_verify = false;
    bool gen_no_cache = false;
    OutputOpts gen_out;
    CLI::App* gen = app.add_subcommand(
        "gen", "Construct a progression-destroying permutation of Z/nZ");
    gen->add_option("n", gen_n, "Modulus")->required();
    gen->add_option("--seed", gen_opts.seed, "Seed for randomized fallbacks");
    gen->add_option("--threads", gen_opts.threads, "Verification workers");
    gen->add_flag("--no-verify", gen_no_verify, "Skip output verification");
    gen->add_flag("--no-cache", gen_no_cache, "Bypass the permutation cache");
    gen->add_option("--cache-dir", gen_opts.cache_dir,
                    "Cache directory (default: APDPERM_CACHE_DIR)");
    add_output_flags(gen, gen_out);

    // verify
    std::string verify_path;
    unsigned verify_threads = 1;
    CLI::App* verify =
        app.add_subcommand("verify", "Exhaustively check a permutation file");
    verify->add_option("file", verify_path, "Permutation file")->required();
    verify->add_option("--threads", verify_threads, "Verification workers");

    // params
    std::string params_case;
    uint64_t params_p = 0;
    CLI::App* params = app.add_subcommand(
        "params", "Find valid construction parameters for a glued case");
    params->add_option("case", params_case, "One of 2p, 3p, 5p, 7p")
        ->required();
    params->add_option("p", params_p, "Odd prime cofactor")->required();

    // charsum
    std::string charsum_id;
    uint64_t charsum_min = 0;
    uint64_t charsum_max = 0;
    CLI::App* charsum = app.add_subcommand(
        "charsum", "Character-sum existence checks over a prime range (CSV)");
    charsum
        ->add_option("sum_id", charsum_id,
                     "One of 2p-t, 2p-y, 3p-t, 5p-t, 7p-t")
        ->required();
    charsum->add_option("p_min", charsum_min, "Range start")->required();
    charsum->add_option("p_max", charsum_max, "Range end")->required();

    // descent
    uint64_t descent_n = 0;
    apdperm::DescentConfig descent_cfg;
    OutputOpts descent_out;
    CLI::App* descent_cmd = app.add_subcommand(
        "descent", "Randomized local search for a destroying permutation");
    descent_cmd->add_option("n", descent_n, "Modulus")->required();
    descent_cmd->add_option("--seed", descent_cfg.seed, "Base seed");
    descent_cmd->add_option("--budget", descent_cfg.max_iterations_per_restart,
                            "Transposition samples per restart (0: 50n^2)");
    descent_cmd->add_option("--restarts", descent_cfg.max_restarts,
                            "Restart budget");
    add_output_flags(descent_cmd, descent_out);

    // abelian
    std::string abelian_descriptor;
    std::string abelian_action;
    std::string abelian_file;
    apdperm::GroupGenOptions abelian_opts;
    bool abelian_no_cache = false;
    OutputOpts abelian_out;
    CLI::App* abelian = app.add_subcommand(
        "abelian", "Generate or verify over a product of cyclic groups");
    abelian
        ->add_option("group", abelian_descriptor,
                     "Group descriptor, e.g. \"3 x 3 x 5\"")
        ->required();
    abelian->add_option("action", abelian_action, "gen or verify")
        ->required()
        ->check(CLI::IsMember({"gen", "verify"}));
    abelian->add_option("file", abelian_file, "Permutation file (verify)");
    abelian->add_option("--seed", abelian_opts.seed,
                        "Seed for randomized fallbacks");
    abelian->add_flag("--no-cache", abelian_no_cache,
                      "Bypass the permutation cache");
    abelian->add_option("--cache-dir", abelian_opts.cache_dir,
                        "Cache directory (default: APDPERM_CACHE_DIR)");
    add_output_flags(abelian, abelian_out);

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            gen_opts.verify = !gen_no_verify;
            gen_opts.use_cache = !gen_no_cache;
            return cmd_gen(gen_n, gen_opts, gen_out);
        }
        if (verify->parsed()) return cmd_verify(verify_path, verify_threads);
        if (params->parsed()) return cmd_params(params_case, params_p);
        if (charsum->parsed())
            return cmd_charsum(charsum_id, charsum_min, charsum_max);
        if (descent_cmd->parsed())
            return cmd_descent(descent_n, descent_cfg, descent_out);
        if (abelian->parsed()) {
            const apdperm::AbelianGroup group =
                apdperm::AbelianGroup::parse(abelian_descriptor);
            abelian_opts.use_cache = !abelian_no_cache;
            if (abelian_action == "gen")
                return cmd_abelian_gen(group, abelian_opts, abelian_out);
            if (abelian_file.empty())
                throw apdperm::BadParams("abelian verify needs a file");
            return cmd_abelian_verify(group, abelian_file);
        }
    } catch (const apdperm::Unsupported& e) {
        std::cerr << "unsupported: " << e.what() << "\n";
        return 2;
    } catch (const apdperm::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
