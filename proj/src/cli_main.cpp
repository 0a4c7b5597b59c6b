// Command-line front end. All computation goes through the extern-C library
// interface; this file only parses flags, assembles the run specification
// JSON, and routes the report payload to stdout or to files.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "chaoskit.h"

namespace {

using nlohmann::json;

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    return j;
}

// "a,b,c" as literal values, or "lo:hi:count" as a uniform grid
std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        double lo = 0.0, hi = 0.0;
        int count = 0;
        if (std::sscanf(text.c_str(), "%lf:%lf:%d", &lo, &hi, &count) != 3 || count < 2)
            throw std::runtime_error("grid syntax is lo:hi:count, e.g. -5:5:101");
        for (int i = 0; i < count; ++i)
            out.push_back(lo + (hi - lo) * double(i) / double(count - 1));
        return out;
    }
    std::istringstream is(text);
    std::string tok;
    while (std::getline(is, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

// "t1,t2;t1,t2;..." pairs
std::vector<std::pair<double, double>> parse_pairs(const std::string& text) {
    std::vector<std::pair<double, double>> out;
    std::istringstream is(text);
    std::string tok;
    while (std::getline(is, tok, ';')) {
        double a = 0.0, b = 0.0;
        if (std::sscanf(tok.c_str(), "%lf,%lf", &a, &b) != 2)
            throw std::runtime_error("t-grid syntax is t1,t2;t1,t2;...");
        out.emplace_back(a, b);
    }
    return out;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::istringstream is(text);
    std::string tok;
    while (std::getline(is, tok, ',')) out.push_back(std::stoi(tok));
    return out;
}

struct CommonFlags {
    std::uint64_t seed = 1;
    bool seed_set = false;
    std::size_t mc_n = 100000;
    int bins = 64;
    int threads = 0;
    std::string x_grid, t_grid;
    std::string out_dir = ".";
    std::string format = "json";
    bool to_stdout = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_flag("--stdout", flags.to_stdout,
                  "print the report payload to stdout instead of writing files");
    cmd->add_option("--out", flags.out_dir, "output directory for report files");
    cmd->add_option("--format", flags.format, "report format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--seed", flags.seed, "master seed for all randomness")
        ->each([&flags](const std::string&) { flags.seed_set = true; });
    cmd->add_option("--mc-n", flags.mc_n, "Monte Carlo sample count");
    cmd->add_option("--bins", flags.bins, "conditional-regression bin count");
    cmd->add_option("--threads", flags.threads, "worker threads (0 = hardware)");
    cmd->add_option("--x-grid", flags.x_grid, "CF grid: values a,b,c or lo:hi:count");
    cmd->add_option("--t-grid", flags.t_grid, "joint-functional grid: t1,t2;t1,t2;...");
}

json mc_json(const CommonFlags& flags) {
    json mc{{"n", flags.mc_n}, {"seed", flags.seed}, {"bins", flags.bins},
            {"threads", flags.threads}};
    if (!flags.x_grid.empty()) mc["x_grid"] = parse_grid(flags.x_grid);
    if (!flags.t_grid.empty()) {
        json tg = json::array();
        for (auto [a, b] : parse_pairs(flags.t_grid)) tg.push_back(json::array({a, b}));
        mc["t_grid"] = std::move(tg);
    }
    return mc;
}

// invoke one ck_run_* entry point; returns the process exit code
int run(ck_status (*fn)(const char*, char**), const json& runspec, const CommonFlags& flags,
        const std::string& name) {
    char* payload = nullptr;
    const ck_status st = fn(runspec.dump().c_str(), &payload);
    if (st != CK_OK) {
        std::cerr << "error: " << ck_last_error() << "\n";
        return 1;
    }
    const json envelope = json::parse(payload);
    ck_string_free(payload);

    const std::string report = envelope.at("report").dump(2) + "\n";
    const std::string csv = envelope.value("csv", std::string{});
    if (flags.to_stdout) {
        std::cout << (flags.format == "csv" && !csv.empty() ? csv : report);
    } else {
        // files always carry the full picture: JSON report plus flat CSV
        // whenever the command has a tabular form (--format only selects the
        // --stdout payload)
        namespace fs = std::filesystem;
        fs::create_directories(flags.out_dir);
        const fs::path base = fs::path(flags.out_dir) / (name + "_report");
        std::ofstream(base.string() + ".json") << report;
        std::cerr << "wrote " << base.string() + ".json" << "\n";
        if (!csv.empty()) {
            std::ofstream(base.string() + ".csv") << csv;
            std::cerr << "wrote " << base.string() + ".csv" << "\n";
        }
    }
    return envelope.at("exit_code").get<int>();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"chaos-expansion convergence toolkit"};
    app.require_subcommand(1);

    // ---- check ----
    CommonFlags fc;
    std::string c_target, c_sequence, c_family, c_nlist;
    double c_thresh_kappa = 1e-6, c_thresh_combo = 1e-6;
    bool c_conditional = false;
    CLI::App* check = app.add_subcommand("check", "run the convergence criteria on a sequence");
    add_common(check, fc);
    check->add_option("--target", c_target, "target spec JSON file")->required();
    check->add_option("--sequence", c_sequence, "sequence file: [[n, chaos], ...]");
    check->add_option("--family", c_family, "built-in family name");
    check->add_option("--n", c_nlist, "family sizes, e.g. 2,4,8,16,32");
    check->add_option("--threshold-kappa", c_thresh_kappa, "cumulant-gap threshold");
    check->add_option("--threshold-combo", c_thresh_combo, "combination-norm threshold");
    check->add_flag("--conditional", c_conditional, "also estimate the conditional L1 norm");

    // ---- canonicalize ----
    CommonFlags fk;
    std::string k_f1, k_f2;
    CLI::App* canon =
        app.add_subcommand("canonicalize", "recover a target spec from (f1, f2) kernels");
    add_common(canon, fk);
    canon->add_option("--f1", k_f1, "order-1 kernel JSON file")->required();
    canon->add_option("--f2", k_f2, "order-2 kernel JSON file")->required();

    // ---- feasibility ----
    CommonFlags ff;
    std::string f_c, f_d, f_correlated;
    CLI::App* feas =
        app.add_subcommand("feasibility", "odd-chaos feasibility gate for a target law");
    add_common(feas, ff);
    feas->add_option("--c", f_c, "c coefficients, comma separated");
    feas->add_option("--d", f_d, "d coefficients, comma separated");
    feas->add_option("--correlated", f_correlated, "CorrelatedSpec JSON file");

    // ---- simulate ----
    CommonFlags fs_;
    std::string s_target;
    CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo validation of a target spec");
    add_common(sim, fs_);
    sim->add_option("--target", s_target, "target spec JSON file")->required();

    // ---- selftest ----
    CommonFlags ft;
    int t_seeds = 20;
    std::string t_bug;
    CLI::App* self = app.add_subcommand("selftest", "exact-identity suites");
    add_common(self, ft);
    self->add_option("--seeds", t_seeds, "number of random specs per suite");
    self->add_option("--injected-bug", t_bug, "test fixture: 'gamma-sign' breaks the pairing")
        ->group("");  // hidden; exists for mutation testing only

    CLI11_PARSE(app, argc, argv);

    try {
        if (*check) {
            json rs{{"target", read_json_file(c_target)}, {"mc", mc_json(fc)}};
            if (!c_sequence.empty()) rs["sequence"] = read_json_file(c_sequence);
            if (!c_family.empty()) {
                rs["family"] = c_family;
                rs["n"] = parse_int_list(c_nlist);
            }
            rs["thresholds"] = json{{"kappa", c_thresh_kappa}, {"combo", c_thresh_combo}};
            rs["conditional"] = c_conditional;
            if (fc.seed_set) rs["seed"] = fc.seed;
            return run(&ck_run_check, rs, fc, "check");
        }
        if (*canon) {
            json rs{{"f1", read_json_file(k_f1)}, {"f2", read_json_file(k_f2)},
                    {"mc", mc_json(fk)}};
            return run(&ck_run_canonicalize, rs, fk, "canonicalize");
        }
        if (*feas) {
            json rs{{"mc", mc_json(ff)}};
            if (!f_correlated.empty()) {
                rs["correlated"] = read_json_file(f_correlated);
            } else if (!f_c.empty()) {
                rs["c"] = parse_grid(f_c);
                if (!f_d.empty()) rs["d"] = parse_grid(f_d);
            } else {
                throw std::runtime_error("feasibility needs --c (and --d) or --correlated");
            }
            return run(&ck_run_feasibility, rs, ff, "feasibility");
        }
        if (*sim) {
            json rs{{"target", read_json_file(s_target)}, {"mc", mc_json(fs_)}};
            if (fs_.seed_set) rs["seed"] = fs_.seed;
            return run(&ck_run_simulate, rs, fs_, "simulate");
        }
        if (*self) {
            json rs{{"seeds", t_seeds}};
            if (ft.seed_set) rs["seed"] = ft.seed;
            if (!t_bug.empty()) rs["injected_bug"] = t_bug;
            return run(&ck_run_selftest, rs, ft, "selftest");
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
