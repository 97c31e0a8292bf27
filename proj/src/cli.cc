// Copyright 2026 The ksep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ksep/cli.h"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "ksep/criterion.h"
#include "ksep/errors.h"
#include "ksep/oracle.h"
#include "ksep/partitions.h"
#include "ksep/search.h"

#ifndef KSEP_VERSION
#define KSEP_VERSION "dev"
#endif

namespace ksep::cli {

namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

int get_int(const FamilySpec &f, const std::string &key, std::optional<int> fallback = std::nullopt) {
    auto it = f.params.find(key);
    if (it == f.params.end()) {
        if (fallback) {
            return *fallback;
        }
        throw FormatError("family '" + f.name + "': missing parameter '" + key + "'");
    }
    try {
        std::size_t used = 0;
        int value = std::stoi(it->second, &used);
        if (used != it->second.size()) {
            throw std::invalid_argument(it->second);
        }
        return value;
    } catch (const std::logic_error &) {
        throw FormatError("family '" + f.name + "': parameter '" + key + "' is not an integer: " + it->second);
    }
}

double get_double(const FamilySpec &f, const std::string &key) {
    auto it = f.params.find(key);
    if (it == f.params.end()) {
        throw FormatError("family '" + f.name + "': missing parameter '" + key + "'");
    }
    try {
        std::size_t used = 0;
        double value = std::stod(it->second, &used);
        if (used != it->second.size()) {
            throw std::invalid_argument(it->second);
        }
        return value;
    } catch (const std::logic_error &) {
        throw FormatError("family '" + f.name + "': parameter '" + key + "' is not a number: " + it->second);
    }
}

void allow_only(const FamilySpec &f, std::initializer_list<const char *> keys, std::initializer_list<const char *> flags = {}) {
    for (const auto &[k, _] : f.params) {
        if (std::find_if(keys.begin(), keys.end(), [&](const char *a) { return k == a; }) == keys.end()) {
            throw FormatError("family '" + f.name + "': unknown parameter '" + k + "'");
        }
    }
    for (const auto &flag : f.flags) {
        if (std::find_if(flags.begin(), flags.end(), [&](const char *a) { return flag == a; }) == flags.end()) {
            throw FormatError("family '" + f.name + "': unknown token '" + flag + "'");
        }
    }
}

struct StateSource {
    std::string state_file;
    std::string family;

    DensityMatrix load() const {
        if (state_file.empty() == family.empty()) {
            throw FormatError("exactly one of --state or --family is required");
        }
        return family.empty() ? load_state(state_file) : build_family(family);
    }

    std::string describe() const { return family.empty() ? state_file : family; }
};

struct SearchFlags {
    SearchConfig cfg;

    void add_to(CLI::App *app) {
        app->add_option("--restarts", cfg.restarts, "Independent hill-climbing restarts")->capture_default_str();
        app->add_option("--max-iters", cfg.max_iters, "Iterations per restart")->capture_default_str();
        app->add_option("--step-init", cfg.step_init, "Initial perturbation scale")->capture_default_str();
        app->add_option("--step-decay", cfg.step_decay, "Geometric step decay per iteration")->capture_default_str();
        app->add_option("--convergence-eps", cfg.convergence_eps, "Stop a restart once the step falls below this")
            ->capture_default_str();
    }
};

json manifest(const std::string &command, json inputs, std::uint64_t seed, Clock::time_point start) {
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
    return {{"command", command},
            {"inputs", std::move(inputs)},
            {"seed", seed},
            {"tool_version", KSEP_VERSION},
            {"wall_time_ms", elapsed}};
}

std::string csv_quote(const std::string &s) {
    return "\"" + s + "\"";
}

ProductProbe resolve_probe(const std::string &spec, const Dims &dims, std::uint64_t seed) {
    if (spec == "ghz-pair") {
        return canonical_probe(GhzPair{}, dims);
    }
    if (spec == "random") {
        return canonical_probe(RandomProbe{seed}, dims);
    }
    if (spec.rfind("basis:", 0) == 0) {
        auto rest = spec.substr(6);
        auto comma = rest.find(',');
        if (comma == std::string::npos) {
            throw FormatError("probe 'basis:I,J' needs two flat basis indices");
        }
        try {
            return canonical_probe(BasisPair{std::stoul(rest.substr(0, comma)), std::stoul(rest.substr(comma + 1))},
                                   dims);
        } catch (const std::logic_error &e) {
            if (dynamic_cast<const Error *>(&e)) {
                throw;
            }
            throw FormatError("probe 'basis:I,J': indices must be non-negative integers");
        }
    }
    std::ifstream in(spec);
    if (!in) {
        throw FormatError("probe '" + spec + "' is neither ghz-pair, random, basis:I,J nor a readable file");
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error &e) {
        throw FormatError(spec + ": probe file is not valid JSON: " + e.what());
    }
    auto probe = ProductProbe::from_json(j);
    probe.validate(dims);
    return probe;
}

int verdict_code(const CriterionReport &r) {
    return r.verdict == Verdict::NotKSeparable ? kDetected : kInconclusive;
}

}  // namespace

FamilySpec FamilySpec::parse(const std::string &text) {
    FamilySpec f;
    auto colon = text.find(':');
    f.name = text.substr(0, colon);
    if (f.name.empty()) {
        throw FormatError("family descriptor '" + text + "': missing name");
    }
    if (colon == std::string::npos) {
        return f;
    }
    std::stringstream rest(text.substr(colon + 1));
    std::string token;
    while (std::getline(rest, token, ',')) {
        if (token.empty()) {
            throw FormatError("family descriptor '" + text + "': empty field");
        }
        auto eq = token.find('=');
        if (eq == std::string::npos) {
            f.flags.push_back(token);
        } else if (eq == 0 || eq + 1 == token.size()) {
            throw FormatError("family descriptor '" + text + "': malformed field '" + token + "'");
        } else {
            f.params[token.substr(0, eq)] = token.substr(eq + 1);
        }
    }
    return f;
}

DensityMatrix build_family(const std::string &descriptor) {
    auto f = FamilySpec::parse(descriptor);
    if (f.name == "ghz") {
        allow_only(f, {"n", "d"});
        return ghz(get_int(f, "n"), get_int(f, "d", 2)).density();
    }
    if (f.name == "w") {
        allow_only(f, {"n"});
        return w_state(get_int(f, "n")).density();
    }
    if (f.name == "mixed") {
        allow_only(f, {"n", "d"}, {"I"});
        return maximally_mixed(Dims(get_int(f, "n"), get_int(f, "d", 2)));
    }
    if (f.name == "product") {
        allow_only(f, {"n", "d"});
        int n = get_int(f, "n");
        int d = get_int(f, "d", 2);
        if (n < 1 || d < 2) {
            throw ParameterError("product: need n >= 1 and d >= 2");
        }
        std::vector<ComplexVec> sites(n, ComplexVec(d));
        for (auto &s : sites) {
            s[0] = 1.0;
        }
        return product_pure(sites).density();
    }
    if (f.name == "noisy-ghz") {
        allow_only(f, {"n", "d", "p"});
        return white_noise(ghz(get_int(f, "n"), get_int(f, "d", 2)).density(), get_double(f, "p"));
    }
    if (f.name == "noisy-w") {
        allow_only(f, {"n", "p"});
        return white_noise(w_state(get_int(f, "n")).density(), get_double(f, "p"));
    }
    if (f.name == "separable") {
        allow_only(f, {"n", "d", "terms", "seed"});
        int n = get_int(f, "n");
        if (n < 1) {
            throw ParameterError("separable: need n >= 1");
        }
        Rng rng(static_cast<std::uint64_t>(get_int(f, "seed", 1)));
        return random_separable_mixture(Dims(n, get_int(f, "d", 2)), get_int(f, "terms", 10), rng);
    }
    if (f.name == "random") {
        allow_only(f, {"n", "d", "rank", "seed"});
        int n = get_int(f, "n");
        if (n < 1) {
            throw ParameterError("random: need n >= 1");
        }
        Rng rng(static_cast<std::uint64_t>(get_int(f, "seed", 1)));
        return random_density(Dims(n, get_int(f, "d", 2)), rng, get_int(f, "rank", 0));
    }
    throw FormatError("unknown state family '" + f.name + "'");
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    const auto start = Clock::now();
    CLI::App app{"k-separability criterion evaluator and entanglement detector", "ksep"};
    app.require_subcommand(1);
    app.set_version_flag("--version", KSEP_VERSION);

    int threads = 0;
    std::uint64_t seed = 0;
    app.add_option("--threads", threads, "Worker threads (0 = all cores); never changes results")
        ->capture_default_str();

    // eval
    StateSource eval_src;
    std::string probe_spec = "ghz-pair";
    int eval_k = 2;
    double eval_tol = kDefaultCriterionTolerance;
    std::string eval_format = "json";
    auto *eval = app.add_subcommand("eval", "Evaluate the criterion for one probe");
    eval->add_option("--state", eval_src.state_file, "State file (JSON)");
    eval->add_option("--family", eval_src.family, "State family descriptor, e.g. ghz:n=3,d=2");
    eval->add_option("--probe", probe_spec, "ghz-pair | random | basis:I,J | probe JSON file")->capture_default_str();
    eval->add_option("--k", eval_k, "Separability order")->capture_default_str();
    eval->add_option("--tolerance", eval_tol, "Detection threshold on the left-hand side")->capture_default_str();
    eval->add_option("--seed", seed, "Seed for --probe random")->capture_default_str();
    eval->add_option("--format", eval_format, "Output format")->check(CLI::IsMember({"json", "csv"}));

    // detect
    StateSource detect_src;
    int detect_k = 2;
    SearchFlags detect_flags;
    auto *detect = app.add_subcommand("detect", "Search for a violating probe");
    detect->add_option("--state", detect_src.state_file, "State file (JSON)");
    detect->add_option("--family", detect_src.family, "State family descriptor");
    detect->add_option("--k", detect_k, "Separability order")->capture_default_str();
    detect->add_option("--tolerance", detect_flags.cfg.tolerance, "Detection threshold")->capture_default_str();
    detect->add_option("--seed", detect_flags.cfg.seed, "Search seed")->capture_default_str();
    detect_flags.add_to(detect);

    // scan
    StateSource scan_src;
    int scan_k = 2;
    double resolution = 1e-3;
    std::string scan_mode = "auto";
    bool trace = false;
    SearchFlags scan_flags;
    auto *scan = app.add_subcommand("scan", "White-noise detection threshold");
    scan->add_option("--state", scan_src.state_file, "Target state file (JSON)");
    scan->add_option("--family", scan_src.family, "Target state family descriptor");
    scan->add_option("--k", scan_k, "Separability order")->capture_default_str();
    scan->add_option("--resolution", resolution, "Bracket width")->capture_default_str();
    scan->add_option("--mode", scan_mode, "Refinement strategy")
        ->check(CLI::IsMember({"auto", "bisection", "dense"}))
        ->capture_default_str();
    scan->add_flag("--trace", trace, "Write one CSV row per evaluated noise level instead of JSON");
    scan->add_option("--tolerance", scan_flags.cfg.tolerance, "Detection threshold")->capture_default_str();
    scan->add_option("--seed", scan_flags.cfg.seed, "Search seed")->capture_default_str();
    scan_flags.add_to(scan);

    // oracle-check
    int oc_n = 3;
    int oc_dmax = 2;
    int oc_trials = 200;
    std::uint64_t oc_seed = 0;
    double oc_tol = 1e-10;
    auto *oracle_check = app.add_subcommand("oracle-check", "Compare the fast path against the two-copy oracle");
    oracle_check->add_option("--n", oc_n, "Sites")->capture_default_str();
    oracle_check->add_option("--dmax,--d", oc_dmax, "Largest site dimension (site dims drawn from 2..dmax)")
        ->capture_default_str();
    oracle_check->add_option("--trials", oc_trials, "Random cases")->capture_default_str();
    oracle_check->add_option("--seed", oc_seed, "Seed")->capture_default_str();
    oracle_check->add_option("--tolerance", oc_tol, "Maximum allowed deviation")->capture_default_str();

    // partitions
    int pn = 0;
    int pk = 0;
    bool count_only = false;
    auto *parts = app.add_subcommand("partitions", "List partitions of n sites into k blocks");
    parts->add_option("--n", pn, "Sites")->required();
    parts->add_option("--k", pk, "Blocks")->required();
    parts->add_flag("--count-only", count_only, "Print only the count");

    std::vector<const char *> argv;
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError &e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return 0;
        }
        app.exit(e, out, err);
        return kInputError;
    }

    try {
        if (*eval) {
            auto rho = eval_src.load();
            auto probe = resolve_probe(probe_spec, rho.dims(), seed);
            auto report = evaluate_parallel(rho, probe, eval_k, eval_tol, threads);
            if (eval_format == "csv") {
                out << "k,lhs,first_term,verdict,tolerance\n";
                out << report.k << ',' << json(report.lhs).dump() << ',' << json(report.first_term).dump() << ','
                    << to_string(report.verdict) << ',' << json(report.tolerance).dump() << '\n';
                out << "partition,value\n";
                for (const auto &t : report.partition_terms) {
                    out << csv_quote(t.partition.to_string()) << ',' << json(t.value).dump() << '\n';
                }
            } else {
                json doc = {{"manifest", manifest("eval", {{"state", eval_src.describe()}, {"probe", probe_spec}}, seed, start)},
                            {"report", report.to_json()}};
                out << doc.dump(2) << '\n';
            }
            return verdict_code(report);
        }

        if (*detect) {
            auto rho = detect_src.load();
            auto result = optimize_probe(rho, detect_k, detect_flags.cfg, threads);
            json inputs = {{"state", detect_src.describe()}, {"search_config", detect_flags.cfg.to_json()}};
            json doc = {{"manifest", manifest("detect", inputs, detect_flags.cfg.seed, start)},
                        {"search", result.to_json()}};
            out << doc.dump(2) << '\n';
            return verdict_code(result.best);
        }

        if (*scan) {
            auto target = scan_src.load();
            ScanMode mode = scan_mode == "bisection" ? ScanMode::Bisection
                            : scan_mode == "dense"   ? ScanMode::DenseGrid
                                                     : ScanMode::Auto;
            auto result = scan_noise(target, scan_k, resolution, scan_flags.cfg, mode, threads);
            if (trace) {
                out << "phase,p,lhs,detected\n";
                for (const auto &s : result.trace) {
                    out << s.phase << ',' << json(s.p).dump() << ',' << json(s.lhs).dump() << ','
                        << (s.detected ? 1 : 0) << '\n';
                }
                err << "p_star=" << result.p_star << " bracket=[" << result.p_lo << ", " << result.p_hi << "]\n";
            } else {
                json inputs = {{"state", scan_src.describe()},
                               {"k", scan_k},
                               {"resolution", resolution},
                               {"mode", scan_mode},
                               {"search_config", scan_flags.cfg.to_json()}};
                json samples = json::array();
                for (const auto &s : result.trace) {
                    samples.push_back({{"phase", s.phase}, {"p", s.p}, {"lhs", s.lhs}, {"detected", s.detected}});
                }
                json doc = {{"manifest", manifest("scan", inputs, scan_flags.cfg.seed, start)},
                            {"scan", result.to_json()},
                            {"trace", std::move(samples)}};
                out << doc.dump(2) << '\n';
            }
            return kInconclusive;
        }

        if (*oracle_check) {
            if (oc_n < 1 || oc_dmax < 2 || oc_trials < 1) {
                throw ParameterError("oracle-check: need n >= 1, dmax >= 2, trials >= 1");
            }
            oracle::check_guard(Dims(oc_n, oc_dmax));
            Rng rng(oc_seed);
            std::uniform_int_distribution<int> dim_dist(2, oc_dmax);
            std::uniform_int_distribution<int> k_dist(1, oc_n);
            double max_term = 0;
            double max_first = 0;
            double max_lhs = 0;
            std::size_t comparisons = 0;
            for (int t = 0; t < oc_trials; t++) {
                Dims dims(oc_n);
                for (auto &d : dims) {
                    d = dim_dist(rng);
                }
                auto rho = random_density(dims, rng);
                auto probe = random_probe(dims, rng);
                int k = k_dist(rng);
                auto fast = evaluate(rho, probe, k);
                auto slow = oracle::oracle_evaluate(rho, probe, k);
                max_first = std::max(max_first, std::abs(fast.first_term - slow.first_term));
                max_lhs = std::max(max_lhs, std::abs(fast.lhs - slow.lhs));
                for (std::size_t p = 0; p < fast.partition_terms.size(); p++) {
                    max_term = std::max(max_term,
                                        std::abs(fast.partition_terms[p].value - slow.partition_terms[p].value));
                    comparisons++;
                }
            }
            double worst = std::max({max_term, max_first, max_lhs});
            bool passed = worst <= oc_tol;
            json inputs = {{"n", oc_n}, {"dmax", oc_dmax}, {"trials", oc_trials}, {"tolerance", oc_tol}};
            json doc = {{"manifest", manifest("oracle-check", inputs, oc_seed, start)},
                        {"summary",
                         {{"partition_comparisons", comparisons},
                          {"max_term_deviation", max_term},
                          {"max_first_term_deviation", max_first},
                          {"max_lhs_deviation", max_lhs},
                          {"passed", passed}}}};
            out << doc.dump(2) << '\n';
            if (!passed) {
                err << "oracle-check: max deviation " << worst << " exceeds " << oc_tol << '\n';
                return kCheckFailed;
            }
            return 0;
        }

        if (*parts) {
            if (pn < 1 || pn > 20 || pk < 1 || pk > pn) {
                throw ParameterError("partitions: need 1 <= k <= n <= 20");
            }
            auto count = stirling2(pn, pk);
            json doc = {{"manifest", manifest("partitions", {{"n", pn}, {"k", pk}}, 0, start)},
                        {"n", pn},
                        {"k", pk},
                        {"count", count}};
            if (!count_only) {
                if (count > 1'000'000) {
                    throw ParameterError("partitions: " + std::to_string(count) +
                                         " partitions is too many to list; use --count-only");
                }
                json listing = json::array();
                KPartitionGenerator gen(pn, pk);
                while (auto p = gen.next()) {
                    listing.push_back(p->to_string());
                }
                doc["partitions"] = std::move(listing);
            }
            out << doc.dump(2) << '\n';
            return 0;
        }
    } catch (const NumericalError &e) {
        err << "error: " << e.what() << '\n';
        return kCheckFailed;
    } catch (const Error &e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::exception &e) {
        err << "internal error: " << e.what() << '\n';
        return kCheckFailed;
    }
    return kInputError;
}

}  // namespace ksep::cli
