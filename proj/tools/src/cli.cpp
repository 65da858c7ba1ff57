// Copyright 2026 The upsum Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "upsum/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "upsum/circuits.hpp"
#include "upsum/enumerator.hpp"
#include "upsum/events.hpp"
#include "upsum/machine.hpp"
#include "upsum/pathsum.hpp"
#include "upsum/translate.hpp"

namespace upsum::cli {

using nlohmann::json;

namespace {

// A verdict failure that still produced a report.
struct VerdictFailure {
    json report;
};

json dyadic_json(const DyadicRational &d) {
    return {{"exact", d.to_string()}, {"float", d.to_double()}};
}

std::string render_exact(const ExactAmplitude &amp) {
    const ExactAmplitude r = amp.reduced();
    if (r.coeffs().empty()) {
        return "0";
    }
    const PhaseFraction half = PhaseFraction::from_grid(1, 1);
    std::string body;
    for (const auto &[q, c] : r.coeffs()) {
        const bool minus = q == half;
        if (body.empty()) {
            body += minus ? "-" : "";
        } else {
            body += minus ? " - " : " + ";
        }
        body += c.to_string();
        if (!q.is_zero() && !minus) {
            body += "*e(" + q.to_string() + ")";
        }
    }
    const std::int64_t h = r.scale_half_exponent();
    if (h == 0) {
        return body;
    }
    return "2^(-" + std::to_string(h) + "/2)*(" + body + ")";
}

json amplitude_json(const ExactAmplitude &amp) {
    const ExactAmplitude r = amp.reduced();
    json terms = json::array();
    for (const auto &[q, c] : r.coeffs()) {
        terms.push_back({{"phase", q.to_string()}, {"coeff", c.to_string()}});
    }
    const std::complex<double> z = r.to_complex();
    return {{"exact", render_exact(r)},
            {"half_exponent", r.scale_half_exponent()},
            {"terms", std::move(terms)},
            {"re", z.real()},
            {"im", z.imag()},
            {"abs2", std::norm(z)}};
}

json budget_json(const ExploreBudget &b) {
    return {{"max_len", b.max_len}, {"max_steps", b.max_steps}};
}

std::string dialect_str(Dialect d) { return std::string(1, dialect_name(d)); }

json report_json(const ExplorationReport &rep, bool with_records) {
    json j = {{"budget", budget_json(rep.budget)},
              {"dialect", dialect_str(rep.dialect)},
              {"machine_hash", rep.machine_hash},
              {"root", rep.root.to_string()},
              {"halted_count", rep.halted.size()},
              {"halted_mass", dyadic_json(rep.halted_mass)},
              {"unresolved_mass", dyadic_json(rep.unresolved_mass)},
              {"kraft", kraft_check(rep)}};
    if (with_records) {
        json records = json::array();
        for (const HaltingRecord &r : rep.halted) {
            records.push_back({{"program", r.program.to_string()},
                               {"output", r.output.to_string()},
                               {"phase", r.phase.to_string()},
                               {"steps", r.steps},
                               {"measure", r.measure.to_string()}});
        }
        j["records"] = std::move(records);
    }
    return j;
}

void flatten(const json &j, const std::string &prefix, std::ostream &out) {
    if (j.is_object()) {
        if (j.empty()) {
            out << prefix << " = {}\n";
        }
        for (const auto &[k, v] : j.items()) {
            flatten(v, prefix.empty() ? k : prefix + "." + k, out);
        }
    } else if (j.is_array()) {
        if (j.empty()) {
            out << prefix << " = []\n";
        }
        for (std::size_t i = 0; i < j.size(); ++i) {
            flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
        }
    } else if (j.is_string()) {
        out << prefix << " = " << j.get<std::string>() << "\n";
    } else {
        out << prefix << " = " << j.dump() << "\n";
    }
}

void emit(const json &report, const std::string &format, std::ostream &out) {
    if (format == "text") {
        flatten(report, "", out);
    } else {
        out << report.dump(2) << "\n";
    }
}

std::string read_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ExploreBudget make_budget(std::uint32_t max_len, std::uint64_t max_steps) {
    ExploreBudget b{max_len, max_steps};
    b.validate();
    return b;
}

// ------------------------------------------------------------- subcommands

struct ExploreArgs {
    std::uint32_t max_len = 0;
    std::uint64_t max_steps = 0;
    std::string dialect = "A";
};

void add_explore_flags(CLI::App *sub, ExploreArgs &a) {
    sub->add_option("--max-len", a.max_len, "Longest program explored")->required();
    sub->add_option("--max-steps", a.max_steps, "Step budget per program")->required();
    sub->add_option("--dialect", a.dialect, "A or B")->check(CLI::IsMember({"A", "B", "a", "b"}));
}

json cmd_enumerate(const ExploreArgs &a, const std::string &cache, bool records,
                   std::ostream &err) {
    const ExploreBudget budget = make_budget(a.max_len, a.max_steps);
    const Dialect dialect = parse_dialect(a.dialect);
    ExplorationReport rep;
    if (!cache.empty() && std::filesystem::exists(cache)) {
        const ExplorationReport cached = load_cache(cache);
        if (cached.dialect != dialect) {
            throw CacheError("cache " + cache + " holds dialect " + dialect_str(cached.dialect) +
                             ", requested " + dialect_str(dialect));
        }
        rep = resume(cached, budget);
        err << "upsum: resumed from " << cache << " (" << cached.halted.size()
            << " cached records)\n";
    } else {
        rep = explore(budget, dialect);
    }
    if (!cache.empty()) {
        save_cache(rep, cache);
    }
    json j = report_json(rep, records);
    j["command"] = "enumerate";
    return j;
}

json cmd_sigma(const ExploreArgs &a, const std::string &mode) {
    const ExploreBudget budget = make_budget(a.max_len, a.max_steps);
    const ExplorationReport rep = explore(budget, parse_dialect(a.dialect));
    json j = {{"command", "sigma"},
              {"mode", mode},
              {"budget", budget_json(budget)},
              {"dialect", dialect_str(rep.dialect)},
              {"halted_mass", dyadic_json(rep.halted_mass)},
              {"unresolved_mass", dyadic_json(rep.unresolved_mass)}};
    if (mode == "paper") {
        j["sigma"] = amplitude_json(sigma_paper(rep));
    } else {
        const Enclosure e = sigma_enclosure(rep);
        j["center"] = amplitude_json(e.center);
        j["radius"] = dyadic_json(e.radius);
    }
    return j;
}

struct EventArgs {
    std::string header;
    std::string actions;
    unsigned k = 0;
    std::vector<std::string> grains;
    double epsilon = 0.0;
    std::uint64_t max_steps = 10000;
    std::string dialect = "A";
    bool strict = false;
};

std::vector<PhaseFraction> parse_actions(const std::string &text) {
    std::vector<PhaseFraction> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(PhaseFraction::parse(item));
    }
    return out;
}

json cmd_event(const EventArgs &a) {
    if (!(a.epsilon > 0.0 && a.epsilon <= 1.0)) {
        throw CLI::ValidationError("--epsilon", "must lie in (0, 1]");
    }
    const BitString header = BitString::parse(a.header);
    PathEnsemble e;
    if (!a.actions.empty()) {
        e = PathEnsemble::from_actions(header, parse_actions(a.actions));
        if (e.path_len() != a.k) {
            throw EventError("--actions lists " + std::to_string(e.path_count()) +
                             " phases but --k is " + std::to_string(a.k));
        }
    } else {
        e = PathEnsemble::from_machine(header, a.k, a.max_steps, parse_dialect(a.dialect));
    }

    std::vector<CoarseGrain> grains;
    for (const std::string &spec : a.grains) {
        grains.push_back(CoarseGrain::parse(spec, a.k));
    }
    CoarseGrain covered(a.k);
    for (const CoarseGrain &g : grains) {
        covered = covered.disjoint_union(g); // throws on overlap
    }
    const bool partition = covered == CoarseGrain::full(a.k);

    json j = {{"command", "event"},
              {"header", header.to_string()},
              {"k", a.k},
              {"epsilon", a.epsilon},
              {"path_weight", dyadic_json(e.path_weight())},
              {"partition", partition},
              {"source", a.actions.empty() ? "machine" : "table"}};
    if (a.actions.empty()) {
        j["dialect"] = a.dialect == "b" || a.dialect == "B" ? "B" : "A";
        j["max_steps"] = a.max_steps;
    }
    if (a.k <= 10) {
        json paths = json::array();
        for (std::size_t w = 0; w < e.path_count(); ++w) {
            json p = {{"path", BitString::from_uint(w, a.k).to_string()},
                      {"action", e.action(w).to_string()}};
            if (!e.outputs().empty()) {
                p["output"] = e.outputs()[w].to_string();
            }
            paths.push_back(std::move(p));
        }
        j["paths"] = std::move(paths);
    }

    std::vector<ExactAmplitude> amps;
    double total = 0.0;
    for (const CoarseGrain &g : grains) {
        amps.push_back(grain_amplitude(e, g));
        total += std::norm(amps.back().to_complex());
    }
    json gj = json::array();
    for (std::size_t i = 0; i < grains.size(); ++i) {
        const double weight = std::norm(amps[i].to_complex());
        json g = {{"spec", a.grains[i]},
                  {"size", grains[i].size()},
                  {"amplitude", amplitude_json(amps[i])},
                  {"weight", weight}};
        if (partition && total > 0.0) {
            g["probability"] = weight / total;
        }
        gj.push_back(std::move(g));
    }
    j["grains"] = std::move(gj);

    bool all_consistent = true;
    json pairs = json::array();
    for (std::size_t i = 0; i < grains.size(); ++i) {
        for (std::size_t m = i + 1; m < grains.size(); ++m) {
            const Decoherence d = decoherence(amps[i], amps[m]);
            const double joint = std::norm((amps[i] + amps[m]).to_complex());
            json p = {{"first", i},
                      {"second", m},
                      {"decoherence", d.value},
                      {"exact_zero", d.exact_zero},
                      {"sum_rule_residual", joint - std::norm(amps[i].to_complex()) -
                                                std::norm(amps[m].to_complex())}};
            if (amps[i].is_zero() || amps[m].is_zero()) {
                p["ratio"] = nullptr;
                p["consistent"] = nullptr;
            } else {
                const ConsistencyVerdict v = consistency(amps[i], amps[m], a.epsilon);
                p["ratio"] = v.ratio;
                p["consistent"] = v.consistent;
                all_consistent = all_consistent && v.consistent;
            }
            pairs.push_back(std::move(p));
        }
    }
    j["pairs"] = std::move(pairs);
    j["all_consistent"] = all_consistent;
    if (partition) {
        ExactAmplitude all;
        for (const ExactAmplitude &amp : amps) {
            all += amp;
        }
        j["sum_rule_residual"] = std::norm(all.to_complex()) - total;
    }
    if (a.strict && !all_consistent) {
        throw VerdictFailure{j};
    }
    return j;
}

struct CircuitArgs {
    std::string file;
    std::string in;
    std::string out;
    bool check_oracle = false;
    bool no_prune = false;
};

json cmd_circuit_amp(const CircuitArgs &a) {
    const Circuit c = Circuit::parse(read_file(a.file));
    const BitString in = BitString::parse(a.in);
    const BitString out = BitString::parse(a.out);
    const PathSumResult r = pathsum_amplitude(c, in, out, {.prune = !a.no_prune});
    json j = {{"command", "circuit amp"},
              {"qubits", c.qubits()},
              {"gates", c.gates().size()},
              {"hadamards", c.hadamard_count()},
              {"in", in.to_string()},
              {"out", out.to_string()},
              {"amplitude", amplitude_json(r.amplitude)},
              {"path_count", r.path_count},
              {"paths_examined", r.paths_examined}};
    if (a.check_oracle) {
        const std::complex<double> z = statevector_oracle(c, in).at(basis_index(out));
        const double error = std::abs(z - r.amplitude.to_complex());
        const bool agree = error <= 1e-9;
        j["oracle"] = {{"re", z.real()}, {"im", z.imag()}, {"abs_error", error},
                       {"tolerance", 1e-9}, {"agree", agree}};
        if (!agree) {
            throw VerdictFailure{j};
        }
    }
    return j;
}

json cmd_circuit_realpart(const std::string &file) {
    const Circuit v = Circuit::parse(read_file(file));
    const RealPartConstruction rc = realpart_construction(v);
    const ExactAmplitude expectation = diagonal_expectation(v);
    const double re = expectation.to_complex().real();
    json lines = json::array();
    std::istringstream text(rc.circuit.to_text());
    for (std::string line; std::getline(text, line);) {
        lines.push_back(line);
    }
    json j = {{"command", "circuit realpart"},
              {"qubits", v.qubits()},
              {"expectation", amplitude_json(expectation)},
              {"re", re},
              {"predicted_probability", rc.probability_factor * re * re},
              {"recipe", rc.recipe},
              {"initial_state", rc.initial_state.to_string()},
              {"measured_outcome", rc.measured_outcome.to_string()},
              {"construction", std::move(lines)}};
    if (rc.circuit.qubits() <= kStateVectorMaxQubits) {
        const auto psi = statevector_oracle(rc.circuit, rc.initial_state);
        j["oracle_probability"] = std::norm(psi.at(basis_index(rc.measured_outcome)));
    }
    return j;
}

json cmd_xlate(std::uint32_t max_len, std::uint64_t max_steps) {
    const ExploreBudget budget = make_budget(max_len, max_steps);
    const SubintegralVerdict v = subintegral_check(budget);
    json j = {{"command", "xlate-check"},
              {"budget", budget_json(budget)},
              {"pass", v.pass},
              {"message", v.message},
              {"records_compared", v.records_compared},
              {"restricted_unresolved", dyadic_json(v.restricted.unresolved_mass)},
              {"translated_unresolved", dyadic_json(v.translated.unresolved_mass)},
              {"restricted_sum", amplitude_json(v.restricted_sum)},
              {"translated_sum", amplitude_json(v.translated_sum)},
              {"first_mismatch", v.first_mismatch ? json(v.first_mismatch->to_string()) : json()}};
    if (!v.pass) {
        throw VerdictFailure{j};
    }
    return j;
}

json cmd_run(const std::string &input, std::uint64_t max_steps, const std::string &dialect,
             bool trace) {
    FixedBits source(BitString::parse(input));
    std::ostringstream lines;
    const ExecResult r = run(source, max_steps, parse_dialect(dialect), InstructionSet::standard(),
                             trace ? &lines : nullptr);
    json j = {{"command", "run"},
              {"input", input},
              {"max_steps", max_steps},
              {"dialect", dialect_str(parse_dialect(dialect))},
              {"halted", r.halted()},
              {"steps", r.steps_used},
              {"source_exhausted", r.source_exhausted}};
    if (r.halted()) {
        j["program"] = r.program.to_string();
        j["output"] = r.output.to_string();
        j["phase"] = r.phase.to_string();
    }
    if (trace) {
        json t = json::array();
        std::istringstream in(lines.str());
        for (std::string line; std::getline(in, line);) {
            t.push_back(line);
        }
        j["trace"] = std::move(t);
    }
    return j;
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Exact universal path sums over a prefix-free machine", "upsum"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string format = "json";
    app.add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));

    ExploreArgs ex;
    std::string cache;
    bool no_records = false;
    CLI::App *enumerate_cmd = app.add_subcommand("enumerate", "Explore the program tree");
    add_explore_flags(enumerate_cmd, ex);
    enumerate_cmd->add_option("--cache", cache, "Cache file to resume from and update");
    enumerate_cmd->add_flag("--no-records", no_records, "Omit the halting records");

    std::string mode = "paper";
    CLI::App *sigma_cmd = app.add_subcommand("sigma", "Truncated path sum");
    add_explore_flags(sigma_cmd, ex);
    sigma_cmd->add_option("--mode", mode, "paper or enclosure")
        ->check(CLI::IsMember({"paper", "enclosure"}));

    EventArgs ev;
    CLI::App *event_cmd = app.add_subcommand("event", "Coarse-grained path events");
    event_cmd->add_option("--header", ev.header, "Header bits p0")->required();
    event_cmd->add_option("--k", ev.k, "Path length")->required();
    event_cmd->add_option("--grain", ev.grains, "Pattern like 0**1 or list like 00,11")
        ->required()
        ->take_all();
    event_cmd->add_option("--epsilon", ev.epsilon, "Consistency threshold in (0, 1]")->required();
    event_cmd->add_option("--max-steps", ev.max_steps, "Step budget per path");
    event_cmd->add_option("--dialect", ev.dialect, "A or B")
        ->check(CLI::IsMember({"A", "B", "a", "b"}));
    event_cmd->add_option("--actions", ev.actions,
                          "Comma-separated phases S(w) instead of running the machine");
    event_cmd->add_flag("--strict", ev.strict, "Exit 1 if any pair is inconsistent");

    CircuitArgs ca;
    CLI::App *circuit_cmd = app.add_subcommand("circuit", "Clifford+T circuits");
    circuit_cmd->require_subcommand(1);
    CLI::App *amp_cmd = circuit_cmd->add_subcommand("amp", "Path-sum amplitude <out|C|in>");
    amp_cmd->add_option("--file", ca.file, "Circuit file")->required()->check(CLI::ExistingFile);
    amp_cmd->add_option("--in", ca.in, "Input basis state")->required();
    amp_cmd->add_option("--out", ca.out, "Output basis state")->required();
    amp_cmd->add_flag("--check-oracle", ca.check_oracle, "Compare with the state-vector oracle");
    amp_cmd->add_flag("--no-prune", ca.no_prune, "Visit every path");
    std::string realpart_file;
    CLI::App *realpart_cmd =
        circuit_cmd->add_subcommand("realpart", "Ancilla construction for Re <Psi|V|Psi>");
    realpart_cmd->add_option("--file", realpart_file, "Diagonal circuit file")
        ->required()
        ->check(CLI::ExistingFile);

    std::uint32_t x_len = 0;
    std::uint64_t x_steps = 0;
    CLI::App *xlate_cmd = app.add_subcommand("xlate-check", "Check the 1110 sub-integral identity");
    xlate_cmd->add_option("--max-len", x_len, "Longest dialect-A program")->required();
    xlate_cmd->add_option("--max-steps", x_steps, "Dialect-A step budget")->required();

    std::string input;
    std::uint64_t run_steps = 1000;
    std::string run_dialect = "A";
    bool trace = false;
    CLI::App *run_cmd = app.add_subcommand("run", "Run one input");
    run_cmd->add_option("--input", input, "Input bits")->required();
    run_cmd->add_option("--max-steps", run_steps, "Step budget");
    run_cmd->add_option("--dialect", run_dialect, "A or B")
        ->check(CLI::IsMember({"A", "B", "a", "b"}));
    run_cmd->add_flag("--trace", trace, "Include one trace line per step");

    try {
        app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        json report;
        if (enumerate_cmd->parsed()) {
            report = cmd_enumerate(ex, cache, !no_records, err);
        } else if (sigma_cmd->parsed()) {
            report = cmd_sigma(ex, mode);
        } else if (event_cmd->parsed()) {
            report = cmd_event(ev);
        } else if (amp_cmd->parsed()) {
            report = cmd_circuit_amp(ca);
        } else if (realpart_cmd->parsed()) {
            report = cmd_circuit_realpart(realpart_file);
        } else if (xlate_cmd->parsed()) {
            report = cmd_xlate(x_len, x_steps);
        } else {
            report = cmd_run(input, run_steps, run_dialect, trace);
        }
        report["version"] = kReportVersion;
        emit(report, format, out);
        return kExitOk;
    } catch (VerdictFailure &f) {
        f.report["version"] = kReportVersion;
        emit(f.report, format, out);
        return kExitVerdict;
    } catch (const CLI::ValidationError &e) {
        err << "upsum: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception &e) {
        err << "upsum: " << e.what() << "\n";
        return kExitUsage;
    }
}

} // namespace upsum::cli
