// Copyright 2026 The owqc Authors
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
#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <openssl/evp.h>

#include "owqc/owqc.hpp"

#ifndef OWQC_VERSION
#define OWQC_VERSION "0.0.0"
#endif

namespace owqc::cli {

using nlohmann::json;

std::string sha256_hex(const std::string &data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
        throw Error("sha256 failed");
    }
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    return os.str();
}

namespace {

struct Options {
    std::uint64_t seed = 0;
    std::string device_path;
    std::string out_dir = "out";
    std::string format = "json";
    std::optional<double> tolerance;
    bool timing = false;
    // device overrides
    std::optional<double> f_cz, t_cz, f_meas, f_ff, t_meas_ff, f_1q, t_1q;
    std::string meas_parallelism;

    // cluster
    int h = 0, l = 0;
    bool verify = false;
    // cnot
    std::string variant = "standard";
    bool all_branches = false;
    // mpmc
    int n_max = 10;
    int connect_max = 8;
    // persistence
    std::string state = "mpmc";
    int n = 3;
    int max_k = -1;
    int samples = 0;
    bool summary = false;
    // rabi
    std::string rabi_config;
    std::vector<double> xi_over_delta{1e-3, 1e-2, 1e-1};
    int steps_per_period = kDefaultStepsPerPeriod;
};

/// Collects output files and writes the manifest last.
class Session {
  public:
    Session(std::string command, const Options &o, json config)
        : command_(std::move(command)), opts_(o), config_(std::move(config)) {
        std::filesystem::create_directories(opts_.out_dir);
    }

    void write(const std::string &name, const std::string &content) {
        std::ofstream f(std::filesystem::path(opts_.out_dir) / name, std::ios::binary);
        if (!f) throw ValidationError("cannot write " + name + " in " + opts_.out_dir);
        f << content;
        outputs_.push_back(name);
    }
    void write_json(const std::string &name, const json &j) { write(name, j.dump(2) + "\n"); }

    void finish() {
        json resolved{{"command", command_}, {"config", config_}, {"seed", opts_.seed}, {"artifact_version", OWQC_VERSION}};
        json manifest{{"command", command_},
                      {"config_digest", sha256_hex(resolved.dump())},
                      {"seed", opts_.seed},
                      {"artifact_version", OWQC_VERSION},
                      {"outputs", outputs_}};
        std::ofstream f(std::filesystem::path(opts_.out_dir) / "manifest.json", std::ios::binary);
        f << manifest.dump(2) << "\n";
    }

  private:
    std::string command_;
    const Options &opts_;
    json config_;
    std::vector<std::string> outputs_;
};

DeviceModel resolve_device(const Options &o) {
    DeviceModel d;
    if (!o.device_path.empty()) {
        std::ifstream f(o.device_path);
        if (!f) throw ValidationError("cannot read device config " + o.device_path);
        json j;
        try {
            j = json::parse(f);
        } catch (const json::exception &e) {
            throw ValidationError(std::string("device config is not valid JSON: ") + e.what());
        }
        d = device_from_json(j);
    }
    auto set = [](const std::optional<double> &v, double &dst) {
        if (v) dst = *v;
    };
    set(o.f_cz, d.f_cz);
    set(o.t_cz, d.t_cz);
    set(o.f_meas, d.f_meas);
    set(o.f_ff, d.f_ff);
    set(o.t_meas_ff, d.t_meas_ff);
    set(o.f_1q, d.f_1q);
    set(o.t_1q, d.t_1q);
    if (o.meas_parallelism == "parallel") d.meas_parallelism = MeasParallelism::parallel;
    if (o.meas_parallelism == "sequential") d.meas_parallelism = MeasParallelism::sequential;
    d.validate();
    return d;
}

RabiWorkingPoint resolve_working_point(const Options &o) {
    RabiWorkingPoint wp;
    if (o.rabi_config.empty()) return wp;
    std::ifstream f(o.rabi_config);
    if (!f) throw ValidationError("cannot read rabi config " + o.rabi_config);
    try {
        const json j = json::parse(f);
        auto site = [&](const char *key, RabiSiteParams &s) {
            if (!j.contains(key)) return;
            const json &js = j.at(key);
            s.omega_q = js.value("omega_q", s.omega_q);
            s.omega_r = js.value("omega_r", s.omega_r);
            s.g = js.value("g", s.g);
            s.fock_cutoff = js.value("fock_cutoff", s.fock_cutoff);
            s.validate();
        };
        site("site1", wp.site1);
        site("site2", wp.site2);
        if (j.contains("P")) wp.P = j.at("P").get<std::array<double, 2>>();
        if (j.contains("Q")) wp.Q = j.at("Q").get<std::array<double, 2>>();
        wp.J1 = j.value("J1", wp.J1);
        wp.J2 = j.value("J2", wp.J2);
    } catch (const json::exception &e) {
        throw ValidationError(std::string("rabi config: ") + e.what());
    }
    return wp;
}

json working_point_json(const RabiWorkingPoint &wp) {
    auto site = [](const RabiSiteParams &s) {
        return json{{"omega_q", s.omega_q}, {"omega_r", s.omega_r}, {"g", s.g}, {"fock_cutoff", s.fock_cutoff}};
    };
    return {{"site1", site(wp.site1)}, {"site2", site(wp.site2)}, {"P", wp.P}, {"Q", wp.Q}, {"J1", wp.J1}, {"J2", wp.J2}};
}

void emit(std::ostream &out, const Options &o, const json &j, const std::string &text, const std::string &csv = {}) {
    if (o.format == "text") {
        out << text;
    } else if (o.format == "csv" && !csv.empty()) {
        out << csv;
    } else {
        out << j.dump(2) << "\n";
    }
}

// --------------------------------------------------------------------------
// Subcommands
// --------------------------------------------------------------------------

int cmd_cluster(const Options &o, std::ostream &out) {
    const double tol = o.tolerance.value_or(1e-9);
    const LatticeSchedule s = build_schedule(o.h, o.l);
    json j{{"h", o.h}, {"l", o.l}, {"gates", s.edge_count()}, {"layers", s.non_empty_layers()}, {"schedule", schedule_to_json(s)}};
    bool ok = true;
    std::ostringstream text;
    text << "lattice " << o.h << "x" << o.l << ": " << s.edge_count() << " CZ gates in " << s.non_empty_layers() << " layers\n";
    if (o.verify) {
        const VerificationReport v = verify_cluster(o.h, o.l);
        j["verification"] = to_json(v);
        ok = v.fidelity >= 1.0 - tol;
        text << "fidelity to reference " << std::setprecision(15) << v.fidelity << (ok ? " (ok)\n" : " (MISMATCH)\n");
    }
    Session sess("cluster", o, {{"h", o.h}, {"l", o.l}, {"verify", o.verify}, {"tolerance", tol}});
    sess.write_json("cluster.json", j);
    sess.finish();
    emit(out, o, j, text.str());
    return ok ? kOk : kDiscrepancy;
}

int cmd_cnot(const Options &o, std::ostream &out) {
    const double tol = o.tolerance.value_or(1e-9);
    if (o.variant != "standard" && o.variant != "efficient") throw ValidationError("--variant must be standard or efficient");
    const MbqcProgram p = o.variant == "standard" ? cnot_standard_program() : cnot_efficient_program();
    std::vector<std::pair<std::string, BranchResult>> rows;
    double worst = 1.0;
    Rng rng(o.seed);
    static const std::array<const char *, 4> labels{"00", "01", "10", "11"};
    for (int in = 0; in < 4; ++in) {
        StateVector logical(2);
        logical[0] = 0.0;
        logical[static_cast<std::size_t>(in)] = 1.0;
        if (o.all_branches) {
            for (auto &b : enumerate_logical(p, logical)) {
                if (!b.zero_probability) worst = std::min(worst, *b.logical_fidelity);
                rows.emplace_back(labels[in], std::move(b));
            }
        } else {
            BranchResult b = run_program(p, embed_logical(p, logical), rng);
            b.logical_fidelity = logical_fidelity(p, b.post_state, ideal_logical_output(p, logical));
            worst = std::min(worst, *b.logical_fidelity);
            rows.emplace_back(labels[in], std::move(b));
        }
    }
    // (|00> + |11>)/sqrt2 on (control, reference) with the target in |0>
    StateVector ent(3);
    ent[0] = kInvSqrt2;
    ent[5] = kInvSqrt2;
    double ent_worst = 1.0;
    for (const auto &b : enumerate_logical(p, ent)) {
        if (!b.zero_probability) ent_worst = std::min(ent_worst, *b.logical_fidelity);
    }
    const ProcessMatrix pm = process_tomography(p, p.logical->inputs, p.logical->outputs);
    const double pf = process_fidelity(pm, cnot_matrix());
    const bool ok = worst >= 1.0 - tol && pf >= 1.0 - 1e-8 && ent_worst >= 1.0 - tol;
    const std::string csv = branches_to_csv(rows);
    json j{{"variant", o.variant},
           {"program", to_json(p)},
           {"outcome_labeling", "X outcome 0 = |+>, 1 = |->; input label = control,target"},
           {"branches", rows.size()},
           {"min_logical_fidelity", worst},
           {"entangled_input_min_fidelity", ent_worst},
           {"process_fidelity", pf},
           {"choi_trace_error", pm.trace_error()},
           {"passed", ok}};
    std::ostringstream text;
    text << "C-NOT (" << o.variant << "): " << rows.size() << " branches, min logical fidelity " << std::setprecision(12)
         << worst << ", process fidelity " << pf << (ok ? "\n" : " (DISCREPANCY)\n");
    Session sess("cnot", o, {{"variant", o.variant}, {"all_branches", o.all_branches}, {"tolerance", tol}});
    sess.write_json("cnot_" + o.variant + ".json", j);
    sess.write("cnot_" + o.variant + "_branches.csv", csv);
    sess.finish();
    emit(out, o, j, text.str(), csv);
    return ok ? kOk : kDiscrepancy;
}

int cmd_mpmc(const Options &o, std::ostream &out) {
    const double tol = o.tolerance.value_or(1e-10);
    if (o.n_max < 2) throw ValidationError("--n-max must be >= 2");
    check_mpmc_size(o.n_max);
    if (o.connect_max > kMaxConnectednessQubits) throw CapacityError("--connect-max exceeds 14");
    json rows = json::array();
    bool ok = true;
    std::ostringstream text;
    text << std::left << std::setw(4) << "n" << std::setw(22) << "layered~recursive F" << std::setw(12) << "overlap"
         << std::setw(14) << "connectedness" << '\n';
    for (int n = 2; n <= o.n_max; ++n) {
        const MpmcState lay = build_mpmc_layered(n);
        const auto [c, cp] = build_mpmc_recursive(n);
        const double f = state_fidelity(lay.state, c.state);
        const double ov = overlap_magnitude(c.state, cp.state);
        json r{{"n", n},
               {"layered_vs_recursive_fidelity", f},
               {"agree", std::abs(1.0 - f) <= tol},
               {"orthogonality_overlap", ov},
               {"marginal_deviation_layered", max_marginal_deviation(lay.state)},
               {"marginal_deviation_recursive", max_marginal_deviation(c.state)}};
        if (n <= 12) r["mpsd_expansion_count"] = mpsd_expansion_count(n);
        ok = ok && std::abs(1.0 - f) <= tol && ov <= tol;
        std::string conn = "-";
        if (n >= 3 && n <= o.connect_max) {
            const ConnectednessMatrix m = connectedness_matrix(lay.state);
            r["connectedness"] = to_json(m);
            ok = ok && m.all_passed();
            conn = std::to_string(m.pairs.size() - m.failures()) + "/" + std::to_string(m.pairs.size());
        }
        rows.push_back(r);
        text << std::left << std::setw(4) << n << std::setw(22) << std::setprecision(12) << f << std::setw(12)
             << std::setprecision(3) << ov << std::setw(14) << conn << '\n';
    }
    json j{{"rows", rows}, {"passed", ok}};
    Session sess("mpmc", o, {{"n_max", o.n_max}, {"connect_max", o.connect_max}, {"tolerance", tol}});
    sess.write_json("mpmc.json", j);
    sess.write("mpmc.txt", text.str());
    sess.finish();
    emit(out, o, j, text.str());
    return ok ? kOk : kDiscrepancy;
}

int cmd_persistence(const Options &o, std::ostream &out) {
    if (o.n > kMaxPersistenceQubits) throw CapacityError("persistence search is limited to n <= 10");
    StateVector s(1);
    if (o.state == "mpmc") {
        s = build_mpmc_layered(o.n).state;
    } else if (o.state == "chain") {
        s = cluster_chain(o.n);
    } else if (o.state == "bell") {
        s = build_mpmc_layered(2).state;
    } else {
        throw ValidationError("--state must be mpmc, chain or bell");
    }
    BasisSet bases;
    if (o.samples > 0) bases.sampled = BasisSet::Sampled{o.samples, o.seed};
    const int max_k = o.max_k < 0 ? s.n_qubits() : o.max_k;
    const PersistenceReport r = persistence_search(s, bases, max_k);
    const bool replay_ok = !r.found || all_product(replay_witness(s, r.witness));
    json j = to_json(r);
    j["state"] = o.state;
    j["witness_replay_ok"] = replay_ok;
    if (o.state == "mpmc") j["claimed_persistence"] = o.n - 1;
    if (o.state == "chain") j["baseline_floor_n_over_2"] = o.n / 2;
    std::ostringstream text;
    text << "persistence of " << o.state << "(" << s.n_qubits() << "): " << (r.found ? std::to_string(r.min_measurements_found) : "not found")
         << " [" << r.basis_set << "], witness replay " << (replay_ok ? "ok" : "FAILED") << "\n";
    Session sess("persistence", o, {{"state", o.state}, {"n", o.n}, {"max_k", max_k}, {"samples", o.samples}, {"summary", o.summary}});
    sess.write_json("persistence.json", j);
    if (o.summary) {
        std::vector<PersistenceSummaryRow> rows;
        for (int n = 3; n <= o.n; ++n) rows.push_back(persistence_summary_row(n, n));
        const std::string table = persistence_summary_table(rows);
        sess.write("persistence_summary.txt", table);
        text << table;
    }
    sess.finish();
    emit(out, o, j, text.str());
    return replay_ok ? kOk : kDiscrepancy;
}

int cmd_estimate(const Options &o, std::ostream &out) {
    const DeviceModel d = resolve_device(o);
    const ComparisonReport cmp = compare_protocols(d);
    const ProtocolCost lattice = estimate(cluster_workload(4, 4), d);
    std::vector<ProtocolCost> rows{lattice, cmp.standard, cmp.ubell, cmp.efficient};
    json capacity = json::array();
    std::ostringstream text;
    text << cost_table(rows);
    text << "ancilla reduction (efficient vs standard): " << std::setprecision(3) << cmp.ancilla_reduction * 100 << "%\n";
    for (int q : {16, 20}) {
        const CapacityReport cr = capacity_report(q, d);
        capacity.push_back(to_json(cr));
        text << q << " qubits: " << cr.plan.standard_cnots << " standard / " << cr.plan.efficient_cnots
             << " efficient C-NOTs; chained standard fidelity " << std::fixed << std::setprecision(3)
             << cr.standard_fidelity_with_generation << " with generation error, " << cr.standard_fidelity_without_generation
             << " readout only\n";
        text.unsetf(std::ios::fixed);
    }
    text << "note: default f_1q/t_1q are calibrated to the quoted U^Bell figure, not hardware data\n";
    json jr = json::array();
    for (const auto &r : rows) jr.push_back(to_json(r));
    json j{{"device", to_json(d)}, {"rows", jr}, {"comparison", to_json(cmp)}, {"capacity", capacity}};
    Session sess("estimate", o, {{"device", to_json(d)}});
    sess.write_json("estimate.json", j);
    sess.write("estimate.txt", text.str());
    sess.write_json("device.json", to_json(d));
    sess.finish();
    emit(out, o, j, text.str());
    return kOk;
}

int cmd_rabi(const Options &o, std::ostream &out) {
    const RabiWorkingPoint wp = resolve_working_point(o);
    const QrsSpectrum s1 = diagonalize_qrs(wp.site1), s2 = diagonalize_qrs(wp.site2);
    const TwoSiteEffective e = build_two_site(s1, s2, wp.P, wp.Q);
    std::vector<double> ratios = o.xi_over_delta;
    std::sort(ratios.begin(), ratios.end());
    std::vector<double> xis;
    for (double r : ratios) xis.push_back(r * std::abs(e.Delta));
    const SweepReport sw = rwa_validity_sweep(e, xis, wp.J1, wp.J2, o.steps_per_period);
    const double floor = o.tolerance.value_or(1e-3);
    const bool ok = sw.monotone && sw.rows.front().fidelity > 1.0 - floor;
    const std::string csv = sweep_to_csv(sw, o.timing);
    json j{{"working_point", working_point_json(wp)},
           {"spectra", {to_json(s1), to_json(s2)}},
           {"effective", to_json(e)},
           {"convention", to_json(selected_convention())},
           {"sweep", to_json(sw)},
           {"passed", ok}};
    std::ostringstream text;
    text << "Delta=" << e.Delta << " delta=" << e.delta << "\n";
    for (const auto &r : sw.rows) text << "xi/Delta=" << r.xi_over_Delta << "  F=" << std::setprecision(10) << r.fidelity << "\n";
    Session sess("rabi", o,
                 {{"working_point", working_point_json(wp)}, {"xi_over_delta", ratios}, {"steps_per_period", o.steps_per_period},
                  {"timing", o.timing}});
    sess.write_json("rabi.json", j);
    sess.write("rabi_sweep.csv", csv);
    sess.finish();
    emit(out, o, j, text.str(), csv);
    return ok ? kOk : kDiscrepancy;
}

json criteria_json(const std::vector<acceptance::CriterionResult> &rs, bool timing) {
    json a = json::array();
    for (const auto &r : rs) a.push_back(acceptance::to_json(r, timing));
    return a;
}

int cmd_selftest(const Options &o, std::ostream &out) {
    std::vector<acceptance::CriterionResult> rs = acceptance::run_library_criteria();
    // Determinism: an in-process rerun must serialise identically.
    {
        acceptance::CriterionResult det;
        det.id = "C9";
        det.title = "determinism (rerun yields identical report)";
        det.time_limit = 600.0;
        const auto t0 = std::chrono::steady_clock::now();
        const std::string first = criteria_json(rs, false).dump();
        const std::string second = criteria_json(acceptance::run_library_criteria(), false).dump();
        det.passed = first == second;
        det.details.push_back("report sha256 " + sha256_hex(first).substr(0, 16) + (det.passed ? " reproduced" : " differs on rerun"));
        det.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rs.push_back(det);
    }
    bool ok = std::all_of(rs.begin(), rs.end(), [](const auto &r) { return r.passed; });
    std::ostringstream text;
    for (const auto &r : rs) {
        text << acceptance::status_line(r, o.timing) << "\n";
        for (const auto &d : r.details) text << "      " << d << "\n";
    }
    text << (ok ? "all criteria pass\n" : "some criteria FAIL (exit 3)\n");
    json j{{"criteria", criteria_json(rs, o.timing)}, {"passed", ok}};
    Session sess("selftest", o, {{"timing", o.timing}});
    sess.write_json("selftest.json", j);
    sess.write("selftest.txt", text.str());
    sess.finish();
    emit(out, o, j, text.str());
    return ok ? kOk : kDiscrepancy;
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"One-way quantum computing simulator and claim checker", "owqc"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_option("--seed", o.seed, "Seed for every random draw")->default_val(0);
    app.add_option("--device", o.device_path, "Device model JSON");
    app.add_option("--out", o.out_dir, "Output directory")->default_val("out");
    app.add_option("--format", o.format, "Stdout format")->check(CLI::IsMember({"json", "csv", "text"}))->default_val("json");
    app.add_option("--tolerance", o.tolerance, "Override the command's check tolerance");
    app.add_flag("--timing", o.timing, "Include wall-clock timings in outputs (not reproducible)");
    app.add_option("--f-cz", o.f_cz);
    app.add_option("--t-cz", o.t_cz);
    app.add_option("--f-meas", o.f_meas);
    app.add_option("--f-ff", o.f_ff);
    app.add_option("--t-meas-ff", o.t_meas_ff);
    app.add_option("--f-1q", o.f_1q);
    app.add_option("--t-1q", o.t_1q);
    app.add_option("--meas-parallelism", o.meas_parallelism)->check(CLI::IsMember({"sequential", "parallel"}));

    auto *cluster = app.add_subcommand("cluster", "Build a 2-D cluster-state schedule");
    cluster->set_help_flag("--help", "Print this help message and exit"); // frees -h for --h
    cluster->add_option("--h", o.h, "Columns")->required()->check(CLI::PositiveNumber);
    cluster->add_option("--l", o.l, "Rows")->required()->check(CLI::PositiveNumber);
    cluster->add_flag("--verify", o.verify, "Compare against the reference state");

    auto *cnot = app.add_subcommand("cnot", "Run a C-NOT protocol");
    cnot->add_option("--variant", o.variant)->check(CLI::IsMember({"standard", "efficient"}));
    cnot->add_flag("--all-branches", o.all_branches, "Enumerate every outcome branch");

    auto *mpmc = app.add_subcommand("mpmc", "Check the MPMC state family");
    mpmc->add_option("--n-max", o.n_max)->check(CLI::Range(2, kMaxMpmcQubits));
    mpmc->add_option("--connect-max", o.connect_max);

    auto *pers = app.add_subcommand("persistence", "Brute-force entanglement persistence");
    pers->add_option("--state", o.state)->check(CLI::IsMember({"mpmc", "chain", "bell"}));
    pers->add_option("--n", o.n)->check(CLI::Range(2, 26));
    pers->add_option("--max-k", o.max_k);
    pers->add_option("--samples", o.samples, "Random bases per qubit subset (0 = Pauli only)");
    pers->add_flag("--summary", o.summary, "Add the comparison table for 3..n");

    app.add_subcommand("estimate", "Fidelity and timing estimates");

    auto *rabi = app.add_subcommand("rabi", "Driven Rabi-chain validation");
    rabi->add_option("--config", o.rabi_config, "Working point JSON");
    rabi->add_option("--xi-over-delta", o.xi_over_delta)->delimiter(',');
    rabi->add_option("--steps-per-period", o.steps_per_period);

    app.add_subcommand("selftest", "Run the acceptance suite");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kValidation;
    }

    const std::string cmd = app.get_subcommands().front()->get_name();
    try {
        if (cmd == "cluster") return cmd_cluster(o, out);
        if (cmd == "cnot") return cmd_cnot(o, out);
        if (cmd == "mpmc") return cmd_mpmc(o, out);
        if (cmd == "persistence") return cmd_persistence(o, out);
        if (cmd == "estimate") return cmd_estimate(o, out);
        if (cmd == "rabi") return cmd_rabi(o, out);
        if (cmd == "selftest") return cmd_selftest(o, out);
    } catch (const CapacityError &e) {
        err << "capacity error: " << e.what() << "\n";
        return kCapacity;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kValidation;
    }
    return kValidation;
}

} // namespace owqc::cli
