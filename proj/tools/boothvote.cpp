// Command-line driver: runs scripted elections phase by phase against the
// simulated ledger, persisting the full simulation state in a workspace file
// between subcommands.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bv/scenario.hpp"

using nlohmann::json;

namespace {

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json j;
    in >> j;
    return j;
}

void save_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << "\n";
}

int run_phase(const std::string& workspace, const std::string& phase) {
    bv::Simulation sim = bv::Simulation::from_json(load_json(workspace));
    if (phase == "enroll") sim.phase_enroll();
    else if (phase == "assign") sim.phase_assign();
    else if (phase == "signup") sim.phase_signup();
    else if (phase == "mpc") sim.phase_mpc();
    else if (phase == "vote") sim.phase_vote();
    else if (phase == "recover") sim.phase_recover();
    else if (phase == "tally") sim.phase_tally();
    else if (phase == "aggregate") sim.phase_aggregate();
    save_json(workspace, sim.to_json());
    if (sim.unexpected_failures() > 0) {
        std::cerr << phase << ": " << sim.unexpected_failures()
                  << " undeclared transaction rejection(s)\n";
        return 1;
    }
    std::cout << phase << ": ok (stage=" << sim.stage() << ")\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"self-tallying booth voting simulator"};
    app.require_subcommand(1);

    std::string workspace = "election.json";
    std::string config_path;
    std::string out_path;
    std::string axis = "k";
    double from = 2, to = 10, step = 1;
    std::string costs_csv, ledger_jsonl;

    auto* init = app.add_subcommand("init", "create a workspace from a scenario config");
    init->add_option("--config", config_path, "scenario config JSON")->required();
    init->add_option("--workspace", workspace, "workspace file to create");

    for (const char* name : {"enroll", "assign", "signup", "mpc", "vote", "recover",
                             "tally", "aggregate"}) {
        auto* sub = app.add_subcommand(name, std::string("run the ") + name + " phase");
        sub->add_option("--workspace", workspace, "workspace file");
    }

    auto* run = app.add_subcommand("run", "run every phase in order");
    run->add_option("--workspace", workspace, "workspace file");

    auto* report = app.add_subcommand("report", "emit the election report");
    report->add_option("--workspace", workspace, "workspace file");
    report->add_option("--out", out_path, "write report JSON here (default stdout)");
    report->add_option("--costs-csv", costs_csv, "also write the per-op cost CSV");
    report->add_option("--ledger-jsonl", ledger_jsonl, "also write the ledger transcript");

    auto* sweep = app.add_subcommand("sweep", "sweep one axis, emit CSV");
    sweep->add_option("--config", config_path, "scenario config JSON")->required();
    sweep->add_option("--axis", axis, "mpc_batch | k | n | period")->required();
    sweep->add_option("--from", from, "range start")->required();
    sweep->add_option("--to", to, "range end (inclusive)")->required();
    sweep->add_option("--step", step, "range step");
    sweep->add_option("--out", out_path, "write CSV here (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (init->parsed()) {
            auto cfg = bv::ScenarioConfig::from_json(load_json(config_path));
            bv::Simulation sim(cfg);
            save_json(workspace, sim.to_json());
            std::cout << "init: workspace " << workspace << " created\n";
            return 0;
        }
        if (run->parsed()) {
            bv::Simulation sim = bv::Simulation::from_json(load_json(workspace));
            sim.run_all();
            save_json(workspace, sim.to_json());
            if (sim.unexpected_failures() > 0) {
                std::cerr << "run: " << sim.unexpected_failures()
                          << " undeclared transaction rejection(s)\n";
                return 1;
            }
            std::cout << "run: ok\n";
            return 0;
        }
        if (report->parsed()) {
            bv::Simulation sim = bv::Simulation::from_json(load_json(workspace));
            json rep = sim.report().to_json();
            if (out_path.empty()) std::cout << rep.dump(2) << "\n";
            else save_json(out_path, rep);
            if (!costs_csv.empty()) {
                std::ofstream out(costs_csv);
                out << sim.cost_csv();
            }
            if (!ledger_jsonl.empty()) {
                std::ofstream out(ledger_jsonl);
                out << sim.ledger().to_jsonl();
            }
            return sim.unexpected_failures() > 0 ? 1 : 0;
        }
        if (sweep->parsed()) {
            auto cfg = bv::ScenarioConfig::from_json(load_json(config_path));
            std::vector<double> values;
            for (double v = from; v <= to + 1e-9; v += step) values.push_back(v);
            std::string csv = bv::sweep_csv(cfg, axis, values);
            if (out_path.empty()) std::cout << csv;
            else {
                std::ofstream out(out_path);
                out << csv;
            }
            return 0;
        }
        for (const auto* sub : app.get_subcommands())
            return run_phase(workspace, sub->get_name());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
