// Command-line entry point: classify, check, run, catalog, report.
// Exit codes: 0 every verdict as expected, 1 any mismatch, 2 configuration error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "persist/catalog.hpp"
#include "persist/runner.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

struct Common {
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> stride;
    std::string mode_override;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--out-dir", c.out_dir, "Directory for CSV and report files");
    cmd->add_option("--seed", c.seed, "Override the scenario seed");
    cmd->add_option("--stride", c.stride, "Trajectory CSV stride")->check(CLI::PositiveNumber);
    cmd->add_option("--mode-override", c.mode_override, "Assert the time mode (discrete|continuous)")
        ->check(CLI::IsMember({"discrete", "continuous"}));
}

void apply_mode_override(const persist::Scenario& s, const std::string& mode) {
    if (!mode.empty() && mode != persist::to_string(s.mode))
        throw persist::ValidationError("mode", "--mode-override " + mode + " contradicts scenario mode " +
                                                   persist::to_string(s.mode));
}

int run_one(const persist::Scenario& s, const Common& c) {
    apply_mode_override(s, c.mode_override);
    persist::RunOptions opt{c.out_dir, c.stride, c.seed};
    auto result = persist::run_scenario(s, opt);
    persist::write_report(result.report, c.out_dir);
    std::cout << persist::to_text(result.report, true);
    return result.report.ok() ? kExitOk : kExitFail;
}

int classify(const persist::Scenario& s) {
    const auto net = s.network();
    for (std::size_t k = 0; k < net.arcs().size(); ++k) {
        const auto& a = net.arcs()[k];
        std::cout << persist::to_string(a.arc) << ' ' << a.weight.family_name() << ' '
                  << (net.is_persistent(k) ? "persistent" : "vanishing") << '\n';
    }
    const auto& gp = net.persistence().persistent_graph;
    const auto cs = persist::centers(gp);
    std::cout << "persistent arcs " << net.persistence().persistent_arcs.size() << " of " << net.arcs().size() << '\n';
    std::cout << "centers";
    if (cs.empty()) std::cout << " none";
    for (auto v : cs) std::cout << ' ' << v;
    std::cout << "\nquasi-strongly connected " << (cs.empty() ? "no" : "yes") << '\n';
    if (!cs.empty()) std::cout << "diameter " << persist::diameter(gp) << '\n';
    return kExitOk;
}

int check(const persist::Scenario& s, const Common& c) {
    apply_mode_override(s, c.mode_override);
    auto r = persist::check_scenario(s, c.seed);
    std::cout << persist::to_text(r);
    return r.ok() ? kExitOk : kExitFail;
}

int report(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw persist::IoError("cannot open report " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    persist::json j;
    try {
        j = persist::json::parse(ss.str());
    } catch (const persist::json::parse_error& e) {
        throw persist::ParseError(e.what());
    }
    auto r = persist::report_from_json(j);
    std::cout << persist::to_text(r, j.contains("wall_seconds"));
    return r.ok() ? kExitOk : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Belief dynamics on time-varying digraphs: persistence, assumption checks, certificates"};
    app.require_subcommand(1);

    std::string file;
    Common common;

    auto* cmd_classify = app.add_subcommand("classify", "Persistence report for a scenario's network");
    cmd_classify->add_option("file", file, "Scenario file")->required();

    auto* cmd_check = app.add_subcommand("check", "Run the assumption checks only");
    cmd_check->add_option("file", file, "Scenario file")->required();
    add_common(cmd_check, common);

    auto* cmd_run = app.add_subcommand("run", "Run a scenario end to end");
    cmd_run->add_option("file", file, "Scenario file")->required();
    add_common(cmd_run, common);

    auto* cmd_catalog = app.add_subcommand("catalog", "List, run or export the built-in scenarios");
    bool list = false, run_all = false;
    std::string run_name, export_dir;
    cmd_catalog->add_flag("--list", list, "List built-in scenarios");
    cmd_catalog->add_flag("--run-all", run_all, "Run every built-in scenario");
    cmd_catalog->add_option("--run", run_name, "Run one built-in scenario by name");
    cmd_catalog->add_option("--export", export_dir, "Write built-in scenarios as files into a directory");
    add_common(cmd_catalog, common);

    auto* cmd_report = app.add_subcommand("report", "Re-render a saved JSON report as text");
    cmd_report->add_option("file", file, "Report JSON file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*cmd_classify) return classify(persist::load_scenario(file));
        if (*cmd_check) return check(persist::load_scenario(file), common);
        if (*cmd_run) return run_one(persist::load_scenario(file), common);
        if (*cmd_report) return report(file);
        if (*cmd_catalog) {
            if (list) {
                for (const auto& s : persist::catalog())
                    std::cout << s.name << "  " << persist::to_string(s.mode) << "  " << s.description << '\n';
                return kExitOk;
            }
            if (!export_dir.empty()) {
                std::filesystem::create_directories(export_dir);
                for (const auto& s : persist::catalog())
                    persist::save_scenario(s, (std::filesystem::path(export_dir) / (s.name + ".json")).string());
                return kExitOk;
            }
            if (!run_name.empty()) {
                auto s = persist::find_in_catalog(run_name);
                if (!s) throw persist::ValidationError("--run", "no built-in scenario named " + run_name);
                return run_one(*s, common);
            }
            if (run_all) {
                int code = kExitOk;
                for (const auto& s : persist::catalog()) {
                    if (run_one(s, common) != kExitOk) code = kExitFail;
                    std::cout << '\n';
                }
                return code;
            }
            std::cerr << "catalog: choose one of --list, --run NAME, --run-all, --export DIR\n";
            return kExitConfig;
        }
    } catch (const persist::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const persist::ValidationError& e) {
        std::cerr << "invalid scenario: " << e.what() << '\n';
        return kExitConfig;
    } catch (const persist::IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const persist::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    return kExitOk;
}
