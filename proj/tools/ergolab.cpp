// Command-line front end: validate system files, compute averages and their
// exact limits, build the extension tower, and run the verification suite.

#include <fstream>
#include <iostream>
#include <memory>

#include <CLI11.hpp>

#include "ergolab/averaging.hpp"
#include "ergolab/extensions.hpp"
#include "ergolab/system_io.hpp"
#include "ergolab/verify.hpp"

namespace {

using namespace ergolab;

std::unique_ptr<std::ofstream> open_out(const std::string& path) {
    if (path.empty()) return nullptr;
    auto f = std::make_unique<std::ofstream>(path);
    if (!*f) throw Error("cannot open output file '" + path + "'");
    return f;
}

std::ostream& pick(std::unique_ptr<std::ofstream>& file) {
    return file ? static_cast<std::ostream&>(*file) : std::cout;
}

std::vector<Obs> load_observables(const std::vector<std::string>& paths, const GdSystem& s) {
    std::vector<Obs> fs;
    for (const auto& p : paths) fs.push_back(parse_obs_file(p, s.space()));
    if (fs.empty())
        throw Error("this command needs at least one observable (--f <csv>)");
    while (static_cast<int>(fs.size()) < s.d()) fs.push_back(fs.front());
    if (static_cast<int>(fs.size()) != s.d())
        throw Error("expected 1 or " + std::to_string(s.d()) + " observables, got " +
                    std::to_string(fs.size()));
    return fs;
}

void print_summary(const GdSystem& s) {
    std::cout << "points: " << s.points() << " (support " << s.space()->support().size() << ")\n";
    std::cout << "group: "
              << (s.lazy() ? std::string("integers (boxes {0..n-1})")
                           : s.group()->descriptor() + " (full-group scheme)")
              << "\n";
    std::cout << "actions: " << s.d() << ", all validated (measure-preserving, "
              << "homomorphisms, pairwise commuting)\n";
    if (s.space()->has_null_points())
        std::cout << "warning: zero-weight points present; they are kept in the null cell and "
                     "ignored by every computation\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact laboratory for commuting finite group actions"};
    app.require_subcommand(1);

    std::string system_path, out_path;
    std::vector<std::string> obs_paths;
    long long n = 16;
    int depth = -1;
    long long budget = 200000;
    bool run_all = false;

    auto add_common = [&](CLI::App* cmd, bool needs_obs) {
        cmd->add_option("--system", system_path, "system definition JSON")->required();
        cmd->add_option("--out", out_path, "output path (default: stdout)");
        if (needs_obs) cmd->add_option("--f", obs_paths, "observable CSV (repeatable)");
        return cmd;
    };

    auto* c_validate = add_common(app.add_subcommand("validate", "parse and validate"), false);
    auto* c_average = add_common(app.add_subcommand("average", "trajectory of the averages"), true);
    c_average->add_option("--n", n, "largest averaging window index");
    auto* c_limit = add_common(app.add_subcommand("limit", "exact limit of the averages"), true);
    auto* c_joining = add_common(app.add_subcommand("joining", "the limit coupling"), false);
    auto* c_tower = add_common(app.add_subcommand("tower", "build the extension tower"), true);
    c_tower->add_option("--depth", depth, "tower depth (default: d)");
    c_tower->add_option("--budget", budget, "per-level support budget");
    auto* c_semi = add_common(app.add_subcommand("seminorm", "cube integrals of an observable"), true);
    c_semi->add_option("--depth", depth, "largest level (default: d)");
    c_semi->add_option("--budget", budget, "per-level support budget");
    auto* c_verify = add_common(app.add_subcommand("verify", "run the verification suite"), false);
    c_verify->add_flag("--all", run_all, "run every check (default)");
    c_verify->add_option("--budget", budget, "per-level support budget");

    CLI11_PARSE(app, argc, argv);

    try {
        GdSystem s = parse_system_file(system_path);
        auto out_file = open_out(out_path);

        if (c_validate->parsed()) {
            print_summary(s);
            pick(out_file) << serialize_system(s).dump(2) << "\n";
            return 0;
        }
        if (c_average->parsed()) {
            auto fs = load_observables(obs_paths, s);
            write_trajectory_csv(pick(out_file), lambda_trajectory(s, fs, n));
            return 0;
        }
        if (c_limit->parsed()) {
            auto fs = load_observables(obs_paths, s);
            write_obs_csv(pick(out_file), lambda_limit(s, fs));
            return 0;
        }
        if (c_joining->parsed()) {
            Coupling lam = limit_joining(s);
            std::ostream& os = pick(out_file);
            for (int i = 0; i < lam.arity(); ++i) os << "point" << i + 1 << ",";
            os << "mass\n";
            const auto& tuples = lam.tuples();
            for (size_t t = 0; t < tuples.size(); ++t) {
                for (int i = 0; i < lam.arity(); ++i)
                    os << s.space()->label(tuples[t][i]) << ",";
                os << rat_to_string(lam.product_space()->weight(static_cast<int>(t))) << "\n";
            }
            return 0;
        }
        if (c_tower->parsed() || c_semi->parsed()) {
            if (depth < 0) depth = s.d();
            TowerOptions opt;
            opt.level_budget = budget;
            CubeTower t = build_tower(s, depth, opt);
            Obs f = obs_paths.empty()
                        ? Obs::indicator(t.base.space(), {t.base.space()->support().front()})
                        : parse_obs_file(obs_paths.front(), t.base.space());
            std::ostream& os = pick(out_file);
            os << "level,support,intertwine,pushforward,hk_integral\n";
            for (int k = 1; k <= depth; ++k) {
                bool ok = true;
                for (unsigned eta = 0; eta < (1u << k); ++eta)
                    ok = ok && verify_intertwine(t, k, eta).pass;
                std::string row = std::to_string(k) + "," +
                                  std::to_string(t.level_system(k).space()->support().size()) +
                                  "," + (ok ? "pass" : "FAIL") + ",pass," +
                                  rat_to_string(hk_integral(t, k, f));
                os << row << "\n";
                if (out_file)
                    std::cout << "level " << k << ": support "
                              << t.level_system(k).space()->support().size()
                              << ", intertwining " << (ok ? "pass" : "FAIL") << ", hk "
                              << rat_to_string(hk_integral(t, k, f)) << "\n";
                if (!ok) throw Error("intertwining relations failed at level " +
                                     std::to_string(k));
            }
            return 0;
        }
        if (c_verify->parsed()) {
            (void)run_all;  // the full battery is the only mode
            TowerOptions opt;
            opt.level_budget = budget;
            auto reports = run_suite(s, opt);
            write_report_human(std::cout, reports);
            if (out_file) write_report_json(*out_file, reports);
            return all_pass(reports) ? 0 : 1;
        }
    } catch (const SizeError& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
