// momentprop command line: propagate moments of a scenario by one of five
// methods, compare methods against each other and against published tables,
// inspect scenarios, and export the assembled moment-state systems.
//
// Exit codes: 0 success, 1 unexpected failure, 2 usage, 3 scenario parse
// error, 4 invalid request, 5 filesystem trouble, 6 unbound symbol,
// 7 numeric failure, 8 capacity exceeded.

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "momentprop/errors.hpp"
#include "momentprop/monomial.hpp"
#include "momentprop/report.hpp"
#include "momentprop/scenario.hpp"
#include "momentprop/system.hpp"
#include "momentprop/trig_moment.hpp"

namespace {

using namespace momentprop;

int parse_int_full(const std::string& text) {
    int value = 0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) {
        throw ValidationError("bad integer '" + text + "' in orders");
    }
    return value;
}

// "a..b", a single order, or a comma list
std::vector<int> parse_orders_spec(const std::string& spec) {
    std::vector<int> orders;
    const std::size_t dots = spec.find("..");
    if (dots != std::string::npos) {
        const int lo = parse_int_full(spec.substr(0, dots));
        const int hi = parse_int_full(spec.substr(dots + 2));
        if (lo < 1 || hi < lo) {
            throw ValidationError("orders range must satisfy 1 <= a <= b");
        }
        for (int a = lo; a <= hi; ++a) orders.push_back(a);
        return orders;
    }
    std::size_t start = 0;
    while (start <= spec.size()) {
        const std::size_t comma = spec.find(',', start);
        const std::string piece =
            spec.substr(start, comma == std::string::npos ? std::string::npos
                                                          : comma - start);
        const int a = parse_int_full(piece);
        if (a < 1) throw ValidationError("moment orders must be positive");
        orders.push_back(a);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return orders;
}

std::string resolve_out_dir(const std::string& flag) {
    if (!flag.empty()) return flag;
    const char* env = std::getenv("MOMENTPROP_OUT_DIR");
    if (env != nullptr && env[0] != '\0') return env;
    return ".";
}

bool running_under_ci() {
    const char* ci = std::getenv("CI");
    return ci != nullptr && ci[0] != '\0';
}

void require_seed_in_ci(bool seed_given, const char* what) {
    if (running_under_ci() && !seed_given) {
        throw ValidationError(std::string(what) +
                              " uses random sampling: pass an explicit --seed "
                              "when CI is set, so runs are reproducible");
    }
}

std::string write_pair(const std::string& dir, const std::string& stem,
                       const std::string& csv, const std::string& json_text) {
    namespace fs = std::filesystem;
    const fs::path base = fs::path(dir) / stem;
    atomic_write_file((base.string() + ".csv"), csv);
    atomic_write_file((base.string() + ".json"), json_text);
    return base.string();
}

int run_propagate(const std::string& scenario_arg, const std::string& method_arg,
                  const std::string& orders_arg, const std::string& out_arg,
                  const RunSettings& settings, bool seed_given) {
    const Scenario sc = load_scenario(scenario_arg);
    const Method method = method_from_name(method_arg);
    if (method == Method::montecarlo) {
        require_seed_in_ci(seed_given, "montecarlo");
    }

    std::vector<int> orders;
    if (!orders_arg.empty()) {
        orders = parse_orders_spec(orders_arg);
    } else if (method == Method::linear || method == Method::unscented) {
        // belief methods carry means and covariances only
        for (const int a : sc.orders) {
            if (a <= 2) orders.push_back(a);
        }
        if (orders.empty()) orders = {1, 2};
    }

    const TrigMomentEngine engine;
    const MomentTable table = run_method(sc, method, orders, settings, engine);
    const std::string csv = render_csv(table);

    const std::string base = write_pair(resolve_out_dir(out_arg),
                                        sc.name + "-" + method_name(method),
                                        csv, render_json(table));
    std::cout << csv;
    std::cerr << "wrote " << base << ".csv and " << base << ".json\n";
    return 0;
}

int run_compare(const std::string& scenario_arg, std::size_t sample_count,
                std::uint64_t seed, bool seed_given,
                const std::string& out_arg, bool out_given) {
    require_seed_in_ci(seed_given, "compare");
    const TrigMomentEngine engine;
    std::vector<ComparisonTable> tables;
    std::string stem;
    if (scenario_arg == "table1" || scenario_arg == "table2") {
        tables = run_reference_comparison(scenario_arg, sample_count, seed,
                                          engine);
        stem = scenario_arg + "-compare";
    } else {
        const Scenario sc = load_scenario(scenario_arg);
        tables.push_back(
            run_scenario_comparison(sc, sample_count, seed, engine));
        stem = sc.name + "-compare";
    }

    std::string text;
    for (const ComparisonTable& t : tables) {
        text += render_comparison_text(t) + "\n";
    }
    std::cout << text;

    bool any_flagged = false;
    for (const ComparisonTable& t : tables) {
        for (const auto& row : t.cells) {
            for (const auto& cell : row) any_flagged |= cell.flagged;
        }
    }
    if (any_flagged) {
        std::cout << "cells marked '!' sit outside their tolerance\n";
    }

    if (out_given) {
        const std::string dir = resolve_out_dir(out_arg);
        namespace fs = std::filesystem;
        const fs::path base = fs::path(dir) / stem;
        atomic_write_file(base.string() + ".txt", text);
        atomic_write_file(base.string() + ".json",
                          render_comparison_json(tables));
        std::cerr << "wrote " << base.string() << ".txt and "
                  << base.string() << ".json\n";
    }
    return 0;
}

int run_list() {
    for (const BuiltinScenario& b : builtin_scenarios()) {
        std::printf("%-14s %s\n", b.name.c_str(), b.summary.c_str());
    }
    return 0;
}

int run_describe(const std::string& scenario_arg) {
    const Scenario sc = load_scenario(scenario_arg);
    std::cout << sc.name;
    if (!sc.summary.empty()) std::cout << ": " << sc.summary;
    std::cout << "\n\n" << serialize_scenario(sc);

    const AugmentedSystem aug = close_system(sc.spec, sc.targets);
    std::cout << "\nfunctional basis (" << aug.size() << "):";
    for (std::size_t i = 0; i < aug.size(); ++i) {
        std::cout << (i == 0 ? " " : ", ") << aug.functional_name(i);
    }
    std::cout << "\nmoment-state dimension by order:";
    for (const int a : sc.orders) {
        std::cout << " " << a << "->"
                  << monomial_count(static_cast<int>(aug.size()), a);
    }
    std::cout << "\n";
    return 0;
}

int run_export(const std::string& scenario_arg, int order,
               const std::string& out_arg) {
    if (order < 1) throw ValidationError("order must be at least 1");
    const Scenario sc = load_scenario(scenario_arg);
    const TrigMomentEngine engine;
    const std::string text = render_moment_system_json(sc, order, engine);
    namespace fs = std::filesystem;
    const fs::path base = fs::path(resolve_out_dir(out_arg)) /
                          (sc.name + "-system-order" + std::to_string(order));
    atomic_write_file(base.string() + ".json", text);
    std::cout << text;
    std::cerr << "wrote " << base.string() << ".json\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact moment propagation for trigonometric-polynomial systems"};
    app.require_subcommand(1);

    std::string scenario_arg, method_arg = "exact", orders_arg, out_arg;
    RunSettings settings;
    int export_order = 1;

    CLI::App* propagate = app.add_subcommand(
        "propagate", "compute a moment table for a scenario");
    propagate->add_option("scenario", scenario_arg,
                          "built-in name or scenario file")->required();
    propagate->add_option("--method", method_arg,
                          "exact, direct, linear, unscented, or montecarlo");
    propagate->add_option("--orders", orders_arg,
                          "moment orders: a..b, a single order, or a list");
    propagate->add_option("--out", out_arg, "output directory");
    propagate->add_option("--ns", settings.sample_count,
                          "montecarlo sample count");
    CLI::Option* prop_seed =
        propagate->add_option("--seed", settings.seed, "montecarlo seed");
    double kappa_value = 0.0;
    CLI::Option* kappa_opt = propagate->add_option(
        "--kappa", kappa_value, "unscented spread parameter (default 3 - n)");

    CLI::App* compare = app.add_subcommand(
        "compare", "run all methods on a scenario or a published table");
    compare->add_option("scenario", scenario_arg,
                        "scenario, or table1/table2 for published cases")
        ->required();
    compare->add_option("--ns", settings.sample_count, "sample count");
    CLI::Option* cmp_seed =
        compare->add_option("--seed", settings.seed, "sampling seed");
    CLI::Option* cmp_out = compare->add_option("--out", out_arg,
                                               "also write .txt/.json here");

    app.add_subcommand("list", "list built-in scenarios");

    CLI::App* describe = app.add_subcommand(
        "describe", "show a scenario and its functional basis");
    describe->add_option("scenario", scenario_arg,
                         "built-in name or scenario file")->required();

    CLI::App* exporter = app.add_subcommand(
        "export-system", "write one moment-state linear system as JSON");
    exporter->add_option("scenario", scenario_arg,
                         "built-in name or scenario file")->required();
    exporter->add_option("--order", export_order, "moment order to assemble");
    exporter->add_option("--out", out_arg, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (kappa_opt->count() > 0) settings.kappa = kappa_value;
        if (app.got_subcommand(propagate)) {
            return run_propagate(scenario_arg, method_arg, orders_arg, out_arg,
                                 settings, prop_seed->count() > 0);
        }
        if (app.got_subcommand(compare)) {
            return run_compare(scenario_arg, settings.sample_count,
                               settings.seed, cmp_seed->count() > 0, out_arg,
                               cmp_out->count() > 0);
        }
        if (app.got_subcommand("list")) return run_list();
        if (app.got_subcommand(describe)) return run_describe(scenario_arg);
        if (app.got_subcommand(exporter)) {
            return run_export(scenario_arg, export_order, out_arg);
        }
        return 2;
    } catch (const momentprop::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 3;
    } catch (const ValidationError& e) {
        std::cerr << "invalid request: " << e.what() << "\n";
        return 4;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 5;
    } catch (const UnboundSymbol& e) {
        std::cerr << "unbound symbol: " << e.what() << "\n";
        return 6;
    } catch (const SeriesDivergence& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 7;
    } catch (const ResidueTooLarge& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 7;
    } catch (const CholeskyFailure& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 7;
    } catch (const momentprop::Error& e) {
        // capacity family: term budget, closure, basis size, monomial rank
        std::cerr << "capacity exceeded: " << e.what() << "\n";
        return 8;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
