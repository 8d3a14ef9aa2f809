#pragma once

// Command-line front end: bounds, planning, simulation and figure-data
// emission on top of the library operations. Kept in a header so the test
// suite can drive the exact code path the binary runs.

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ensemble_bounds/ensemble_bounds.hpp"

namespace ensemble_bounds::cli {

namespace detail {

inline void print_error(std::ostream& err, const std::string& code,
                        const std::string& message,
                        const nlohmann::json& extra = nlohmann::json::object()) {
    nlohmann::json j = extra;
    j["error"] = code;
    j["message"] = message;
    err << j.dump() << "\n";
}

inline double parse_double(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw DomainError("cannot parse " + what + " '" + s + "'");
    }
}

inline double checked_pi(double pi) {
    if (!(pi >= 0.5 && pi <= 1.0)) {
        throw ConfidenceOutOfRange("accuracy " + std::to_string(pi) +
                                   " outside [0.5, 1]");
    }
    return pi;
}

inline ClassifierProfile parse_profile(const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos) {
        throw DomainError("profile '" + s + "' must be 'pi,iota'");
    }
    ClassifierProfile p{parse_double(s.substr(0, comma), "profile accuracy"),
                        parse_double(s.substr(comma + 1), "profile information")};
    checked_pi(p.accuracy);
    return p;
}

/// Canonical-classifier shorthand: name:pi[:iota] with name one of
/// specialist | generalist | more | less.
inline ConfidenceDistribution parse_canonical(const std::string& s) {
    std::vector<std::string> parts;
    std::string part;
    std::istringstream in(s);
    while (std::getline(in, part, ':')) parts.push_back(part);
    if (parts.size() < 2 || parts.size() > 3) {
        throw DomainError("canonical shorthand '" + s + "' must be name:pi[:iota]");
    }
    const std::string& name = parts[0];
    const double pi = checked_pi(parse_double(parts[1], "canonical accuracy"));
    std::optional<double> iota;
    if (parts.size() == 3) iota = parse_double(parts[2], "canonical information");

    if (name == "specialist" || name == "generalist") {
        if (iota) {
            throw DomainError("canonical '" + name + "' takes no information value");
        }
        return name == "specialist" ? specialist(pi) : generalist(pi);
    }
    if (name == "more" || name == "less") {
        if (!iota) {
            throw DomainError("canonical '" + name + "' needs name:pi:iota");
        }
        return name == "more" ? more_specialized(pi, *iota)
                              : less_specialized(pi, *iota);
    }
    throw DomainError("unknown canonical classifier '" + name +
                      "' (use specialist|generalist|more|less)");
}

inline std::uint64_t parse_seed(const std::string& s) {
    try {
        std::size_t pos = 0;
        const std::uint64_t v = std::stoull(s, &pos, 0);  // base 0: decimal or 0x hex
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw DomainError("cannot parse seed '" + s + "'");
    }
}

inline std::pair<std::size_t, std::size_t> parse_k_range(const std::string& s) {
    const auto dots = s.find("..");
    if (dots == std::string::npos) {
        const auto k = static_cast<std::size_t>(
            parse_double(s, "ensemble size"));
        if (k < 1) throw DomainError("ensemble size must be at least 1");
        return {k, k};
    }
    const auto a = static_cast<std::size_t>(
        parse_double(s.substr(0, dots), "ensemble size"));
    const auto b = static_cast<std::size_t>(
        parse_double(s.substr(dots + 2), "ensemble size"));
    if (a < 1 || b < a) throw DomainError("bad ensemble size range '" + s + "'");
    return {a, b};
}

inline VoteMode parse_mode(const std::string& s) {
    if (s == "cwmv") return VoteMode::cwmv;
    if (s == "lcwmv") return VoteMode::lcwmv;
    throw DomainError("mode must be cwmv or lcwmv, got '" + s + "'");
}

/// Ensemble information range from accuracies alone (generalist and
/// specialist ensembles at the given accuracies); with a single member this
/// is the admissible information interval of that classifier.
inline EnsembleBounds info_bounds_from_accuracies(const std::vector<double>& pis) {
    if (pis.empty()) throw EmptyEnsemble("no member accuracies");
    std::vector<ConfidenceDistribution> lo, hi;
    for (double pi : pis) {
        lo.push_back(generalist(pi));
        hi.push_back(specialist(pi));
    }
    EnsembleBounds b;
    b.metric = Metric::information;
    b.k = pis.size();
    b.lower = ensemble_information(lo);
    b.upper = ensemble_information(hi);
    b.lower_witness = "generalist";
    b.upper_witness = "specialist";
    return b;
}

struct FigureTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

inline void emit_table(const FigureTable& t, const std::string& format,
                       std::ostream& out) {
    if (format == "json") {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& row : t.rows) {
            nlohmann::json obj;
            for (std::size_t i = 0; i < t.header.size(); ++i) {
                const std::string& cell = i < row.size() ? row[i] : "";
                if (cell.empty()) {
                    obj[t.header[i]] = nullptr;
                } else {
                    try {
                        std::size_t pos = 0;
                        const double v = std::stod(cell, &pos);
                        if (pos == cell.size()) {
                            obj[t.header[i]] = v;
                            continue;
                        }
                    } catch (const std::exception&) {
                    }
                    obj[t.header[i]] = cell;
                }
            }
            arr.push_back(obj);
        }
        out << arr.dump(2) << "\n";
    } else {
        csv::Writer w(out);
        w.row(t.header);
        for (const auto& row : t.rows) w.row(row);
    }
}

}  // namespace detail

struct CliOptions {
    std::ostream& out;
    std::ostream& err;
};

inline int run_cli(std::vector<std::string> args, std::ostream& out,
                   std::ostream& err) {
    CLI::App app{"Bounds, planning and Monte Carlo verification for ensembles "
                 "of calibrated binary classifiers"};
    app.require_subcommand(1);

    // --- bounds ---
    auto* bounds_cmd = app.add_subcommand(
        "bounds", "Ensemble accuracy/information bounds from member summaries");
    std::vector<double> pis;
    std::vector<std::string> profile_strs;
    std::vector<double> iotas;
    std::string metric_str = "accuracy";
    bool info_only = false;
    bounds_cmd->add_option("--pi", pis, "member accuracy (repeatable)");
    bounds_cmd->add_option("--profile", profile_strs,
                           "member 'pi,iota' profile (repeatable)");
    bounds_cmd->add_option("--iota", iotas,
                           "member information for --info-only (repeatable)");
    bounds_cmd->add_option("--metric", metric_str, "accuracy|information");
    bounds_cmd->add_flag("--info-only", info_only,
                         "bound ensemble information from member information only");

    // --- plan ---
    auto* plan_cmd = app.add_subcommand(
        "plan", "Minimal ensemble size guaranteeing a target accuracy");
    double plan_pi = 0.0, plan_target = 0.0;
    std::optional<double> plan_iota, plan_fraction;
    std::size_t plan_k_max = 50;
    plan_cmd->add_option("--pi", plan_pi, "member accuracy")->required();
    plan_cmd->add_option("--iota", plan_iota, "member information (bits)");
    plan_cmd->add_option("--info-fraction", plan_fraction,
                         "member information as a fraction of the admissible range");
    plan_cmd->add_option("--target", plan_target, "target ensemble accuracy")
        ->required();
    plan_cmd->add_option("--k-max", plan_k_max, "largest ensemble size to try");

    // --- simulate ---
    auto* sim_cmd = app.add_subcommand(
        "simulate", "Seeded Monte Carlo estimate of ensemble accuracy/information");
    std::vector<std::string> dist_files, canonicals;
    std::size_t trials = 0;
    std::string seed_str, mode_str = "lcwmv";
    std::size_t threads = 0;
    sim_cmd->add_option("--dist", dist_files,
                        "JSON confidence-distribution file (repeatable)");
    sim_cmd->add_option("--canonical", canonicals,
                        "canonical member name:pi[:iota] (repeatable)");
    sim_cmd->add_option("--trials", trials, "number of Monte Carlo trials")
        ->required();
    sim_cmd->add_option("--seed", seed_str, "seed (decimal or 0x hex); "
                        "defaults to ENSEMBLE_BOUNDS_SEED or 0");
    sim_cmd->add_option("--mode", mode_str, "cwmv|lcwmv");
    sim_cmd->add_option("--threads", threads,
                        "worker threads (0 = auto; result is identical)");

    // --- figure ---
    auto* fig_cmd = app.add_subcommand("figure", "Emit figure data (CSV/JSON)");
    fig_cmd->require_subcommand(1);
    fig_cmd->fallthrough();  // --format/--out may follow the figure name
    std::string fig_format = "csv", fig_out_path;
    fig_cmd->add_option("--format", fig_format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    fig_cmd->add_option("--out", fig_out_path, "output path (default stdout)");

    auto* fig_bounds = fig_cmd->add_subcommand(
        "bounds_vs_k", "bounds as a function of ensemble size");
    std::vector<double> fig_pis;
    std::vector<double> fig_iotas, fig_fractions;
    std::string fig_k_range = "1..15";
    fig_bounds->add_option("--pi", fig_pis, "member accuracy (repeatable)")
        ->required();
    fig_bounds->add_option("--iota", fig_iotas, "member information (repeatable)");
    fig_bounds->add_option("--info-fraction", fig_fractions,
                           "member information fraction (repeatable)");
    fig_bounds->add_option("--k", fig_k_range, "ensemble size range A..B");

    auto* fig_plan = fig_cmd->add_subcommand(
        "plan_vs_accuracy", "minimal ensemble size over member accuracies");
    double fig_target = 0.95, fig_pi_min = 0.55, fig_pi_max = 0.95,
           fig_pi_step = 0.025;
    std::size_t fig_k_max = 100;
    fig_plan->add_option("--target", fig_target, "target ensemble accuracy");
    fig_plan->add_option("--pi-min", fig_pi_min, "smallest member accuracy");
    fig_plan->add_option("--pi-max", fig_pi_max, "largest member accuracy");
    fig_plan->add_option("--pi-step", fig_pi_step, "accuracy step");
    fig_plan->add_option("--k-max", fig_k_max, "largest ensemble size to try");

    auto* fig_conf = fig_cmd->add_subcommand(
        "confidence_example", "noise-model density, confidence curve and "
                              "discretized distribution");
    double fig_sigma = 2.1, fig_acc = 0.7;
    std::optional<double> fig_mu;
    std::size_t fig_cells = 512, fig_samples = 401;
    fig_conf->add_option("--sigma", fig_sigma, "noise standard deviation");
    fig_conf->add_option("--accuracy", fig_acc,
                         "target overall accuracy (calibrates mu)");
    fig_conf->add_option("--mu", fig_mu, "class-mean magnitude (overrides --accuracy)");
    fig_conf->add_option("--cells", fig_cells, "discretization cells");
    fig_conf->add_option("--samples", fig_samples, "curve sample count");

    auto* fig_dists = fig_cmd->add_subcommand(
        "classifier_distributions", "the four extremal constructions at (pi, iota)");
    double fig_d_pi = 0.7, fig_d_iota = 0.25;
    fig_dists->add_option("--pi", fig_d_pi, "accuracy");
    fig_dists->add_option("--iota", fig_d_iota, "information (bits)");

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e, out, err);
        }
        detail::print_error(err, "UsageError", e.what());
        return 2;
    }

    try {
        if (bounds_cmd->parsed()) {
            if (metric_str != "accuracy" && metric_str != "information") {
                throw DomainError("metric must be accuracy or information");
            }
            for (double pi : pis) detail::checked_pi(pi);
            std::vector<ClassifierProfile> profiles;
            for (const auto& s : profile_strs) {
                profiles.push_back(detail::parse_profile(s));
            }

            EnsembleBounds b;
            if (info_only) {
                std::vector<double> all_iotas = iotas;
                for (const auto& p : profiles) all_iotas.push_back(p.information);
                b = ensemble_info_bounds_info_only(all_iotas);
            } else if (!profiles.empty()) {
                if (!pis.empty()) {
                    throw DomainError("give either --pi or --profile, not both");
                }
                b = metric_str == "accuracy" ? accuracy_bounds(profiles)
                                             : ensemble_info_bounds(profiles);
            } else if (metric_str == "accuracy") {
                b = accuracy_bounds(pis);
            } else {
                b = detail::info_bounds_from_accuracies(pis);
            }
            out << to_json(b).dump() << "\n";
            return 0;
        }

        if (plan_cmd->parsed()) {
            detail::checked_pi(plan_pi);
            if (plan_iota && plan_fraction) {
                throw DomainError("give either --iota or --info-fraction, not both");
            }
            if (!plan_iota && !plan_fraction) {
                throw DomainError("one of --iota or --info-fraction is required");
            }
            const double iota =
                plan_iota ? *plan_iota : iota_from_fraction(plan_pi, *plan_fraction);
            const PlanResult r =
                min_ensemble_size(plan_pi, iota, plan_target, plan_k_max);
            out << to_json(r).dump() << "\n";
            return 0;
        }

        if (sim_cmd->parsed()) {
            std::vector<ConfidenceDistribution> members;
            for (const auto& path : dist_files) {
                std::ifstream in(path);
                if (!in) throw DomainError("cannot open distribution file '" + path + "'");
                nlohmann::json j;
                try {
                    in >> j;
                } catch (const nlohmann::json::exception& e) {
                    throw DomainError("malformed JSON in '" + path + "': " + e.what());
                }
                members.push_back(distribution_from_json(j));
            }
            for (const auto& s : canonicals) {
                members.push_back(detail::parse_canonical(s));
            }
            std::uint64_t seed = 0;
            if (!seed_str.empty()) {
                seed = detail::parse_seed(seed_str);
            } else if (const char* env = std::getenv("ENSEMBLE_BOUNDS_SEED")) {
                seed = detail::parse_seed(env);
            }
            const SimReport r =
                mc_estimate(members, trials, seed, detail::parse_mode(mode_str), threads);
            out << to_json(r).dump() << "\n";
            return 0;
        }

        // figure subcommands
        std::ostream* sink = &out;
        std::ofstream file_out;
        if (!fig_out_path.empty()) {
            file_out.open(fig_out_path);
            if (!file_out) throw DomainError("cannot open output file '" + fig_out_path + "'");
            sink = &file_out;
        }

        detail::FigureTable table;
        if (fig_bounds->parsed()) {
            for (double pi : fig_pis) detail::checked_pi(pi);
            const auto [k_lo, k_hi] = detail::parse_k_range(fig_k_range);
            std::vector<std::optional<double>> levels;  // absolute iota per panel
            if (fig_iotas.empty() && fig_fractions.empty()) {
                levels.push_back(std::nullopt);
            }
            for (double v : fig_iotas) levels.emplace_back(v);
            table.header = {"pi",         "iota",       "k",         "lower_thm1",
                            "upper_thm1", "lower_thm2", "upper_thm2"};
            for (double pi : fig_pis) {
                std::vector<std::optional<double>> panel_levels = levels;
                for (double fr : fig_fractions) {
                    panel_levels.emplace_back(iota_from_fraction(pi, fr));
                }
                for (const auto& iota : panel_levels) {
                    for (std::size_t k = k_lo; k <= k_hi; ++k) {
                        const auto b1 = accuracy_bounds(std::vector<double>(k, pi));
                        std::vector<std::string> row{
                            csv::format(pi), iota ? csv::format(*iota) : "",
                            std::to_string(k), csv::format(b1.lower),
                            csv::format(b1.upper)};
                        if (iota) {
                            const auto b2 = accuracy_bounds(std::vector<ClassifierProfile>(
                                k, ClassifierProfile{pi, *iota}));
                            row.push_back(csv::format(b2.lower));
                            row.push_back(csv::format(b2.upper));
                        } else {
                            row.emplace_back();
                            row.emplace_back();
                        }
                        table.rows.push_back(std::move(row));
                    }
                }
            }
        } else if (fig_plan->parsed()) {
            table.header = {"pi", "k_min_info_min", "k_min_info_50", "k_min_info_90",
                            "k_min_info_max"};
            const double fractions[] = {0.0, 0.5, 0.9, 1.0};
            for (double pi = fig_pi_min; pi <= fig_pi_max + 1e-12; pi += fig_pi_step) {
                detail::checked_pi(pi);
                std::vector<std::string> row{csv::format(pi)};
                for (double fr : fractions) {
                    try {
                        const auto r = min_ensemble_size(
                            pi, iota_from_fraction(pi, fr), fig_target, fig_k_max);
                        row.push_back(std::to_string(r.k_min));
                    } catch (const TargetUnreachable&) {
                        row.emplace_back();
                    }
                }
                table.rows.push_back(std::move(row));
            }
        } else if (fig_conf->parsed()) {
            if (!(fig_sigma > 0.0)) throw DomainError("sigma must be positive");
            if (fig_mu && !(*fig_mu >= 0.0)) {
                throw DomainError("mu must be nonnegative");
            }
            const NoiseModel model =
                fig_mu ? NoiseModel{*fig_mu, fig_sigma}
                       : NoiseModel::for_accuracy(fig_acc, fig_sigma);
            table.header = {"kind", "x", "density", "confidence", "c", "w"};
            const double x_max = model.mu + 4.0 * model.sigma;
            if (fig_samples < 2) throw DomainError("need at least 2 curve samples");
            for (std::size_t i = 0; i < fig_samples; ++i) {
                const double x = -x_max + 2.0 * x_max * static_cast<double>(i) /
                                              static_cast<double>(fig_samples - 1);
                table.rows.push_back({"curve", csv::format(x),
                                      csv::format(model.density_at(x)),
                                      csv::format(model.confidence_at(x)), "", ""});
            }
            const auto f = gaussian_confidence_distribution(model, fig_cells);
            for (std::size_t i = 0; i < f.size(); ++i) {
                table.rows.push_back({"point", "", "", "", csv::format(f.confidence(i)),
                                      csv::format(f.weight(i))});
            }
        } else if (fig_dists->parsed()) {
            detail::checked_pi(fig_d_pi);
            table.header = {"classifier", "c", "w"};
            const std::pair<std::string, ConfidenceDistribution> rows[] = {
                {"specialist", specialist(fig_d_pi)},
                {"generalist", generalist(fig_d_pi)},
                {"more_specialized", more_specialized(fig_d_pi, fig_d_iota)},
                {"less_specialized", less_specialized(fig_d_pi, fig_d_iota)},
            };
            for (const auto& [name, f] : rows) {
                for (std::size_t i = 0; i < f.size(); ++i) {
                    table.rows.push_back(
                        {name, csv::format(f.confidence(i)), csv::format(f.weight(i))});
                }
            }
        }
        detail::emit_table(table, fig_format, *sink);
        return 0;
    } catch (const TargetUnreachable& e) {
        detail::print_error(err, e.code(), e.what(),
                            {{"k_max", e.k_max()},
                             {"achieved_lower_bound", e.achieved_lower_bound()},
                             {"target", e.target()}});
        return 3;
    } catch (const Error& e) {
        detail::print_error(err, e.code(), e.what());
        return 2;
    } catch (const std::exception& e) {
        detail::print_error(err, "InternalError", e.what());
        return 1;
    }
}

}  // namespace ensemble_bounds::cli
