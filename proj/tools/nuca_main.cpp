// nuca: construct, simulate, and analyze one-dimensional non-uniform
// cellular automata from JSON presentations.
//
// Exit codes: 0 completed analysis (any verdict), 2 usage or input error,
// 3 budget exhaustion, 4 internal verification failure.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "nuca/analysis.hpp"
#include "nuca/constructions.hpp"
#include "nuca/engine.hpp"
#include "nuca/io.hpp"
#include "nuca/recurrence.hpp"

using namespace nuca;
using io::Json;

namespace {

struct Global {
    std::uint64_t budget = 1ull << 24;
    int jobs = 1;
    std::uint64_t seed = 0;  // reserved for randomized modes
};

analysis::Budget budget_of(const Global& g) {
    analysis::Budget b;
    b.max_enum_states = g.budget;
    return b;
}

Json box_json(const Box& b) {
    Json j;
    j["from"] = b.x_min();
    j["to"] = b.x_max();
    return j;
}

Json orphan_json(const analysis::OrphanWitness& w, bool verified) {
    Json j;
    j["type"] = "orphan";
    j["domain"] = box_json(w.domain);
    j["pattern"] = w.pattern.states;
    j["mode"] = w.mode;
    j["verified"] = verified;
    return j;
}

Json collision_json(const Configuration& c1, const Configuration& c2, bool verified) {
    Json j;
    j["type"] = "collision";
    j["c1"] = io::emit_configuration(c1);
    j["c2"] = io::emit_configuration(c2);
    j["verified"] = verified;
    return j;
}

Json kernel_json(const analysis::KernelWitness& w, bool verified) {
    Json j;
    j["type"] = "kernel";
    j["element"] = io::emit_configuration(w.element);
    j["support"] = box_json(w.support_window);
    j["verified"] = verified;
    return j;
}

void print_report(const Json& j) { std::cout << j.dump(2) << "\n"; }

// recurrence/unique-pattern accept either a distribution or a template file.
struct SymbolicInput {
    DistPresentation dist;
    std::vector<std::string> names;
};

SymbolicInput load_symbolic(const std::string& path, std::uint64_t cell_budget) {
    io::ParsedFile f = io::parse_spec_file(path, cell_budget);
    if (auto* tpl = std::get_if<Template>(&f)) return {tpl->tau, tpl->symbols};
    if (auto* df = std::get_if<io::DistFile>(&f)) return {df->dist, df->rules.names};
    throw io::SchemaError("expected a distribution or template file: " + path);
}

std::string word_names(const std::vector<int>& word, const std::vector<std::string>& names) {
    std::string out;
    bool single = true;
    for (const std::string& n : names)
        if (n.size() != 1) single = false;
    for (std::size_t i = 0; i < word.size(); ++i) {
        if (i && !single) out += ",";
        out += names.at(static_cast<std::size_t>(word[i]));
    }
    return out;
}

constructions::Family family_of(const std::string& s) {
    if (s == "moore") return constructions::Family::Moore;
    if (s == "myhill") return constructions::Family::Myhill;
    throw CLI::ValidationError("--family", "expected moore or myhill");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"non-uniform cellular automata toolkit"};
    app.require_subcommand(1);

    Global g;
    app.add_option("--budget", g.budget, "enumeration budget (states)");
    app.add_option("--jobs", g.jobs, "worker count for searches");
    app.add_option("--seed", g.seed, "seed (reserved for randomized modes)");

    std::string dist_path, config_path, tpl_path, pgm_path, out_rules, out_dist;
    std::string mode_str = "auto", kind_str, family_str, backgrounds_str = "0";
    Coord from = 0, to = 0, steps = 0, max_width = 4, n_param = 1, n_max = 4;
    Coord position = 0, search_budget = 4096, q_state = 0, max_len = 10;
    long long bd = 1, bs = 2, bn = 1, br = 1;
    bool periodic = false, want_witness = false;
    std::optional<Coord> scan_lo, scan_hi;

    auto add_scan = [&](CLI::App* cmd) {
        cmd->add_option("--scan-from", scan_lo, "left end of the scan region");
        cmd->add_option("--scan-to", scan_hi, "right end of the scan region");
    };

    auto* c_sim = app.add_subcommand("simulate", "space-time trace of a configuration");
    c_sim->add_option("--dist", dist_path)->required();
    c_sim->add_option("--config", config_path)->required();
    c_sim->add_option("--from", from)->required();
    c_sim->add_option("--to", to)->required();
    c_sim->add_option("--steps", steps)->required();
    c_sim->add_option("--pgm", pgm_path, "write the trace as a P2 PGM file");

    auto* c_orphan = app.add_subcommand("orphan", "search for windowed orphans");
    c_orphan->add_option("--dist", dist_path)->required();
    c_orphan->add_option("--max-width", max_width);
    c_orphan->add_option("--mode", mode_str, "auto|exhaustive|rank");
    add_scan(c_orphan);

    auto* c_kernel = app.add_subcommand("kernel", "search for finite-support kernel elements");
    c_kernel->add_option("--dist", dist_path)->required();
    c_kernel->add_option("--max-width", max_width);
    add_scan(c_kernel);

    auto* c_preinj = app.add_subcommand("preinj", "search for pre-injectivity failures");
    c_preinj->add_option("--dist", dist_path)->required();
    c_preinj->add_option("--max-width", max_width);
    c_preinj->add_option("--backgrounds", backgrounds_str, "comma-separated background states");
    add_scan(c_preinj);

    auto* c_cyclic = app.add_subcommand("cyclic", "bijectivity of a cyclic distribution");
    c_cyclic->add_option("--dist", dist_path)->required();

    auto* c_wrap = app.add_subcommand("wrap", "wrap an eventually periodic distribution");
    c_wrap->add_option("--dist", dist_path)->required();
    c_wrap->add_option("--n", n_param)->required();
    c_wrap->add_option("--search-budget", search_budget);

    auto* c_probe = app.add_subcommand("probe-surjunctivity", "cyclic-wrap surjunctivity probe");
    c_probe->add_option("--dist", dist_path)->required();
    c_probe->add_option("--n-max", n_max);
    c_probe->add_option("--search-budget", search_budget);

    auto* c_construct = app.add_subcommand("construct", "build the paper rule families and lifts");
    c_construct->require_subcommand(1);
    auto* c_moore = c_construct->add_subcommand("moore", "f/g family and block distribution");
    auto* c_myhill = c_construct->add_subcommand("myhill", "gamma/delta family and block distribution");
    for (CLI::App* c : {c_moore, c_myhill}) {
        c->add_option("--n", n_param)->required();
        c->add_flag("--periodic", periodic, "periodic word instead of a single block");
        c->add_option("--position", position, "left end of the block");
        c->add_option("--out-rules", out_rules, "write the rule set JSON here");
        c->add_option("--out-dist", out_dist, "write the distribution JSON here");
        c->add_flag("--witness", want_witness, "verify and print the counterexample witness");
    }
    auto* c_lift = c_construct->add_subcommand("lift", "guess-track product lift of a template");
    c_lift->add_option("--template", tpl_path)->required();
    c_lift->add_option("--family", family_str)->required();
    c_lift->add_option("--out-rules", out_rules);
    c_lift->add_option("--out-dist", out_dist);
    c_lift->add_flag("--witness", want_witness);

    auto* c_rec = app.add_subcommand("recurrence", "recurrence and uniform recurrence verdicts");
    c_rec->add_option("--dist", dist_path)->required();
    c_rec->add_option("--max-len", max_len, "factor length bound for scans");

    auto* c_unique = app.add_subcommand("unique-pattern", "shortest unique factor");
    c_unique->add_option("--dist", dist_path)->required();

    auto* c_bounds = app.add_subcommand("bounds", "Moore/Myhill counting bounds");
    c_bounds->add_option("--kind", kind_str, "moore_d|myhill_1d")->required();
    c_bounds->add_option("--d", bd);
    c_bounds->add_option("--s", bs)->required();
    c_bounds->add_option("--n", bn)->required();
    c_bounds->add_option("--r", br)->required();

    auto* c_count = app.add_subcommand("count-images", "pigeonhole image counting");
    c_count->add_option("--dist", dist_path)->required();
    c_count->add_option("--from", from)->required();
    c_count->add_option("--to", to)->required();
    c_count->add_option("--q", q_state, "background state");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 2;
    }

    try {
        const analysis::Budget budget = budget_of(g);
        const analysis::Exec exec{g.jobs};
        std::optional<Box> scan;
        if (scan_lo && scan_hi) scan = Box::interval(*scan_lo, *scan_hi);

        if (*c_sim) {
            io::DistFile df = io::load_distribution(dist_path, g.budget);
            Configuration conf = io::load_configuration(config_path);
            auto rows = trace_spacetime(df.rules, df.dist, conf, Box::interval(from, to),
                                        static_cast<int>(steps));
            Json j;
            j["command"] = "simulate";
            j["window"] = box_json(Box::interval(from, to));
            j["steps"] = steps;
            Json jr = Json::array();
            for (const Pattern& row : rows) jr.push_back(row.states);
            j["rows"] = jr;
            if (!pgm_path.empty()) {
                io::emit_spacetime(rows, df.rules.alphabet.size(), pgm_path);
                j["pgm"] = pgm_path;
            }
            print_report(j);
        } else if (*c_orphan) {
            io::DistFile df = io::load_distribution(dist_path, g.budget);
            analysis::CheckMode mode = mode_str == "rank"         ? analysis::CheckMode::Rank
                                       : mode_str == "exhaustive" ? analysis::CheckMode::Exhaustive
                                                                  : analysis::CheckMode::Auto;
            auto w = analysis::orphan_search(df.rules, df.dist, max_width, scan, mode, budget, exec);
            Json j;
            j["command"] = "orphan";
            j["max_width"] = max_width;
            j["verdict"] = w ? "orphan" : "surjective_up_to_width";
            if (w) {
                if (!analysis::verify_orphan(df.rules, df.dist, *w, budget))
                    throw VerificationError("orphan witness failed re-check");
                j["witness"] = orphan_json(*w, true);
            }
            print_report(j);
        } else if (*c_kernel) {
            io::DistFile df = io::load_distribution(dist_path, g.budget);
            auto w = analysis::kernel_search(df.rules, df.dist, max_width, scan, exec);
            Json j;
            j["command"] = "kernel";
            j["max_width"] = max_width;
            j["verdict"] = w ? "kernel_element" : "trivial_kernel_up_to_width";
            if (w) j["witness"] = kernel_json(*w, analysis::verify_kernel(df.rules, df.dist, *w));
            print_report(j);
        } else if (*c_preinj) {
            io::DistFile df = io::load_distribution(dist_path, g.budget);
            std::vector<State> bgs;
            for (std::size_t p = 0; p < backgrounds_str.size();) {
                std::size_t q = backgrounds_str.find(',', p);
                if (q == std::string::npos) q = backgrounds_str.size();
                bgs.push_back(static_cast<State>(std::stoul(backgrounds_str.substr(p, q - p))));
                p = q + 1;
            }
            auto w = analysis::preinjectivity_search(df.rules, df.dist, max_width, bgs, scan, budget, exec);
            Json j;
            j["command"] = "preinj";
            j["max_width"] = max_width;
            j["verdict"] = w ? "collision" : "preinjective_up_to_width";
            if (w)
                j["witness"] = collision_json(
                    w->c1, w->c2,
                    analysis::verify_collision(df.rules, df.dist, w->c1, w->c2, w->diff_window));
            print_report(j);
        } else if (*c_cyclic) {
            io::DistFile df = io::load_distribution(dist_path, g.budget);
            analysis::CyclicReport rep = analysis::cyclic_bijectivity_check(df.rules, df.dist, budget);
            Json j;
            j["command"] = "cyclic";
            j["length"] = df.dist.cyclic().length;
            j["injective"] = rep.injective;
            j["surjective"] = rep.surjective;
            j["method"] = rep.method;
            if (rep.collision)
                j["witness"] = collision_json(rep.collision->first, rep.collision->second, true);
            print_report(j);
        } else if (*c_wrap) {
            io::DistFile df = io::load_distribution(dist_path, g.budget);
            auto res = constructions::wrap_distribution(df.dist, n_param, search_budget);
            Json j;
            j["command"] = "wrap";
            j["n"] = n_param;
            if (!res) {
                j["verdict"] = "suffix_not_found";
                j["note"] = "the mirrored direction may still satisfy the tail property";
            } else {
                j["verdict"] = "wrapped";
                j["m_n"] = res->m_n;
                j["occurrence"] = res->occurrence;
                j["psi"] = io::emit_distribution(res->psi, df.rules, df.ruleset_path.string());
            }
            print_report(j);
        } else if (*c_probe) {
            io::DistFile df = io::load_distribution(dist_path, g.budget);
            analysis::ProbeReport rep =
                analysis::surjunctivity_probe(df.rules, df.dist, n_max, search_budget, budget);
            Json j;
            j["command"] = "probe-surjunctivity";
            j["n_max"] = n_max;
            Json wraps = Json::array();
            for (const auto& w : rep.wraps) {
                Json e;
                e["n"] = w.n;
                if (!w.wrap_found) {
                    e["error"] = w.error;
                } else {
                    e["m_n"] = w.m_n;
                    e["occurrence"] = w.occurrence;
                    e["injective"] = w.injective;
                    e["surjective"] = w.surjective;
                    e["small_wrap"] = w.small_wrap;
                    if (!w.injective) {
                        e["lift_case"] = w.lift_case;
                        e["lift_verified"] = w.lift_verified;
                        e["witness_reported"] = w.witness_reported;
                        if (w.witness)
                            e["witness"] = collision_json(w.witness->first, w.witness->second,
                                                          w.lift_verified);
                    }
                    if (!w.note.empty()) e["note"] = w.note;
                }
                wraps.push_back(e);
            }
            j["wraps"] = wraps;
            if (rep.stopped_early) j["stopped"] = rep.stop_reason;
            print_report(j);
        } else if (*c_moore || *c_myhill) {
            constructions::Family fam =
                *c_moore ? constructions::Family::Moore : constructions::Family::Myhill;
            RuleSet rules = constructions::build_paper_rules(fam, n_param);
            constructions::Placement pl{periodic, position};
            DistPresentation dist = constructions::build_paper_distribution(fam, n_param, pl);
            Json j;
            j["command"] = *c_moore ? "construct-moore" : "construct-myhill";
            j["n"] = n_param;
            j["rules"] = io::emit_ruleset(rules);
            std::string ref = out_rules.empty() ? "rules.json" : out_rules;
            j["distribution"] = io::emit_distribution(dist, rules, ref);
            if (!out_rules.empty()) {
                std::ofstream f(out_rules);
                f << io::emit_ruleset(rules).dump(2) << "\n";
            }
            if (!out_dist.empty()) {
                std::ofstream f(out_dist);
                f << io::emit_distribution(dist, rules, ref).dump(2) << "\n";
            }
            if (want_witness && !periodic) {
                constructions::PaperWitness w =
                    constructions::paper_witness(fam, n_param, rules, dist, position);
                if (w.orphan) j["witness"] = orphan_json(*w.orphan, true);
                if (w.collision)
                    j["witness"] = collision_json(w.collision->c1, w.collision->c2, true);
            }
            print_report(j);
        } else if (*c_lift) {
            constructions::Family fam = family_of(family_str);
            Template tpl = io::load_template(tpl_path, g.budget);
            Coord unique_len = recurrence::shortest_unique_pattern(tpl.tau).length;
            Coord n = std::max<Coord>(unique_len, 2);
            RuleSet base = constructions::build_paper_rules(fam, n);
            constructions::Lift lift = constructions::template_lift(tpl, base);
            Json j;
            j["command"] = "construct-lift";
            j["family"] = family_str;
            j["n"] = lift.n;
            j["unique_position"] = lift.unique_pos;
            Json uw = Json::array();
            for (int s : lift.unique_word) uw.push_back(tpl.symbols.at(static_cast<std::size_t>(s)));
            j["unique_word"] = uw;
            j["lifted_alphabet_size"] = lift.lifted.alphabet.size();
            std::string ref = out_rules.empty() ? "lifted_rules.json" : out_rules;
            if (!out_rules.empty()) {
                std::ofstream f(out_rules);
                f << io::emit_ruleset(lift.lifted).dump(2) << "\n";
            }
            if (!out_dist.empty()) {
                std::ofstream f(out_dist);
                f << io::emit_distribution(lift.tau_alpha, lift.lifted, ref).dump(2) << "\n";
            }
            if (want_witness) {
                constructions::LiftWitness w = constructions::lift_counterexample(lift, fam);
                if (w.orphan) j["witness"] = orphan_json(*w.orphan, true);
                if (w.collision)
                    j["witness"] = collision_json(w.collision->c1, w.collision->c2, true);
            }
            print_report(j);
        } else if (*c_rec) {
            SymbolicInput in = load_symbolic(dist_path, g.budget);
            recurrence::RecurrenceVerdict v = recurrence::is_recurrent(in.dist, max_len);
            Json j;
            j["command"] = "recurrence";
            switch (v.kind) {
                case recurrence::RecurrenceKind::Recurrent:
                    j["verdict"] = "Recurrent";
                    j["period"] = v.period;
                    break;
                case recurrence::RecurrenceKind::NonRecurrent:
                    j["verdict"] = "NonRecurrent";
                    j["witness"] = word_names(v.witness, in.names);
                    j["witness_position"] = v.witness_pos;
                    break;
                case recurrence::RecurrenceKind::BoundedRecurrent:
                    j["verdict"] = "BoundedRecurrent";
                    j["bound"] = v.bound;
                    if (v.scan_counterexample)
                        j["scan_counterexample"] = word_names(*v.scan_counterexample, in.names);
                    break;
            }
            recurrence::UniformReport ur = recurrence::uniform_recurrence_check(in.dist, max_len);
            Json ju;
            ju["uniform"] = ur.uniform;
            ju["exact"] = ur.exact;
            if (ur.uniform) {
                Json table = Json::array();
                for (Coord k = 1; k < static_cast<Coord>(ur.window_width.size()); ++k)
                    table.push_back(ur.window_width[static_cast<std::size_t>(k)]);
                ju["window_width"] = table;
            } else {
                ju["failing_pattern"] = word_names(ur.failing_pattern, in.names);
                ju["failing_window"] =
                    box_json(Box::interval(ur.failing_window_lo, ur.failing_window_hi));
            }
            j["uniform_recurrence"] = ju;
            print_report(j);
        } else if (*c_unique) {
            SymbolicInput in = load_symbolic(dist_path, g.budget);
            recurrence::UniquePattern u = recurrence::shortest_unique_pattern(in.dist);
            Json j;
            j["command"] = "unique-pattern";
            j["position"] = u.position;
            j["length"] = u.length;
            j["pattern"] = word_names(u.pattern, in.names);
            print_report(j);
        } else if (*c_bounds) {
            analysis::BoundKind kind;
            if (kind_str == "moore_d")
                kind = analysis::BoundKind::MooreD;
            else if (kind_str == "myhill_1d")
                kind = analysis::BoundKind::Myhill1D;
            else
                throw CLI::ValidationError("--kind", "expected moore_d or myhill_1d");
            analysis::CountingBound b =
                analysis::counting_bound(kind, static_cast<int>(bd), bs, bn, br);
            Json j;
            j["command"] = "bounds";
            j["kind"] = kind_str;
            j["k"] = b.value;
            j["range_verified"] = b.range_verified;
            print_report(j);
        } else if (*c_count) {
            io::DistFile df = io::load_distribution(dist_path, g.budget);
            analysis::ImageCount ic = analysis::image_count_finite_support(
                df.rules, df.dist, Box::interval(from, to), static_cast<State>(q_state), budget);
            Json j;
            j["command"] = "count-images";
            j["interval"] = box_json(Box::interval(from, to));
            j["q"] = q_state;
            j["domain_count"] = ic.domain_count;
            j["image_count"] = ic.image_count;
            j["preinjectivity_failure_forced"] = ic.image_count < ic.domain_count;
            print_report(j);
        }
        return 0;
    } catch (const BudgetError& e) {
        std::cerr << "budget exhausted: " << e.what() << "\n";
        return 3;
    } catch (const VerificationError& e) {
        std::cerr << "internal verification failure: " << e.what() << "\n";
        return 4;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
