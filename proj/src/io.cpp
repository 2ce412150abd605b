#include "nuca/io.hpp"

#include <fstream>
#include <sstream>

namespace nuca {
namespace io {

namespace {

[[noreturn]] void fail(const std::string& key, const std::string& what) {
    throw SchemaError("schema violation at \"" + key + "\": " + what);
}

const Json& need(const Json& j, const std::string& key) {
    auto it = j.find(key);
    if (it == j.end()) fail(key, "missing key");
    return *it;
}

Coord need_int(const Json& j, const std::string& key) {
    const Json& v = need(j, key);
    if (!v.is_number_integer()) fail(key, "expected an integer");
    return v.get<Coord>();
}

Coord opt_int(const Json& j, const std::string& key, Coord fallback) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_number_integer()) fail(key, "expected an integer");
    return it->get<Coord>();
}

int rule_ref(const Json& v, const RuleSet& rules, const std::string& key) {
    if (v.is_string()) {
        int idx = rules.index_of(v.get<std::string>());
        if (idx < 0) fail(key, "unknown rule name \"" + v.get<std::string>() + "\"");
        return idx;
    }
    if (v.is_number_integer()) {
        Coord idx = v.get<Coord>();
        if (idx < 0 || idx >= static_cast<Coord>(rules.size())) fail(key, "rule index out of range");
        return static_cast<int>(idx);
    }
    fail(key, "expected a rule name or index");
}

std::vector<int> rule_word(const Json& j, const RuleSet& rules, const std::string& key) {
    const Json& v = need(j, key);
    if (!v.is_array() || v.empty()) fail(key, "expected a non-empty array");
    std::vector<int> word;
    for (const Json& e : v) word.push_back(rule_ref(e, rules, key));
    return word;
}

std::vector<State> state_word(const Json& j, const std::string& key) {
    const Json& v = need(j, key);
    if (!v.is_array() || v.empty()) fail(key, "expected a non-empty array");
    std::vector<State> word;
    for (const Json& e : v) {
        if (!e.is_number_unsigned() && !e.is_number_integer()) fail(key, "expected states");
        Coord s = e.get<Coord>();
        if (s < 0) fail(key, "negative state");
        word.push_back(static_cast<State>(s));
    }
    return word;
}

}  // namespace

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open file: " + path.string());
    Json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError("malformed JSON in " + path.string() + ": " + e.what());
    }
    if (!j.is_object()) throw SchemaError("expected a JSON object in " + path.string());
    return j;
}

RuleSet parse_ruleset(const Json& j) {
    const Json& ja = need(j, "alphabet");
    const Json& jt = need(ja, "tracks");
    if (!jt.is_array() || jt.empty()) fail("alphabet.tracks", "expected a non-empty array");
    std::vector<std::uint32_t> tracks;
    for (const Json& t : jt) {
        if (!t.is_number_integer() || t.get<Coord>() < 1) fail("alphabet.tracks", "track sizes must be >= 1");
        tracks.push_back(static_cast<std::uint32_t>(t.get<Coord>()));
    }
    Alphabet alpha(tracks);

    const Json& jn = need(j, "neighborhood");
    if (!jn.is_array() || jn.empty()) fail("neighborhood", "expected a non-empty array of offsets");
    Neighborhood nb;
    nb.dim = 1;
    for (const Json& o : jn) {
        if (o.is_number_integer()) {
            nb.offsets.push_back({o.get<Coord>(), 0});
        } else if (o.is_array() && o.size() == 2) {
            nb.offsets.push_back({o[0].get<Coord>(), o[1].get<Coord>()});
            nb.dim = 2;
        } else {
            fail("neighborhood", "offsets are integers or [x,y] pairs");
        }
    }

    const Json& jr = need(j, "rules");
    if (!jr.is_array() || jr.empty()) fail("rules", "expected a non-empty array");
    std::vector<LocalRule> rules;
    std::vector<std::string> names;
    const std::uint32_t arity = static_cast<std::uint32_t>(nb.arity());
    for (const Json& r : jr) {
        names.push_back(need(r, "name").get<std::string>());
        const bool has_table = r.contains("table");
        const bool has_linear = r.contains("linear");
        if (has_table == has_linear) fail("rules", "each rule needs exactly one of \"table\" or \"linear\"");
        if (has_table) {
            std::vector<State> table = state_word(r, "table");
            std::uint64_t want = 1;
            for (std::uint32_t i = 0; i < arity; ++i) want *= alpha.size();
            if (table.size() != want) fail("table", "length must be size^arity");
            rules.push_back(LocalRule::from_table(alpha, arity, std::move(table)));
        } else {
            const Json& jl = r["linear"];
            if (!jl.is_array() || jl.size() != alpha.num_tracks())
                fail("linear", "expected one clause per output track");
            LinearForm form;
            for (const Json& tf : jl) {
                TrackForm track;
                const Json& terms = need(tf, "terms");
                if (!terms.is_array()) fail("linear.terms", "expected an array of [neighbor, track]");
                for (const Json& t : terms) {
                    if (!t.is_array() || t.size() != 2) fail("linear.terms", "expected [neighbor, track]");
                    track.terms.push_back({static_cast<std::uint32_t>(t[0].get<Coord>()),
                                           static_cast<std::uint32_t>(t[1].get<Coord>())});
                }
                track.constant = static_cast<std::uint32_t>(opt_int(tf, "const", 0)) & 1u;
                form.tracks.push_back(std::move(track));
            }
            rules.push_back(LocalRule::from_linear(alpha, arity, std::move(form)));
        }
    }
    return RuleSet(alpha, nb, std::move(rules), std::move(names));
}

DistPresentation parse_distribution_body(const Json& j, const RuleSet& rules,
                                         std::uint64_t cell_budget) {
    std::string kind = need(j, "kind").get<std::string>();
    if (kind == "periodic") {
        return DistPresentation{PeriodicWord{rule_word(j, rules, "word"), opt_int(j, "anchor", 0)}};
    }
    if (kind == "eventually_periodic") {
        EventuallyPeriodicWord ep;
        ep.left = rule_word(j, rules, "left");
        ep.middle = rule_word(j, rules, "middle");
        ep.right = rule_word(j, rules, "right");
        ep.middle_start = need_int(j, "middle_start");
        return DistPresentation{ep};
    }
    if (kind == "substitutive") {
        const Json& js = need(j, "substitution");
        if (!js.is_object() || js.empty()) fail("substitution", "expected a symbol -> word object");
        std::map<int, std::vector<int>> sub;
        for (auto it = js.begin(); it != js.end(); ++it) {
            int sym = rule_ref(Json(it.key()), rules, "substitution");
            Json holder;
            holder["w"] = it.value();
            sub[sym] = rule_word(holder, rules, "w");
        }
        int seed = rule_ref(need(j, "seed"), rules, "seed");
        Coord depth = need_int(j, "depth");
        if (depth < 1) fail("depth", "must be >= 1");
        return DistPresentation{SubstitutiveWord::make(std::move(sub), seed,
                                                       static_cast<std::uint32_t>(depth),
                                                       opt_int(j, "anchor", 0), cell_budget)};
    }
    if (kind == "explicit") {
        ExplicitWindowWord ex;
        ex.window = rule_word(j, rules, "window");
        ex.start = need_int(j, "start");
        ex.fallback = rule_ref(need(j, "default"), rules, "default");
        return DistPresentation{ex};
    }
    if (kind == "cyclic") {
        CyclicWord cw;
        cw.word = rule_word(j, rules, "word");
        cw.length = opt_int(j, "length", static_cast<Coord>(cw.word.size()));
        if (cw.length != static_cast<Coord>(cw.word.size())) fail("length", "must equal the word length");
        return DistPresentation{cw};
    }
    fail("kind", "unknown distribution kind \"" + kind + "\"");
}

Configuration parse_configuration(const Json& j) {
    std::string kind = need(j, "kind").get<std::string>();
    if (kind == "finite_support") {
        Coord bg = need_int(j, "background");
        if (bg < 0) fail("background", "negative state");
        std::map<Cell, State> cells;
        if (j.contains("cells")) {
            const Json& jc = j["cells"];
            if (!jc.is_object()) fail("cells", "expected an object of position -> state");
            for (auto it = jc.begin(); it != jc.end(); ++it) {
                Coord x;
                try {
                    x = std::stoll(it.key());
                } catch (...) {
                    fail("cells", "keys must be integer positions");
                }
                Coord s = it.value().get<Coord>();
                if (s < 0) fail("cells", "negative state");
                cells[{x, 0}] = static_cast<State>(s);
            }
        }
        return Configuration::finite_support(static_cast<State>(bg), std::move(cells));
    }
    if (kind == "periodic")
        return Configuration::periodic(state_word(j, "word"), opt_int(j, "anchor", 0));
    if (kind == "cyclic") {
        std::vector<State> word = state_word(j, "word");
        if (j.contains("length") && need_int(j, "length") != static_cast<Coord>(word.size()))
            fail("length", "must equal the word length");
        return Configuration::cyclic(std::move(word));
    }
    if (kind == "explicit") {
        Coord def = need_int(j, "default");
        if (def < 0) fail("default", "negative state");
        return Configuration::window(state_word(j, "window"), need_int(j, "start"),
                                     static_cast<State>(def));
    }
    fail("kind", "unknown configuration kind \"" + kind + "\"");
}

namespace {

// Template presentations reuse the distribution shapes with symbol names; a
// tiny stand-in rule set maps names to indices.
RuleSet symbol_ruleset(const std::vector<std::string>& symbols) {
    Alphabet a({2});
    Neighborhood nb = Neighborhood::line(0, 0);
    std::vector<LocalRule> rules;
    std::vector<std::string> names;
    for (const std::string& s : symbols) {
        rules.push_back(LocalRule::from_table(a, 1, {0, 1}));
        names.push_back(s);
    }
    return RuleSet(a, nb, std::move(rules), std::move(names));
}

}  // namespace

Template parse_template(const Json& j, std::uint64_t cell_budget) {
    const Json& js = need(j, "template_symbols");
    if (!js.is_array() || js.empty()) fail("template_symbols", "expected a non-empty array");
    Template tpl;
    for (const Json& s : js) tpl.symbols.push_back(s.get<std::string>());
    RuleSet stand_in = symbol_ruleset(tpl.symbols);
    tpl.tau = parse_distribution_body(j, stand_in, cell_budget);
    return tpl;
}

RuleSet load_ruleset(const std::filesystem::path& path) { return parse_ruleset(read_json_file(path)); }

DistFile load_distribution(const std::filesystem::path& path, std::uint64_t cell_budget) {
    Json j = read_json_file(path);
    std::string ref = need(j, "ruleset").get<std::string>();
    std::filesystem::path rp = path.parent_path() / ref;
    DistFile out;
    out.ruleset_path = rp;
    out.rules = load_ruleset(rp);
    out.dist = parse_distribution_body(j, out.rules, cell_budget);
    return out;
}

Configuration load_configuration(const std::filesystem::path& path) {
    return parse_configuration(read_json_file(path));
}

Template load_template(const std::filesystem::path& path, std::uint64_t cell_budget) {
    return parse_template(read_json_file(path), cell_budget);
}

ParsedFile parse_spec_file(const std::filesystem::path& path, std::uint64_t cell_budget) {
    Json j = read_json_file(path);
    if (j.contains("rules")) return parse_ruleset(j);
    if (j.contains("template_symbols")) return parse_template(j, cell_budget);
    if (j.contains("ruleset")) return load_distribution(path, cell_budget);
    return parse_configuration(j);
}

// ---------------------------------------------------------------------------

Json emit_ruleset(const RuleSet& rules) {
    Json j;
    j["alphabet"] = {{"tracks", rules.alphabet.track_shape}};
    Json offs = Json::array();
    for (Cell o : rules.neighborhood.offsets) {
        if (rules.neighborhood.dim == 2)
            offs.push_back({o.x, o.y});
        else
            offs.push_back(o.x);
    }
    j["neighborhood"] = offs;
    Json jr = Json::array();
    for (std::size_t i = 0; i < rules.size(); ++i) {
        Json r;
        r["name"] = rules.names[i];
        if (rules.rules[i].linear) {
            Json tracks = Json::array();
            for (const TrackForm& tf : rules.rules[i].linear->tracks) {
                Json terms = Json::array();
                for (const LinearTerm& t : tf.terms) terms.push_back({t.neighbor, t.track});
                tracks.push_back({{"terms", terms}, {"const", tf.constant}});
            }
            r["linear"] = tracks;
        } else {
            r["table"] = rules.rules[i].table;
        }
        jr.push_back(r);
    }
    j["rules"] = jr;
    return j;
}

namespace {

Json names_for(const std::vector<int>& word, const RuleSet& rules) {
    Json out = Json::array();
    for (int w : word) out.push_back(rules.names.at(static_cast<std::size_t>(w)));
    return out;
}

}  // namespace

Json emit_distribution(const DistPresentation& dist, const RuleSet& rules,
                       const std::string& ruleset_ref) {
    Json j;
    j["ruleset"] = ruleset_ref;
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, PeriodicWord>) {
                j["kind"] = "periodic";
                j["word"] = names_for(p.word, rules);
                j["anchor"] = p.anchor;
            } else if constexpr (std::is_same_v<T, EventuallyPeriodicWord>) {
                j["kind"] = "eventually_periodic";
                j["left"] = names_for(p.left, rules);
                j["middle"] = names_for(p.middle, rules);
                j["right"] = names_for(p.right, rules);
                j["middle_start"] = p.middle_start;
            } else if constexpr (std::is_same_v<T, SubstitutiveWord>) {
                j["kind"] = "substitutive";
                Json sub;
                for (const auto& [sym, img] : p.substitution)
                    sub[rules.names.at(static_cast<std::size_t>(sym))] = names_for(img, rules);
                j["substitution"] = sub;
                j["seed"] = rules.names.at(static_cast<std::size_t>(p.seed));
                j["depth"] = p.depth;
                j["anchor"] = p.anchor;
            } else if constexpr (std::is_same_v<T, ExplicitWindowWord>) {
                j["kind"] = "explicit";
                j["window"] = names_for(p.window, rules);
                j["start"] = p.start;
                j["default"] = rules.names.at(static_cast<std::size_t>(p.fallback));
            } else {
                j["kind"] = "cyclic";
                j["length"] = p.length;
                j["word"] = names_for(p.word, rules);
            }
        },
        dist.v);
    return j;
}

Json emit_configuration(const Configuration& c) {
    Json j;
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, FiniteSupportConf>) {
                j["kind"] = "finite_support";
                j["background"] = p.background;
                Json cells = Json::object();
                for (const auto& [cell, s] : p.cells) cells[std::to_string(cell.x)] = s;
                j["cells"] = cells;
            } else if constexpr (std::is_same_v<T, PeriodicConf>) {
                j["kind"] = "periodic";
                j["word"] = p.word;
                j["anchor"] = p.anchor;
            } else if constexpr (std::is_same_v<T, CyclicConf>) {
                j["kind"] = "cyclic";
                j["length"] = p.length;
                j["word"] = p.word;
            } else {
                j["kind"] = "explicit";
                j["window"] = p.window;
                j["start"] = p.start;
                j["default"] = p.fallback;
            }
        },
        c.v);
    return j;
}

std::string spacetime_pgm(const std::vector<Pattern>& rows, std::uint32_t alphabet_size) {
    if (rows.empty()) throw std::invalid_argument("pgm: empty trace");
    const Coord width = rows.front().domain.cell_count();
    std::ostringstream out;
    out << "P2\n" << width << " " << rows.size() << "\n255\n";
    for (const Pattern& row : rows) {
        if (row.domain.cell_count() != width) throw std::invalid_argument("pgm: ragged trace");
        for (Coord i = 0; i < width; ++i) {
            if (i) out << " ";
            std::uint32_t v = row.states[static_cast<std::size_t>(i)];
            std::uint32_t px = alphabet_size > 1 ? (255u * v) / (alphabet_size - 1) : 0u;
            out << px;
        }
        out << "\n";
    }
    return out.str();
}

void emit_spacetime(const std::vector<Pattern>& rows, std::uint32_t alphabet_size,
                    const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("pgm: cannot open " + path.string());
    out << spacetime_pgm(rows, alphabet_size);
    if (!out) throw std::runtime_error("pgm: write failure on " + path.string());
}

}  // namespace io
}  // namespace nuca
