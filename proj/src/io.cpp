#include "omts/io.hpp"

#include <fstream>
#include <sstream>

namespace omts
{

Json rational_to_json(const Rational& r)
{
    return to_string(r);
}

Rational rational_from_json(const Json& j)
{
    if (j.is_number_integer())
        return Rational(std::to_string(j.get<long long>()));
    if (j.is_string())
        return parse_rational(j.get<std::string>());
    throw Error("expected a rational, got " + j.dump());
}

Json extended_to_json(const Extended& e)
{
    return to_string(e);
}

Extended extended_from_json(const Json& j)
{
    if (j.is_number_integer())
        return Extended{ rational_from_json(j) };
    if (j.is_string())
        return parse_extended(j.get<std::string>());
    throw Error("expected a rational or \"inf\", got " + j.dump());
}

namespace
{

const Json& field(const Json& j, const char* key)
{
    if (!j.is_object())
        throw Error("expected an object with key '" + std::string(key) + "', got " + j.dump());
    auto it = j.find(key);
    if (it == j.end())
        throw Error("missing key '" + std::string(key) + "' in " + j.dump());
    return *it;
}

std::string string_field(const Json& j, const char* key)
{
    const Json& v = field(j, key);
    if (!v.is_string())
        throw Error("key '" + std::string(key) + "' must be a string");
    return v.get<std::string>();
}

const Json& array_field(const Json& j, const char* key)
{
    const Json& v = field(j, key);
    if (!v.is_array())
        throw Error("key '" + std::string(key) + "' must be an array");
    return v;
}

Json pair_to_json(const StatePair& p)
{
    return Json::array({ p.first, p.second });
}

StatePair pair_from_json(const Json& j)
{
    if (!j.is_array() || j.size() != 2 || !j[0].is_string() || !j[1].is_string())
        throw Error("expected a pair of state ids, got " + j.dump());
    return { j[0].get<std::string>(), j[1].get<std::string>() };
}

Json strings_to_json(const std::vector<std::string>& v)
{
    return Json(v);
}

Json transition_to_json(const Transition& t)
{
    return { { "src", t.src }, { "label", label_to_json(t.label) }, { "dst", t.dst }, { "port", label_to_json(t.port) } };
}

Json hypothesis_to_json(const HypothesisCheck& h)
{
    return { { "passed", h.passed }, { "witnesses", strings_to_json(h.witnesses) } };
}

} // namespace

Json label_to_json(const Label& l)
{
    if (l.is_empty())
        return "nu";
    Json j{ { "u", l.input() }, { "chi", rational_to_json(l.chrono()) } };
    if (!l.jumps().empty()) {
        Json jumps = Json::array();
        for (const auto& t : l.jumps())
            jumps.push_back(rational_to_json(t));
        j["jumps"] = std::move(jumps);
    }
    return j;
}

Label label_from_json(const Json& j)
{
    if (j.is_string()) {
        if (j.get<std::string>() == "nu")
            return Label::empty();
        throw Error("a label string must be \"nu\", got " + j.dump());
    }
    std::vector<Rational> jumps;
    if (j.is_object() && j.contains("jumps"))
        for (const auto& t : array_field(j, "jumps"))
            jumps.push_back(rational_from_json(t));
    return Label::timed(string_field(j, "u"), rational_from_json(field(j, "chi")), std::move(jumps));
}

Json omts_to_json(const Omts& m)
{
    Omts c = canonicalize(m);
    Json alphabet = Json::array();
    for (const auto& l : c.alphabet)
        alphabet.push_back(label_to_json(l));
    Json outputs = Json::object();
    for (const auto& [s, out] : c.outputs) {
        Json coords = Json::array();
        for (const auto& x : out.coords)
            coords.push_back(rational_to_json(x));
        outputs[s] = std::move(coords);
    }
    Json transitions = Json::array();
    for (const auto& t : c.transitions)
        transitions.push_back(transition_to_json(t));
    return { { "states", strings_to_json(c.states) },
             { "initial", strings_to_json(c.initial) },
             { "alphabet", std::move(alphabet) },
             { "outputs", std::move(outputs) },
             { "transitions", std::move(transitions) } };
}

Omts omts_from_json(const Json& j)
{
    Omts m;
    for (const auto& s : array_field(j, "states")) {
        if (!s.is_string())
            throw Error("state ids must be strings, got " + s.dump());
        m.states.push_back(s.get<std::string>());
    }
    for (const auto& s : array_field(j, "initial")) {
        if (!s.is_string())
            throw Error("initial state ids must be strings, got " + s.dump());
        m.initial.push_back(s.get<std::string>());
    }
    for (const auto& l : array_field(j, "alphabet"))
        m.alphabet.push_back(label_from_json(l));
    const Json& outputs = field(j, "outputs");
    if (!outputs.is_object())
        throw Error("key 'outputs' must be an object");
    for (const auto& [s, coords] : outputs.items()) {
        if (!coords.is_array())
            throw Error("output of state '" + s + "' must be an array");
        OutputPoint p;
        for (const auto& x : coords)
            p.coords.push_back(rational_from_json(x));
        m.outputs.emplace(s, std::move(p));
    }
    for (const auto& t : array_field(j, "transitions"))
        m.transitions.push_back({ string_field(t, "src"), label_from_json(field(t, "label")), string_field(t, "dst"),
                                  label_from_json(field(t, "port")) });
    return m;
}

std::string serialize_omts(const Omts& m)
{
    return omts_to_json(m).dump(2) + "\n";
}

Omts parse_omts(const std::string& text)
{
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw Error(std::string("malformed JSON: ") + e.what());
    }
    return omts_from_json(j);
}

Json derivation_to_json(const DerivationRelation& d)
{
    Json pairs = Json::array();
    for (const auto& p : d.pairs)
        pairs.push_back(pair_to_json(p));
    return { { "pairs", std::move(pairs) } };
}

DerivationRelation derivation_from_json(const Json& j)
{
    DerivationRelation d;
    for (const auto& p : array_field(j, "pairs"))
        d.pairs.push_back(pair_from_json(p));
    return d;
}

Json sim_table_to_json(const SimFunctionTable& v, OutputMetric d_pi)
{
    Json values = Json::array();
    for (std::size_t a = 0; a < v.rows().size(); ++a)
        for (std::size_t b = 0; b < v.cols().size(); ++b)
            if (v.defined(a, b))
                values.push_back({ { "q1", v.rows()[a] }, { "q2", v.cols()[b] }, { "value", extended_to_json(v.at(a, b)) } });
    return { { "tau", rational_to_json(v.tau()) }, { "d_pi", to_string(d_pi) }, { "values", std::move(values) } };
}

SimFunctionTable sim_table_from_json(const Json& j)
{
    Rational tau = rational_from_json(field(j, "tau"));
    std::set<StateId> rows, cols;
    std::vector<std::pair<StatePair, Extended>> entries;
    std::set<StatePair> seen;
    for (const auto& e : array_field(j, "values")) {
        StatePair p{ string_field(e, "q1"), string_field(e, "q2") };
        if (!seen.insert(p).second)
            throw Error("duplicate table entry for (" + p.first + ", " + p.second + ")");
        rows.insert(p.first);
        cols.insert(p.second);
        entries.emplace_back(p, extended_from_json(field(e, "value")));
    }
    return SimFunctionTable::from_entries(tau, { rows.begin(), rows.end() }, { cols.begin(), cols.end() }, entries);
}

Json relation_to_json(const StasRelation& r)
{
    Json pairs = Json::array();
    for (const auto& p : r.pairs)
        pairs.push_back(pair_to_json(p));
    return { { "tau", rational_to_json(r.tau) }, { "eps", extended_to_json(r.eps) }, { "pairs", std::move(pairs) } };
}

Json execution_to_json(const IndexedOmts& t, const Execution& e)
{
    Json steps = Json::array();
    for (const auto& s : e.steps)
        steps.push_back({ { "label", label_to_json(s.label) }, { "state", t.name(s.state) } });
    return { { "start", t.name(e.start) }, { "steps", std::move(steps) } };
}

Json verdict_to_json(const IndexedOmts& t1, const IndexedOmts& t2, const ConformanceVerdict& v)
{
    Json j{ { "holds", v.holds },
            { "tau", rational_to_json(v.tau) },
            { "eps", extended_to_json(v.eps) },
            { "depth", v.depth },
            { "nu_budget", v.nu_budget } };
    if (v.counterexample) {
        const auto& c = *v.counterexample;
        Json cx{ { "t1_start", c.t1_start },
                 { "t2_start", c.t2_start },
                 { "t1_run", execution_to_json(t1, c.t1_run) },
                 { "closest_cost", extended_to_json(c.closest_cost) },
                 { "condition", c.failure.condition == MatchCondition::a ? "a" : "b" },
                 { "index", c.failure.index } };
        cx["t2_closest"] = c.t2_closest ? execution_to_json(t2, *c.t2_closest) : Json(nullptr);
        j["counterexample"] = std::move(cx);
    }
    return j;
}

Json certificate_to_json(const ConformanceCertificate& c)
{
    Json derivation = Json::array(), outside = Json::array();
    for (const auto& p : c.derivation)
        derivation.push_back(pair_to_json(p));
    for (const auto& p : c.outside)
        outside.push_back(pair_to_json(p));
    return { { "certified", c.certified },
             { "tau", rational_to_json(c.tau) },
             { "eps", extended_to_json(c.eps) },
             { "derivation", std::move(derivation) },
             { "outside", std::move(outside) },
             { "warnings", strings_to_json(c.warnings) } };
}

Json composed_sidecar_to_json(const ComposedOmts& c)
{
    Json lifted = Json::array();
    for (const auto& [a, b] : c.lifted)
        lifted.push_back(Json::array({ label_to_json(a), label_to_json(b) }));
    Json chrono = Json::array();
    for (const auto& l : c.chrono_alphabet)
        chrono.push_back(label_to_json(l));
    Json provenance = Json::array();
    for (const auto& [t, witnesses] : c.provenance) {
        Json w = Json::array();
        for (const auto& [x, y] : witnesses)
            w.push_back(Json::array({ transition_to_json(x), transition_to_json(y) }));
        provenance.push_back({ { "transition", transition_to_json(t) }, { "witnesses", std::move(w) } });
    }
    Json components = Json::object();
    for (std::size_t i = 0; i < c.components.size(); ++i)
        components[c.system.states[i]] = pair_to_json(c.components[i]);
    return { { "split", c.split },
             { "components", std::move(components) },
             { "chrono_alphabet", std::move(chrono) },
             { "lifted", std::move(lifted) },
             { "provenance", std::move(provenance) } };
}

Json small_gain_to_json(const SmallGainCertificate& c)
{
    Json violations = Json::array();
    for (const auto& v : c.conclusion.violations)
        violations.push_back({ { "pair", pair_to_json(v.pair) },
                               { "condition", v.condition },
                               { "value", extended_to_json(v.value) },
                               { "required", extended_to_json(v.required) } });
    Json distributivity{ { "holds", c.distributivity.holds },
                         { "analytic", c.distributivity.analytic },
                         { "note", c.distributivity.note } };
    return { { "tau", rational_to_json(c.tau) },
             { "gains",
               { { "h", to_string(c.spec.h) },
                 { "h_tilde", to_string(c.spec.h_tilde) },
                 { "c", rational_to_json(c.spec.c) },
                 { "k1", rational_to_json(c.spec.k1) },
                 { "k2", rational_to_json(c.spec.k2) } } },
             { "continuity", "satisfied: finite state spaces are discrete" },
             { "output_bound", hypothesis_to_json(c.output_bound) },
             { "distributivity", std::move(distributivity) },
             { "sgc", c.sgc },
             { "g_condition", hypothesis_to_json(c.g_condition) },
             { "gamma", hypothesis_to_json(c.gamma) },
             { "hypotheses_hold", c.hypotheses_hold() },
             { "conclusion", { { "ok", c.conclusion.ok }, { "violations", std::move(violations) } } },
             { "precision", extended_to_json(c.precision12) },
             { "precision_bound", extended_to_json(c.precision_bound) } };
}

std::string read_text_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot read file '" + path + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Json read_json_file(const std::string& path)
{
    try {
        return Json::parse(read_text_file(path));
    } catch (const Json::parse_error& e) {
        throw Error("malformed JSON in '" + path + "': " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write file '" + path + "'");
    out << text;
    if (!out)
        throw Error("failed writing file '" + path + "'");
}

} // namespace omts
