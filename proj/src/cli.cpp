#include "omts/cli.hpp"

#include "omts/composition.hpp"
#include "omts/conformance.hpp"
#include "omts/generator.hpp"
#include "omts/hybrid_time.hpp"
#include "omts/io.hpp"
#include "omts/metrics.hpp"
#include "omts/stas.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>

namespace omts
{

namespace
{

// Everything a run was invoked with; embedded in every report.
struct RunConfig
{
    std::string subcommand;
    std::map<std::string, std::string> inputs;
    std::string d_pi = "sup";
    std::string d_sigma = "timed";
    std::string d_sigma_star = "maxpos";
    std::string tau, eps, tau13, tau24, flow_bound;
    std::optional<unsigned> depth, nu_budget;
    std::string strategy = "automatic";
    std::string h = "max", h_tilde, c = "1", k1 = "1", k2 = "1";
    std::uint64_t seed = 0;
    unsigned states = 3, labels = 2, branching = 2, dimension = 1;
    std::string state;
    std::vector<std::string> post_labels;
    std::string output, sidecar;

    [[nodiscard]] MetricSuite suite() const
    {
        return { parse_output_metric(d_pi), parse_label_metric(d_sigma), parse_string_metric(d_sigma_star), {} };
    }

    [[nodiscard]] Json to_json() const
    {
        auto opt_string = [](const std::string& s) { return s.empty() ? Json(nullptr) : Json(s); };
        auto opt_unsigned = [](const std::optional<unsigned>& v) { return v ? Json(*v) : Json(nullptr); };
        Json j{ { "subcommand", subcommand },
                { "inputs", inputs },
                { "metrics", { { "d_pi", d_pi }, { "d_sigma", d_sigma }, { "d_sigma_star", d_sigma_star } } },
                { "tau", opt_string(tau) },
                { "eps", opt_string(eps) },
                { "depth", opt_unsigned(depth) },
                { "nu_budget", opt_unsigned(nu_budget) },
                { "strategy", strategy },
                { "seed", seed },
                { "output", opt_string(output) } };
        if (subcommand == "verify-sgc")
            j["gains"] = { { "h", h },     { "h_tilde", h_tilde.empty() ? h : h_tilde },
                           { "c", c },     { "k1", k1 },
                           { "k2", k2 },   { "tau13", tau13 },
                           { "tau24", tau24 } };
        if (subcommand == "gen")
            j["generator"] = { { "states", states }, { "labels", labels }, { "branching", branching },
                               { "dimension", dimension } };
        if (subcommand == "post")
            j["post"] = { { "state", state }, { "labels", post_labels } };
        if (subcommand == "inflate")
            j["flow_bound"] = flow_bound;
        return j;
    }
};

Rational require_rational(const std::string& text, const char* name)
{
    if (text.empty())
        throw Error(std::string("missing value for --") + name);
    return parse_rational(text);
}

Omts load_model(const std::string& path)
{
    return omts_from_json(read_json_file(path));
}

// Distances in the output metric's internal scale, reported as themselves for sup and with
// rational square root bounds for euclid.
Json distance_json(const MetricSuite& suite, const Extended& value)
{
    if (suite.d_pi == OutputMetric::sup)
        return extended_to_json(value);
    Json j{ { "squared", extended_to_json(value) } };
    if (value.is_finite() && value.value() >= 0) {
        SqrtBounds b = sqrt_bounds(value.value());
        j["sqrt_lo"] = rational_to_json(b.lo);
        j["sqrt_hi"] = rational_to_json(b.hi);
    }
    return j;
}

Label parse_label_text(const std::string& text)
{
    if (text == "nu")
        return Label::empty();
    auto colon = text.find(':');
    if (colon == std::string::npos)
        throw Error("label '" + text + "' must be nu or symbol:duration");
    return Label::timed(text.substr(0, colon), parse_rational(text.substr(colon + 1)));
}

SampledArc load_arc(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot read file '" + path + "'");
    return read_arc_csv(in);
}

struct Outcome
{
    Json report;
    int code = 0;
};

void emit_model(Json& report, const Omts& m, const std::string& path)
{
    if (path.empty())
        report["model"] = omts_to_json(m);
    else
        write_text_file(path, serialize_omts(m));
}

Outcome run_validate(const RunConfig& cfg)
{
    Omts m = load_model(cfg.inputs.at("model"));
    ValidationReport r = validate(m);
    return { { { "violations", r.violations } }, r.ok() ? 0 : 2 };
}

Outcome run_post(const RunConfig& cfg)
{
    Omts m = load_model(cfg.inputs.at("model"));
    std::set<Label> labels;
    for (const auto& l : cfg.post_labels)
        labels.insert(parse_label_text(l));
    auto result = post(m, cfg.state, labels);
    return { { { "post", std::vector<std::string>(result.begin(), result.end()) } }, 0 };
}

ConformanceOptions conformance_options(const RunConfig& cfg)
{
    ConformanceOptions o;
    o.tau = require_rational(cfg.tau, "tau");
    if (!cfg.depth)
        throw Error("missing value for --depth");
    o.depth = *cfg.depth;
    o.nu_budget = cfg.nu_budget;
    if (cfg.strategy == "aligned")
        o.strategy = SearchStrategy::aligned;
    else if (cfg.strategy == "exhaustive")
        o.strategy = SearchStrategy::exhaustive;
    else if (cfg.strategy != "automatic")
        throw Error("unknown strategy '" + cfg.strategy + "'");
    return o;
}

Outcome run_check_conformance(const RunConfig& cfg)
{
    MetricSuite suite = cfg.suite();
    IndexedOmts t1(load_model(cfg.inputs.at("t1"))), t2(load_model(cfg.inputs.at("t2")));
    DerivationRelation d = derivation_from_json(read_json_file(cfg.inputs.at("d")));
    Extended eps = output_threshold(suite, parse_extended(cfg.eps));
    ConformanceVerdict v = check_conformance(t1, t2, d, suite, eps, conformance_options(cfg));
    Json j = verdict_to_json(t1, t2, v);
    j["eps"] = distance_json(suite, v.eps);
    if (v.counterexample)
        j["counterexample"]["closest_cost"] = distance_json(suite, v.counterexample->closest_cost);
    return { j, v.holds ? 0 : 2 };
}

Outcome run_conformance_degree(const RunConfig& cfg)
{
    MetricSuite suite = cfg.suite();
    IndexedOmts t1(load_model(cfg.inputs.at("t1"))), t2(load_model(cfg.inputs.at("t2")));
    DerivationRelation d = derivation_from_json(read_json_file(cfg.inputs.at("d")));
    ConformanceOptions o = conformance_options(cfg);
    Extended degree = conformance_degree(t1, t2, d, suite, o);
    return { { { "degree", distance_json(suite, degree) } }, 0 };
}

Outcome run_stas_relation(const RunConfig& cfg)
{
    MetricSuite suite = cfg.suite();
    IndexedOmts t1(load_model(cfg.inputs.at("t1"))), t2(load_model(cfg.inputs.at("t2")));
    Rational tau = require_rational(cfg.tau, "tau");
    if (cfg.eps.empty())
        throw Error("missing value for --eps");
    Extended eps = output_threshold(suite, parse_extended(cfg.eps));
    StasRelation r = greatest_stas_relation(t1, t2, suite, tau, eps);
    bool simulates = check_simulates(r, t1.model().initial, t2.model().initial);
    Json rel = relation_to_json(r);
    rel["eps"] = distance_json(suite, r.eps);
    return { { { "relation", rel }, { "simulates", simulates } }, simulates ? 0 : 2 };
}

Outcome run_stas_function(const RunConfig& cfg)
{
    MetricSuite suite = cfg.suite();
    IndexedOmts t1(load_model(cfg.inputs.at("t1"))), t2(load_model(cfg.inputs.at("t2")));
    SimFunctionTable v = smallest_sim_function(t1, t2, suite, require_rational(cfg.tau, "tau"));
    Json table = sim_table_to_json(v, suite.d_pi);
    Json j{ { "precision", distance_json(suite, precision_from_V(v, t1.model().initial, t2.model().initial)) } };
    if (cfg.output.empty())
        j["table"] = table;
    else
        write_text_file(cfg.output, table.dump(2) + "\n");
    return { j, 0 };
}

Outcome run_level_set(const RunConfig& cfg)
{
    Json tj = read_json_file(cfg.inputs.at("v"));
    SimFunctionTable v = sim_table_from_json(tj);
    MetricSuite suite = cfg.suite();
    if (tj.contains("d_pi"))
        suite.d_pi = parse_output_metric(tj["d_pi"].get<std::string>());
    if (cfg.eps.empty())
        throw Error("missing value for --eps");
    StasRelation r = level_set(v, output_threshold(suite, parse_extended(cfg.eps)));
    Json rel = relation_to_json(r);
    rel["eps"] = distance_json(suite, r.eps);
    return { { { "relation", rel } }, 0 };
}

Outcome run_compose(const RunConfig& cfg)
{
    ComposedOmts c = compose(load_model(cfg.inputs.at("t1")), load_model(cfg.inputs.at("t2")));
    Json sidecar = composed_sidecar_to_json(c);
    Json j{ { "states", c.system.states.size() },
            { "transitions", c.system.transitions.size() },
            { "lifted_pairs", c.lifted.size() } };
    emit_model(j, c.system, cfg.output);
    if (cfg.output.empty())
        j["sidecar"] = sidecar;
    else {
        std::string path = cfg.sidecar;
        if (path.empty()) {
            std::filesystem::path out(cfg.output);
            path = (out.parent_path() / (out.stem().string() + ".lifted.json")).string();
        }
        write_text_file(path, sidecar.dump(2) + "\n");
    }
    return { j, 0 };
}

Outcome run_verify_sgc(const RunConfig& cfg)
{
    MetricSuite suite = cfg.suite();
    Omts t1 = load_model(cfg.inputs.at("t1")), t2 = load_model(cfg.inputs.at("t2"));
    Omts t3 = load_model(cfg.inputs.at("t3")), t4 = load_model(cfg.inputs.at("t4"));
    auto load_table = [&](const std::string& key) {
        Json j = read_json_file(cfg.inputs.at(key));
        if (j.contains("d_pi") && parse_output_metric(j["d_pi"].get<std::string>()) != suite.d_pi)
            throw Error(key + " was computed for a different output metric");
        return sim_table_from_json(j);
    };
    SimFunctionTable v13 = load_table("v13"), v24 = load_table("v24");
    GainSpec spec;
    spec.h = parse_combiner(cfg.h);
    spec.h_tilde = cfg.h_tilde.empty() ? spec.h : parse_combiner(cfg.h_tilde);
    spec.c = require_rational(cfg.c, "c");
    spec.k1 = cfg.k1 == "auto" ? compute_k(v13) : require_rational(cfg.k1, "k1");
    spec.k2 = cfg.k2 == "auto" ? compute_k(v24) : require_rational(cfg.k2, "k2");
    SmallGainCertificate cert = verify_small_gain(t1, t2, t3, t4, v13, v24, suite, spec,
                                                  require_rational(cfg.tau13, "tau13"),
                                                  require_rational(cfg.tau24, "tau24"));
    Json j = small_gain_to_json(cert);
    j["precision"] = distance_json(suite, cert.precision12);
    j["precision_bound"] = distance_json(suite, cert.precision_bound);
    return { j, cert.hypotheses_hold() && cert.conclusion.ok ? 0 : 2 };
}

Outcome run_hybrid_distance(const RunConfig& cfg)
{
    SampledArc a = load_arc(cfg.inputs.at("a")), b = load_arc(cfg.inputs.at("b"));
    auto times = [](const HybridTimeDomain& d) {
        Json t = Json::array();
        for (const auto& x : d.times())
            t.push_back(rational_to_json(x));
        return t;
    };
    return { { { "d_sigma", extended_to_json(d_sigma_hybrid(a.domain(), b.domain())) },
               { "common_extension", common_extension(a.domain(), b.domain()) },
               { "domain_a", times(a.domain()) },
               { "domain_b", times(b.domain()) } },
             0 };
}

Outcome run_embed(const RunConfig& cfg)
{
    const std::string& path = cfg.inputs.at("manifest");
    Json m = read_json_file(path);
    std::filesystem::path base = std::filesystem::path(path).parent_path();
    auto resolve = [&](const Json& p) {
        if (!p.is_string())
            throw Error("manifest arc paths must be strings");
        std::filesystem::path f(p.get<std::string>());
        return (f.is_absolute() ? f : base / f).string();
    };
    if (!m.contains("grid_step") || !m.contains("pairs") || !m["pairs"].is_array())
        throw Error("manifest needs 'grid_step' and a 'pairs' array");
    Rational step = rational_from_json(m["grid_step"]);
    std::vector<TrajectoryPair> pairs;
    for (const auto& p : m["pairs"]) {
        if (!p.is_object() || !p.contains("state") || !p.contains("input"))
            throw Error("manifest pairs need 'state' and 'input' paths");
        pairs.push_back({ load_arc(resolve(p["state"])), load_arc(resolve(p["input"])) });
    }
    std::optional<std::vector<std::size_t>> projection;
    if (m.contains("output"))
        projection = m["output"].get<std::vector<std::size_t>>();
    OutputMap z = [projection](const std::vector<Rational>& x) {
        if (!projection)
            return OutputPoint{ x };
        OutputPoint p;
        for (auto i : *projection) {
            if (i >= x.size())
                throw Error("output index " + std::to_string(i) + " exceeds the state dimension");
            p.coords.push_back(x[i]);
        }
        return p;
    };
    Omts model = embed_trajectories(pairs, z, step);
    Json j{ { "states", model.states.size() }, { "transitions", model.transitions.size() } };
    emit_model(j, model, cfg.output);
    return { j, 0 };
}

Outcome run_inflate(const RunConfig& cfg)
{
    InflatedPrecision p = inflated_precision(require_rational(cfg.tau, "tau"), require_rational(cfg.eps, "eps"),
                                             require_rational(cfg.flow_bound, "flow-bound"));
    return { { { "tau", rational_to_json(p.tau) }, { "eps", rational_to_json(p.eps) } }, 0 };
}

Outcome run_gen(const RunConfig& cfg)
{
    GeneratorOptions o;
    o.dimension = cfg.dimension;
    Omts m = generate_random_omts(cfg.seed, cfg.states, cfg.labels, cfg.branching, o);
    Json j{ { "states", m.states.size() }, { "transitions", m.transitions.size() } };
    emit_model(j, m, cfg.output);
    return { j, 0 };
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    RunConfig cfg;
    CLI::App app{ "Verification of finite open metric transition systems", "omts" };
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--d-pi", cfg.d_pi, "output metric")->check(CLI::IsMember({ "sup", "euclid" }));
    app.add_option("--d-sigma", cfg.d_sigma, "label metric")->check(CLI::IsMember({ "timed", "hybrid" }));
    app.add_option("--d-sigma-star", cfg.d_sigma_star, "label string metric")
        ->check(CLI::IsMember({ "maxpos", "hybridcat" }));

    std::map<std::string, std::string> paths;
    auto input = [&](CLI::App* sub, const std::string& flag, const std::string& key, bool required = true) {
        auto* o = sub->add_option(flag, paths[key], key + " file");
        if (required)
            o->required();
    };
    auto add_tau_eps_depth = [&](CLI::App* sub, bool eps) {
        sub->add_option("--tau", cfg.tau, "label tolerance")->required();
        if (eps)
            sub->add_option("--eps", cfg.eps, "output precision")->required();
    };

    auto* validate_cmd = app.add_subcommand("validate", "check a model file against the model invariants");
    validate_cmd->add_option("model", paths["model"], "model file")->required();

    auto* post_cmd = app.add_subcommand("post", "successors of a state under a label set");
    input(post_cmd, "--model", "model");
    post_cmd->add_option("--state", cfg.state, "state id")->required();
    post_cmd->add_option("--label", cfg.post_labels, "label as nu or symbol:duration");

    auto* check_cmd = app.add_subcommand("check-conformance", "depth-bounded conformance check");
    auto* degree_cmd = app.add_subcommand("conformance-degree", "least conformance precision");
    for (auto* sub : { check_cmd, degree_cmd }) {
        input(sub, "--t1", "t1");
        input(sub, "--t2", "t2");
        input(sub, "--d", "d");
        add_tau_eps_depth(sub, sub == check_cmd);
        sub->add_option("--depth", cfg.depth, "non-nu depth bound")->required();
        sub->add_option("--nu-budget", cfg.nu_budget, "nu steps allowed in first-system runs");
        sub->add_option("--strategy", cfg.strategy, "search strategy")
            ->check(CLI::IsMember({ "automatic", "aligned", "exhaustive" }));
    }

    auto* rel_cmd = app.add_subcommand("stas-relation", "greatest approximate simulation relation");
    input(rel_cmd, "--t1", "t1");
    input(rel_cmd, "--t2", "t2");
    add_tau_eps_depth(rel_cmd, true);

    auto* fn_cmd = app.add_subcommand("stas-function", "smallest simulation function");
    input(fn_cmd, "--t1", "t1");
    input(fn_cmd, "--t2", "t2");
    add_tau_eps_depth(fn_cmd, false);
    fn_cmd->add_option("-o,--output", cfg.output, "table output file");

    auto* level_cmd = app.add_subcommand("level-set", "sublevel set of a simulation function table");
    input(level_cmd, "--v", "v");
    level_cmd->add_option("--eps", cfg.eps, "level")->required();

    auto* compose_cmd = app.add_subcommand("compose", "feedback interconnection of two systems");
    input(compose_cmd, "--t1", "t1");
    input(compose_cmd, "--t2", "t2");
    compose_cmd->add_option("-o,--output", cfg.output, "composed model file");
    compose_cmd->add_option("--sidecar", cfg.sidecar, "lifted label set file");

    auto* sgc_cmd = app.add_subcommand("verify-sgc", "small-gain hypotheses and conclusion");
    sgc_cmd->set_help_flag("--help", "print this help message and exit");
    for (const char* k : { "t1", "t2", "t3", "t4", "v13", "v24" })
        input(sgc_cmd, std::string("--") + k, k);
    sgc_cmd->add_option("--h", cfg.h, "value combiner")->check(CLI::IsMember({ "max", "sum" }));
    sgc_cmd->add_option("--h-tilde", cfg.h_tilde, "output combiner, defaults to h")
        ->check(CLI::IsMember({ "max", "sum" }));
    sgc_cmd->add_option("--c", cfg.c, "slope of g");
    sgc_cmd->add_option("--k1", cfg.k1, "slope of gamma1, or auto");
    sgc_cmd->add_option("--k2", cfg.k2, "slope of gamma2, or auto");
    sgc_cmd->add_option("--tau13", cfg.tau13, "tolerance of V13")->required();
    sgc_cmd->add_option("--tau24", cfg.tau24, "tolerance of V24")->required();

    auto* hd_cmd = app.add_subcommand("hybrid-distance", "distance of two sampled hybrid arcs");
    input(hd_cmd, "--a", "a");
    input(hd_cmd, "--b", "b");

    auto* embed_cmd = app.add_subcommand("embed", "transition system of sampled trajectories");
    input(embed_cmd, "--manifest", "manifest");
    embed_cmd->add_option("-o,--output", cfg.output, "model output file");

    auto* inflate_cmd = app.add_subcommand("inflate", "precision inflation for embedded systems");
    inflate_cmd->add_option("--tau", cfg.tau, "label tolerance")->required();
    inflate_cmd->add_option("--eps", cfg.eps, "output precision")->required();
    inflate_cmd->add_option("--flow-bound", cfg.flow_bound, "flow map norm bound")->required();

    auto* gen_cmd = app.add_subcommand("gen", "random model");
    gen_cmd->add_option("--seed", cfg.seed, "generator seed");
    gen_cmd->add_option("--states", cfg.states, "number of states")->check(CLI::PositiveNumber);
    gen_cmd->add_option("--labels", cfg.labels, "alphabet size");
    gen_cmd->add_option("--branching", cfg.branching, "transitions per state");
    gen_cmd->add_option("--dimension", cfg.dimension, "output dimension");
    gen_cmd->add_option("-o,--output", cfg.output, "model output file");

    std::vector<std::string> argv_storage{ "omts" };
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_storage)
        argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "omts: " << e.what() << "\n";
        return 1;
    }

    CLI::App* sub = app.get_subcommands().front();
    cfg.subcommand = sub->get_name();
    for (const auto& [key, value] : paths)
        if (!value.empty())
            cfg.inputs[key] = value;

    static const std::map<std::string, Outcome (*)(const RunConfig&)> handlers{
        { "validate", run_validate },
        { "post", run_post },
        { "check-conformance", run_check_conformance },
        { "conformance-degree", run_conformance_degree },
        { "stas-relation", run_stas_relation },
        { "stas-function", run_stas_function },
        { "level-set", run_level_set },
        { "compose", run_compose },
        { "verify-sgc", run_verify_sgc },
        { "hybrid-distance", run_hybrid_distance },
        { "embed", run_embed },
        { "inflate", run_inflate },
        { "gen", run_gen },
    };

    try {
        Outcome o = handlers.at(cfg.subcommand)(cfg);
        o.report["config"] = cfg.to_json();
        out << o.report.dump(2) << "\n";
        return o.code;
    } catch (const Error& e) {
        err << "omts: " << e.what() << "\n";
    } catch (const Json::exception& e) {
        err << "omts: malformed input: " << e.what() << "\n";
    } catch (const std::exception& e) {
        err << "omts: " << e.what() << "\n";
    }
    return 1;
}

} // namespace omts
