#include "omts/composition.hpp"

#include <algorithm>
#include <random>

namespace omts
{

std::string product_state_name(const StateId& a, const StateId& b)
{
    return a + "|" + b;
}

ComposedOmts compose(const Omts& t1, const Omts& t2)
{
    IndexedOmts a(t1), b(t2);
    ComposedOmts c;
    c.split = a.output_dimension();

    std::set<StateId> names;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) {
            StateId name = product_state_name(a.name(i), b.name(j));
            if (!names.insert(name).second)
                throw Error("product state name '" + name + "' is ambiguous");
            c.system.states.push_back(name);
            c.components.emplace_back(a.name(i), b.name(j));
            OutputPoint out = a.output(i);
            out.coords.insert(out.coords.end(), b.output(j).coords.begin(), b.output(j).coords.end());
            c.system.outputs.emplace(name, std::move(out));
        }
    for (auto i : a.initial())
        for (auto j : b.initial())
            c.system.initial.push_back(product_state_name(a.name(i), b.name(j)));
    std::sort(c.system.initial.begin(), c.system.initial.end());

    std::set<Label> chrono;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) {
            StateId src = product_state_name(a.name(i), b.name(j));
            for (const auto& e1 : a.outgoing(i))
                for (const auto& e2 : b.outgoing(j)) {
                    const Label& l1 = a.label(e1);
                    const Label& l2 = b.label(e2);
                    TransitionPair witness{ a.model().transitions[e1.transition], b.model().transitions[e2.transition] };
                    if (l1.is_empty() && l2.is_empty()) {
                        c.provenance[{ src, Label::empty(), src, nu_port(c.system.outputs.at(src)) }].push_back(
                            std::move(witness));
                        continue;
                    }
                    if (l1.is_empty() || l2.is_empty())
                        continue;
                    if (!same_chrono(l1, l2) || l1 != e2.port || l2 != e1.port)
                        continue;
                    Label chi = chrono_part(l1);
                    chrono.insert(chi);
                    c.lifted.emplace(l1, l2);
                    Transition t{ src, chi, product_state_name(a.name(e1.dst), b.name(e2.dst)), Label::empty() };
                    c.provenance[t].push_back(std::move(witness));
                }
        }
    c.chrono_alphabet.assign(chrono.begin(), chrono.end());
    c.system.alphabet = c.chrono_alphabet;
    for (const auto& [t, w] : c.provenance)
        c.system.transitions.push_back(t);
    return c;
}

std::set<LabelPair> lift_labels(const Omts& t1, const Omts& t2)
{
    return compose(t1, t2).lifted;
}

MetricSuite product_suite(const MetricSuite& suite, std::size_t split, Combiner combine)
{
    MetricSuite s = suite;
    s.product = ProductLayout{ split, combine };
    return s;
}

SimFunctionTable compose_sim_function(const SimFunctionTable& v13, const SimFunctionTable& v24, Combiner h)
{
    if (!v13.is_total() || !v24.is_total())
        throw Error("composing simulation functions requires total tables");
    std::vector<StateId> rows, cols;
    for (const auto& r1 : v13.rows())
        for (const auto& r2 : v24.rows())
            rows.push_back(product_state_name(r1, r2));
    for (const auto& c3 : v13.cols())
        for (const auto& c4 : v24.cols())
            cols.push_back(product_state_name(c3, c4));
    SimFunctionTable v(std::min(v13.tau(), v24.tau()), rows, cols);
    std::size_t n2 = v24.rows().size(), n4 = v24.cols().size();
    for (std::size_t r1 = 0; r1 < v13.rows().size(); ++r1)
        for (std::size_t r2 = 0; r2 < n2; ++r2)
            for (std::size_t c3 = 0; c3 < v13.cols().size(); ++c3)
                for (std::size_t c4 = 0; c4 < n4; ++c4)
                    v.set(r1 * n2 + r2, c3 * n4 + c4, combine(h, v13.at(r1, c3), v24.at(r2, c4)));
    return v;
}

Rational compute_k(const SimFunctionTable& v)
{
    std::vector<Extended> values = table_values(v);
    if (values.empty())
        return Rational{ 1 };
    const Extended& inf = values.front();
    const Extended& sup = values.back();
    if (sup.is_infinity())
        return inf.is_finite() ? Rational{ 0 } : Rational{ 1 };
    if (sup.value() == 0)
        return Rational{ 1 };
    return Rational(inf.value() / sup.value());
}

void validate_gain_spec(const GainSpec& spec)
{
    if (spec.c < 1)
        throw Error("gain slope c must be at least 1, got " + to_string(spec.c));
    for (const auto* k : { &spec.k1, &spec.k2 })
        if (*k < 0 || *k > 1)
            throw Error("gain slope k must lie in [0, 1], got " + to_string(*k));
}

bool check_sgc(const GainSpec& spec)
{
    return spec.c * spec.k1 >= 1 && spec.c * spec.k2 >= 1;
}

DistributivityCheck check_distributivity(const GainSpec& spec)
{
    DistributivityCheck d;
    d.holds = true;
    d.analytic = true;
    d.note = spec.h == Combiner::max ? "a non-decreasing g commutes with max" : "a linear g distributes over sums";
    return d;
}

DistributivityCheck check_distributivity_sampled(Combiner h, const std::function<Rational(const Rational&)>& g,
                                                 unsigned samples, std::uint64_t seed)
{
    DistributivityCheck d;
    d.analytic = false;
    d.note = "sampled over " + std::to_string(samples) + " pairs in [0, 10]";
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> num(0, 160), den(1, 16);
    auto draw = [&] { return ratio(num(rng), den(rng)); };
    for (unsigned i = 0; i < samples; ++i) {
        Rational x = draw(), y = draw();
        Rational lhs = g(h == Combiner::max ? std::max(x, y) : Rational(x + y));
        Rational gx = g(x), gy = g(y);
        Rational rhs = h == Combiner::max ? std::max(gx, gy) : Rational(gx + gy);
        if (lhs != rhs) {
            d.holds = false;
            d.counterexample = std::make_pair(x, y);
            d.note += "; g(h(x,y)) = " + to_string(lhs) + " but h(g(x),g(y)) = " + to_string(rhs);
            break;
        }
    }
    return d;
}

namespace
{

std::vector<std::vector<Extended>> table_matrix(const IndexedOmts& rows, const IndexedOmts& cols,
                                                const SimFunctionTable& v, const char* what)
{
    std::vector<std::vector<Extended>> m(rows.size(), std::vector<Extended>(cols.size()));
    for (std::size_t a = 0; a < rows.size(); ++a)
        for (std::size_t b = 0; b < cols.size(); ++b) {
            auto x = v.find(rows.name(a), cols.name(b));
            if (!x)
                throw Error(std::string(what) + " has no value for (" + rows.name(a) + ", " + cols.name(b) + ")");
            m[a][b] = *x;
        }
    return m;
}

// lower[q'][q][l]: inf of V(q', r') over moves q --m--> r' of the simulating system with
// d_Sigma(l, m) <= tau, for each label l of the simulated system.
struct LowerTable
{
    std::vector<std::vector<std::vector<Extended>>> values;

    LowerTable(const IndexedOmts& sim, const IndexedOmts& by, const std::vector<std::vector<Extended>>& v,
               const MetricSuite& suite, const Rational& tau)
    {
        Extended radius{ tau };
        const auto& labels = sim.labels();
        values.assign(sim.size(), std::vector<std::vector<Extended>>(by.size(),
                                                                     std::vector<Extended>(labels.size())));
        for (std::size_t q = 0; q < by.size(); ++q)
            for (std::size_t l = 0; l < labels.size(); ++l) {
                std::vector<std::size_t> targets;
                for (const auto& e : by.outgoing(q))
                    if (d_sigma(suite, labels[l], by.label(e)) <= radius)
                        targets.push_back(e.dst);
                for (std::size_t p = 0; p < sim.size(); ++p) {
                    Extended inf = Extended::infinity();
                    for (auto r : targets)
                        inf = min(inf, v[p][r]);
                    values[p][q][l] = inf;
                }
            }
    }
};

std::size_t label_index(const IndexedOmts& t, const Label& l)
{
    const auto& labels = t.labels();
    auto it = std::lower_bound(labels.begin(), labels.end(), l);
    if (it == labels.end() || *it != l)
        throw Error("label " + to_string(l) + " is not used by the system");
    return static_cast<std::size_t>(it - labels.begin());
}

std::string pair_name(const StateId& a, const StateId& b)
{
    return "(" + a + ", " + b + ")";
}

} // namespace

HypothesisCheck check_g_condition(const GainInstance& in, const GainSpec& spec, const std::set<LabelPair>& sigma12)
{
    auto v13 = table_matrix(in.t1, in.t3, in.v13, "V13");
    auto v24 = table_matrix(in.t2, in.t4, in.v24, "V24");
    LowerTable low13(in.t1, in.t3, v13, in.suite, in.tau13);
    LowerTable low24(in.t2, in.t4, v24, in.suite, in.tau24);

    HypothesisCheck check;
    for (std::size_t q1 = 0; q1 < in.t1.size(); ++q1)
        for (std::size_t q2 = 0; q2 < in.t2.size(); ++q2)
            for (std::size_t q3 = 0; q3 < in.t3.size(); ++q3)
                for (std::size_t q4 = 0; q4 < in.t4.size(); ++q4) {
                    Extended all = Extended::negative_infinity();
                    Extended lifted = Extended::negative_infinity();
                    for (const auto& e1 : in.t1.outgoing(q1)) {
                        const Label& l1 = in.t1.label(e1);
                        if (l1.is_empty())
                            continue;
                        for (const auto& e2 : in.t2.outgoing(q2)) {
                            const Label& l2 = in.t2.label(e2);
                            if (l2.is_empty())
                                continue;
                            Extended value = combine(spec.h, low13.values[e1.dst][q3][e1.label],
                                                     low24.values[e2.dst][q4][e2.label]);
                            if (sigma12.contains({ l1, l2 }))
                                lifted = max(lifted, value);
                            all = max(all, value);
                        }
                    }
                    Extended rhs = lifted.scaled(spec.c);
                    if (all < rhs) {
                        check.passed = false;
                        check.witnesses.push_back(
                            "at (" + product_state_name(in.t1.name(q1), in.t2.name(q2)) + ", " +
                            product_state_name(in.t3.name(q3), in.t4.name(q4)) + "): sup over all label pairs " +
                            to_string(all) + " < g(sup over lifted pairs) = " + to_string(rhs));
                    }
                }
    return check;
}

HypothesisCheck check_gamma_conditions(const GainInstance& in, const GainSpec& spec,
                                       const std::set<LabelPair>& sigma12, const std::set<LabelPair>& sigma34,
                                       const Rational& tau)
{
    auto v13 = table_matrix(in.t1, in.t3, in.v13, "V13");
    auto v24 = table_matrix(in.t2, in.t4, in.v24, "V24");
    LowerTable low13(in.t1, in.t3, v13, in.suite, in.tau13);
    LowerTable low24(in.t2, in.t4, v24, in.suite, in.tau24);
    Extended radius{ tau };

    HypothesisCheck check;
    // side 0 checks the first components against T3, side 1 the second against T4.
    auto run_side = [&](int side) {
        const IndexedOmts& sim = side == 0 ? in.t1 : in.t2;
        const IndexedOmts& by = side == 0 ? in.t3 : in.t4;
        const auto& v = side == 0 ? v13 : v24;
        const auto& low = side == 0 ? low13 : low24;
        const Rational& k = side == 0 ? spec.k1 : spec.k2;
        for (const auto& pair : sigma12) {
            const Label& sigma = side == 0 ? pair.first : pair.second;
            std::size_t l = label_index(sim, sigma);
            Label chi = chrono_part(sigma);
            std::set<Label> ball;
            for (const auto& [s3, s4] : sigma34) {
                const Label& s = side == 0 ? s3 : s4;
                if (d_sigma(in.suite, chi, chrono_part(s)) <= radius)
                    ball.insert(s);
            }
            for (std::size_t q = 0; q < by.size(); ++q) {
                std::vector<std::size_t> targets;
                for (const auto& e : by.outgoing(q))
                    if (ball.contains(by.label(e)))
                        targets.push_back(e.dst);
                for (std::size_t p = 0; p < sim.size(); ++p) {
                    Extended inf = Extended::infinity();
                    for (auto r : targets)
                        inf = min(inf, v[p][r]);
                    Extended rhs = inf.scaled(k);
                    const Extended& lhs = low.values[p][q][l];
                    if (lhs < rhs) {
                        check.passed = false;
                        check.witnesses.push_back(std::string(side == 0 ? "gamma1" : "gamma2") + " at label " +
                                                  to_string(sigma) + ", " + pair_name(sim.name(p), by.name(q)) +
                                                  ": " + to_string(lhs) + " < " + to_string(rhs));
                    }
                }
            }
        }
    };
    run_side(0);
    run_side(1);
    return check;
}

SmallGainCertificate verify_small_gain(const Omts& t1, const Omts& t2, const Omts& t3, const Omts& t4,
                                       const SimFunctionTable& v13, const SimFunctionTable& v24,
                                       const MetricSuite& suite, const GainSpec& spec, const Rational& tau13,
                                       const Rational& tau24)
{
    validate_gain_spec(spec);
    IndexedOmts i1(t1), i2(t2), i3(t3), i4(t4);
    if (!verify_sim_function(i1, i3, suite, tau13, v13).ok)
        throw Error("V13 is not a simulation function of T1 by T3");
    if (!verify_sim_function(i2, i4, suite, tau24, v24).ok)
        throw Error("V24 is not a simulation function of T2 by T4");
    if (i1.output_dimension() != i3.output_dimension())
        throw Error("T1 and T3 have different output dimensions");

    SmallGainCertificate cert;
    cert.spec = spec;
    cert.tau = std::min(tau13, tau24);

    ComposedOmts c12 = compose(t1, t2);
    ComposedOmts c34 = compose(t3, t4);
    IndexedOmts i12(c12.system), i34(c34.system);
    MetricSuite psuite = product_suite(suite, c12.split, spec.h_tilde);

    SimFunctionTable v = compose_sim_function(v13, v24, spec.h);
    auto vm = table_matrix(i12, i34, v, "composed V");
    for (std::size_t a = 0; a < i12.size(); ++a)
        for (std::size_t b = 0; b < i34.size(); ++b) {
            Extended d = d_pi(psuite, i12.output(a), i34.output(b));
            if (vm[a][b] < d) {
                cert.output_bound.passed = false;
                cert.output_bound.witnesses.push_back("at " + pair_name(i12.name(a), i34.name(b)) + ": V = " +
                                                      to_string(vm[a][b]) + " < d_Pi = " + to_string(d));
            }
        }

    cert.distributivity = check_distributivity(spec);
    cert.sgc = check_sgc(spec);
    GainInstance in{ i1, i2, i3, i4, v13, v24, suite, tau13, tau24 };
    cert.g_condition = check_g_condition(in, spec, c12.lifted);
    cert.gamma = check_gamma_conditions(in, spec, c12.lifted, c34.lifted, cert.tau);

    cert.conclusion = verify_sim_function(i12, i34, psuite, cert.tau, v);
    cert.precision12 = precision_from_V(v, c12.system.initial, c34.system.initial);
    cert.precision_bound = composed_precision(precision_from_V(v13, t1.initial, t3.initial),
                                              precision_from_V(v24, t2.initial, t4.initial), spec.h);
    return cert;
}

Extended composed_precision(const Extended& eps13, const Extended& eps24, Combiner h)
{
    return combine(h, eps13, eps24);
}

} // namespace omts
