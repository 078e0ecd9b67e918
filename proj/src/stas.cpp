#include "omts/stas.hpp"

#include <algorithm>

namespace omts
{

SimFunctionTable::SimFunctionTable(Rational tau, std::vector<StateId> rows, std::vector<StateId> cols, Extended fill)
    : _tau{ std::move(tau) }, _rows{ std::move(rows) }, _cols{ std::move(cols) },
      _values(_rows.size() * _cols.size(), fill), _defined(_rows.size() * _cols.size(), true)
{
}

SimFunctionTable SimFunctionTable::from_entries(Rational tau, std::vector<StateId> rows, std::vector<StateId> cols,
                                                const std::vector<std::pair<StatePair, Extended>>& entries)
{
    SimFunctionTable t(std::move(tau), std::move(rows), std::move(cols));
    std::fill(t._defined.begin(), t._defined.end(), false);
    for (const auto& [pair, value] : entries) {
        std::size_t r = t.row_index(pair.first);
        std::size_t c = t.col_index(pair.second);
        t._values[r * t._cols.size() + c] = value;
        t._defined[r * t._cols.size() + c] = true;
    }
    return t;
}

std::size_t SimFunctionTable::row_index(const StateId& id) const
{
    auto it = std::find(_rows.begin(), _rows.end(), id);
    if (it == _rows.end())
        throw Error("state '" + id + "' is not a row of the table");
    return static_cast<std::size_t>(it - _rows.begin());
}

std::size_t SimFunctionTable::col_index(const StateId& id) const
{
    auto it = std::find(_cols.begin(), _cols.end(), id);
    if (it == _cols.end())
        throw Error("state '" + id + "' is not a column of the table");
    return static_cast<std::size_t>(it - _cols.begin());
}

std::optional<Extended> SimFunctionTable::find(const StateId& row, const StateId& col) const
{
    auto r = std::find(_rows.begin(), _rows.end(), row);
    auto c = std::find(_cols.begin(), _cols.end(), col);
    if (r == _rows.end() || c == _cols.end())
        return std::nullopt;
    std::size_t k = static_cast<std::size_t>(r - _rows.begin()) * _cols.size() + static_cast<std::size_t>(c - _cols.begin());
    if (!_defined[k])
        return std::nullopt;
    return _values[k];
}

bool SimFunctionTable::is_total() const
{
    return std::all_of(_defined.begin(), _defined.end(), [](bool b) { return b; });
}

namespace
{

// Output distances and label compatibility of a pair of systems.
struct PairContext
{
    const IndexedOmts& t1;
    const IndexedOmts& t2;
    std::vector<std::vector<Extended>> dist;
    std::vector<std::vector<char>> compat;

    PairContext(const IndexedOmts& a, const IndexedOmts& b, const MetricSuite& suite, const Rational& tau)
        : t1{ a }, t2{ b }
    {
        if (tau < 0)
            throw Error("tau must be non-negative");
        if (a.size() > 0 && b.size() > 0 && a.output_dimension() != b.output_dimension())
            throw Error("the two systems have different output dimensions");
        dist.assign(a.size(), std::vector<Extended>(b.size()));
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j)
                dist[i][j] = d_pi(suite, a.output(i), b.output(j));
        Extended radius{ tau };
        compat.assign(a.labels().size(), std::vector<char>(b.labels().size(), 0));
        for (std::size_t i = 0; i < a.labels().size(); ++i)
            for (std::size_t j = 0; j < b.labels().size(); ++j)
                compat[i][j] = d_sigma(suite, a.labels()[i], b.labels()[j]) <= radius ? 1 : 0;
    }

    // sup over moves of q1 of inf over matched moves of q2 of value(q1', q2').
    template <class Value>
    Extended sup_inf(std::size_t q1, std::size_t q2, Value&& value) const
    {
        Extended sup = Extended::negative_infinity();
        for (const auto& e1 : t1.outgoing(q1)) {
            Extended inf = Extended::infinity();
            for (const auto& e2 : t2.outgoing(q2))
                if (compat[e1.label][e2.label])
                    inf = min(inf, value(e1.dst, e2.dst));
            sup = max(sup, inf);
            if (sup.is_infinity())
                break;
        }
        return sup;
    }
};

} // namespace

StasRelation greatest_stas_relation(const IndexedOmts& t1, const IndexedOmts& t2, const MetricSuite& suite,
                                    const Rational& tau, const Extended& eps)
{
    PairContext ctx(t1, t2, suite, tau);
    std::vector<std::vector<char>> in(t1.size(), std::vector<char>(t2.size(), 0));
    for (std::size_t a = 0; a < t1.size(); ++a)
        for (std::size_t b = 0; b < t2.size(); ++b)
            in[a][b] = ctx.dist[a][b] <= eps ? 1 : 0;

    for (bool changed = true; changed;) {
        changed = false;
        std::vector<std::pair<std::size_t, std::size_t>> removed;
        for (std::size_t a = 0; a < t1.size(); ++a)
            for (std::size_t b = 0; b < t2.size(); ++b) {
                if (!in[a][b])
                    continue;
                for (const auto& e1 : t1.outgoing(a)) {
                    bool matched = false;
                    for (const auto& e2 : t2.outgoing(b))
                        if (ctx.compat[e1.label][e2.label] && in[e1.dst][e2.dst]) {
                            matched = true;
                            break;
                        }
                    if (!matched) {
                        removed.emplace_back(a, b);
                        break;
                    }
                }
            }
        for (auto [a, b] : removed)
            in[a][b] = 0;
        changed = !removed.empty();
    }

    StasRelation r{ tau, eps, {} };
    for (std::size_t a = 0; a < t1.size(); ++a)
        for (std::size_t b = 0; b < t2.size(); ++b)
            if (in[a][b])
                r.pairs.emplace(t1.name(a), t2.name(b));
    return r;
}

std::vector<StasViolation> verify_stas_relation(const IndexedOmts& t1, const IndexedOmts& t2, const MetricSuite& suite,
                                                const StasRelation& r)
{
    PairContext ctx(t1, t2, suite, r.tau);
    std::vector<std::vector<char>> in(t1.size(), std::vector<char>(t2.size(), 0));
    for (const auto& [x, y] : r.pairs)
        in[t1.index(x)][t2.index(y)] = 1;

    std::vector<StasViolation> out;
    for (const auto& [x, y] : r.pairs) {
        std::size_t a = t1.index(x);
        std::size_t b = t2.index(y);
        if (ctx.dist[a][b] > r.eps)
            out.push_back({ { x, y }, 1, "output distance " + to_string(ctx.dist[a][b]) + " exceeds " + to_string(r.eps) });
        for (const auto& e1 : t1.outgoing(a)) {
            bool matched = std::any_of(t2.outgoing(b).begin(), t2.outgoing(b).end(), [&](const auto& e2) {
                return ctx.compat[e1.label][e2.label] && in[e1.dst][e2.dst];
            });
            if (!matched) {
                out.push_back({ { x, y }, 2,
                                "move --" + to_string(t1.label(e1)) + "--> " + t1.name(e1.dst) + " has no related match" });
                break;
            }
        }
    }
    return out;
}

bool check_simulates(const StasRelation& r, const std::vector<StateId>& initial1, const std::vector<StateId>& initial2)
{
    return std::all_of(initial1.begin(), initial1.end(), [&](const StateId& q1) {
        return std::any_of(initial2.begin(), initial2.end(),
                           [&](const StateId& q2) { return r.pairs.contains({ q1, q2 }); });
    });
}

SimFunctionTable smallest_sim_function(const IndexedOmts& t1, const IndexedOmts& t2, const MetricSuite& suite,
                                       const Rational& tau)
{
    PairContext ctx(t1, t2, suite, tau);
    std::vector<std::vector<Extended>> v = ctx.dist;
    for (bool changed = true; changed;) {
        changed = false;
        auto next = v;
        for (std::size_t a = 0; a < t1.size(); ++a)
            for (std::size_t b = 0; b < t2.size(); ++b) {
                Extended update = max(ctx.dist[a][b],
                                      ctx.sup_inf(a, b, [&](std::size_t x, std::size_t y) -> const Extended& { return v[x][y]; }));
                if (update != v[a][b]) {
                    next[a][b] = std::move(update);
                    changed = true;
                }
            }
        v = std::move(next);
    }

    SimFunctionTable table(tau, t1.model().states, t2.model().states);
    for (std::size_t a = 0; a < t1.size(); ++a)
        for (std::size_t b = 0; b < t2.size(); ++b)
            table.set(a, b, v[a][b]);
    return table;
}

SimFunctionCheck verify_sim_function(const IndexedOmts& t1, const IndexedOmts& t2, const MetricSuite& suite,
                                     const Rational& tau, const SimFunctionTable& v)
{
    if (!v.is_total())
        throw Error("simulation function table is partial");
    std::vector<std::vector<Extended>> values(t1.size(), std::vector<Extended>(t2.size()));
    for (std::size_t a = 0; a < t1.size(); ++a)
        for (std::size_t b = 0; b < t2.size(); ++b) {
            auto x = v.find(t1.name(a), t2.name(b));
            if (!x)
                throw Error("simulation function table has no value for (" + t1.name(a) + ", " + t2.name(b) + ")");
            values[a][b] = *x;
        }

    PairContext ctx(t1, t2, suite, tau);
    SimFunctionCheck check;
    for (std::size_t a = 0; a < t1.size(); ++a)
        for (std::size_t b = 0; b < t2.size(); ++b) {
            StatePair pair{ t1.name(a), t2.name(b) };
            if (values[a][b] < ctx.dist[a][b])
                check.violations.push_back({ pair, "A0", values[a][b], ctx.dist[a][b] });
            Extended required =
                ctx.sup_inf(a, b, [&](std::size_t x, std::size_t y) -> const Extended& { return values[x][y]; });
            if (values[a][b] < required)
                check.violations.push_back({ pair, "A1", values[a][b], required });
        }
    check.ok = check.violations.empty();
    return check;
}

StasRelation level_set(const SimFunctionTable& v, const Extended& eps)
{
    StasRelation r{ v.tau(), eps, {} };
    for (std::size_t a = 0; a < v.rows().size(); ++a)
        for (std::size_t b = 0; b < v.cols().size(); ++b)
            if (v.defined(a, b) && v.at(a, b) <= eps)
                r.pairs.emplace(v.rows()[a], v.cols()[b]);
    return r;
}

std::vector<Extended> table_values(const SimFunctionTable& v)
{
    std::set<Extended> values;
    for (std::size_t a = 0; a < v.rows().size(); ++a)
        for (std::size_t b = 0; b < v.cols().size(); ++b)
            if (v.defined(a, b))
                values.insert(v.at(a, b));
    return { values.begin(), values.end() };
}

Extended precision_from_V(const SimFunctionTable& v, const std::vector<StateId>& initial1,
                          const std::vector<StateId>& initial2)
{
    Extended sup = Extended::negative_infinity();
    for (const auto& q1 : initial1) {
        Extended inf = Extended::infinity();
        for (const auto& q2 : initial2) {
            auto x = v.find(q1, q2);
            if (!x)
                throw Error("simulation function table has no value for (" + q1 + ", " + q2 + ")");
            inf = min(inf, *x);
        }
        sup = max(sup, inf);
    }
    return sup;
}

ConformanceCertificate sim_to_conformance(const StasRelation& r, const DerivationRelation& d, const MetricSuite& suite)
{
    ConformanceCertificate cert;
    cert.tau = r.tau;
    cert.eps = r.eps;
    cert.derivation = d.pairs;
    std::sort(cert.derivation.begin(), cert.derivation.end());
    cert.derivation.erase(std::unique(cert.derivation.begin(), cert.derivation.end()), cert.derivation.end());
    for (const auto& p : cert.derivation)
        if (!r.pairs.contains(p))
            cert.outside.push_back(p);
    if (cert.derivation.empty())
        cert.warnings.emplace_back("empty derivation relation: the certificate holds vacuously");
    bool positionwise = suite.d_sigma_star == StringMetric::maxpos;
    if (!positionwise)
        cert.warnings.emplace_back("the hybridcat string metric does not bound prefix distances by positionwise label "
                                   "distances, so a relation does not certify conformance");
    cert.certified = cert.outside.empty() && positionwise;
    return cert;
}

} // namespace omts
