#pragma once

#include "omts/extended.hpp"
#include "omts/metrics.hpp"
#include "omts/model.hpp"

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace omts
{

using StatePair = std::pair<StateId, StateId>;

// A space-time approximate simulation relation of a first system by a second one.
struct StasRelation
{
    Rational tau;
    Extended eps;
    std::set<StatePair> pairs;
};

// Values of a candidate simulation function on the pairs rows x cols. Tables read from files
// may be partial; verify_sim_function rejects them.
class SimFunctionTable
{
public:
    SimFunctionTable() = default;
    SimFunctionTable(Rational tau, std::vector<StateId> rows, std::vector<StateId> cols, Extended fill = Extended{ 0 });

    [[nodiscard]] const Rational& tau() const { return _tau; }
    [[nodiscard]] const std::vector<StateId>& rows() const { return _rows; }
    [[nodiscard]] const std::vector<StateId>& cols() const { return _cols; }

    [[nodiscard]] const Extended& at(std::size_t r, std::size_t c) const { return _values[r * _cols.size() + c]; }
    void set(std::size_t r, std::size_t c, Extended v) { _values[r * _cols.size() + c] = std::move(v); }

    // Lookup by state ids; nullopt when the pair is absent.
    [[nodiscard]] std::optional<Extended> find(const StateId& row, const StateId& col) const;

    // Builds a table from explicit entries; pairs not listed stay undefined.
    static SimFunctionTable from_entries(Rational tau, std::vector<StateId> rows, std::vector<StateId> cols,
                                         const std::vector<std::pair<StatePair, Extended>>& entries);

    [[nodiscard]] bool is_total() const;
    [[nodiscard]] bool defined(std::size_t r, std::size_t c) const { return _defined[r * _cols.size() + c]; }

    friend bool operator==(const SimFunctionTable&, const SimFunctionTable&) = default;

private:
    std::size_t row_index(const StateId& id) const;
    std::size_t col_index(const StateId& id) const;

    Rational _tau{ 0 };
    std::vector<StateId> _rows;
    std::vector<StateId> _cols;
    std::vector<Extended> _values;
    std::vector<bool> _defined;
};

struct StasViolation
{
    StatePair pair;
    int condition; // 1: output distance, 2: unmatched transition
    std::string detail;
};

// Unique largest relation satisfying the output-distance and transition-matching conditions,
// computed by Jacobi rounds of pair removal starting from {d_Pi <= eps}.
StasRelation greatest_stas_relation(const IndexedOmts& t1, const IndexedOmts& t2, const MetricSuite& suite,
                                    const Rational& tau, const Extended& eps);

// Every violation of the two relation conditions against the host systems.
std::vector<StasViolation> verify_stas_relation(const IndexedOmts& t1, const IndexedOmts& t2, const MetricSuite& suite,
                                                const StasRelation& r);

// Every first-system initial state is related to some second-system initial state.
bool check_simulates(const StasRelation& r, const std::vector<StateId>& initial1, const std::vector<StateId>& initial2);

// Least fixed point of V = max(d_Pi, sup over first-system moves of inf over tau-ball-matched
// second-system moves of V at the successors), by ascending Jacobi iteration from V = d_Pi.
SimFunctionTable smallest_sim_function(const IndexedOmts& t1, const IndexedOmts& t2, const MetricSuite& suite,
                                       const Rational& tau);

struct SimFunctionViolation
{
    StatePair pair;
    std::string condition; // "A0" or "A1"
    Extended value;
    Extended required;
};

struct SimFunctionCheck
{
    bool ok = true;
    std::vector<SimFunctionViolation> violations;
};

// Exhaustive check of both defining inequalities at every pair. Throws on partial tables or
// tables whose row/column ids do not match the systems.
SimFunctionCheck verify_sim_function(const IndexedOmts& t1, const IndexedOmts& t2, const MetricSuite& suite,
                                     const Rational& tau, const SimFunctionTable& v);

// {(q, q') : V(q, q') <= eps}.
StasRelation level_set(const SimFunctionTable& v, const Extended& eps);

// Sorted distinct values of a table.
std::vector<Extended> table_values(const SimFunctionTable& v);

// sup over first-system initial states of inf over second-system initial states of V.
Extended precision_from_V(const SimFunctionTable& v, const std::vector<StateId>& initial1,
                          const std::vector<StateId>& initial2);

struct ConformanceCertificate
{
    bool certified = false;
    Rational tau;
    Extended eps;
    std::vector<StatePair> derivation;
    std::vector<StatePair> outside; // derivation pairs missing from the relation
    std::vector<std::string> warnings;
};

// Unbounded-horizon conformance certificate from a verified relation containing d. Requires a
// string metric that is positionwise compatible with d_Sigma (maxpos).
ConformanceCertificate sim_to_conformance(const StasRelation& r, const DerivationRelation& d, const MetricSuite& suite);

} // namespace omts
