#pragma once

#include "omts/composition.hpp"
#include "omts/conformance.hpp"
#include "omts/model.hpp"
#include "omts/stas.hpp"

#include <json.hpp>

#include <string>

namespace omts
{

using Json = nlohmann::json;

// Rationals are written as "n/d" strings; readers also accept integers and "p/q" or decimal
// strings. Extended values add "inf" and "-inf".
Json rational_to_json(const Rational& r);
Rational rational_from_json(const Json& j);
Json extended_to_json(const Extended& e);
Extended extended_from_json(const Json& j);

// "nu" or {"u": symbol, "chi": duration} with an optional "jumps" array.
Json label_to_json(const Label& l);
Label label_from_json(const Json& j);

// Model files. Serialization writes the canonical form; parsing does not validate.
Json omts_to_json(const Omts& m);
Omts omts_from_json(const Json& j);
std::string serialize_omts(const Omts& m);
Omts parse_omts(const std::string& text);

// {"pairs": [[q1, q2], ...]}
Json derivation_to_json(const DerivationRelation& d);
DerivationRelation derivation_from_json(const Json& j);

// {"tau", "d_pi", "values": [{"q1", "q2", "value"}]}; rows and columns of a parsed table are
// the sorted distinct ids it mentions.
Json sim_table_to_json(const SimFunctionTable& v, OutputMetric d_pi);
SimFunctionTable sim_table_from_json(const Json& j);

Json relation_to_json(const StasRelation& r);
Json execution_to_json(const IndexedOmts& t, const Execution& e);
Json verdict_to_json(const IndexedOmts& t1, const IndexedOmts& t2, const ConformanceVerdict& v);
Json certificate_to_json(const ConformanceCertificate& c);
Json composed_sidecar_to_json(const ComposedOmts& c);
Json small_gain_to_json(const SmallGainCertificate& c);

Json read_json_file(const std::string& path);
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

} // namespace omts
