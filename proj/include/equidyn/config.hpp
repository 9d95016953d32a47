#pragma once

#include <json.hpp>

#include "equidyn/measures.hpp"
#include "equidyn/systems.hpp"

namespace equidyn {

using Json = nlohmann::json;

/// {"type":"eca","rule":90}, {"type":"ca","radius":r,"table":{...},"sided":"two"},
/// {"type":"shift"}, {"type":"identity"}, {"type":"odometer","sizes":[2,3]},
/// {"type":"rotation","alpha":0.618}. Throws ConfigInvalid naming the field.
System parse_system(const Json& j);

/// {"type":"bernoulli","weights":[...]}, {"type":"markov","P":[[...]],"pi":[...]},
/// {"type":"haar","sizes":[...]}, {"type":"lebesgue"}.
Measure parse_measure(const Json& j);

/// Fully expanded description (defaults filled in) for embedding in reports.
Json system_to_json(const System& sys);
Json measure_to_json(const Measure& mu);

Sidedness parse_sidedness(const Json& j, const char* field);

/// Round to 12 significant digits so reports print stable decimals.
double round12(double v);

} // namespace equidyn
