#include "equidyn/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

namespace equidyn {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void invalid(const std::string& field, const std::string& why)
{
    fail(ErrorCode::ConfigInvalid, "field \"" + field + "\": " + why);
}

const Json& field(const Json& j, const char* name, const char* context)
{
    if (!j.is_object() || !j.contains(name)) {
        invalid(name, std::string("missing in ") + context);
    }
    return j.at(name);
}

int get_int(const Json& j, const char* name, const char* context)
{
    const Json& v = field(j, name, context);
    if (!v.is_number_integer()) {
        invalid(name, "must be an integer");
    }
    return v.get<int>();
}

std::vector<double> get_doubles(const Json& v, const char* name)
{
    if (!v.is_array() || v.empty()) {
        invalid(name, "must be a nonempty array of numbers");
    }
    std::vector<double> out;
    for (const Json& e : v) {
        if (!e.is_number()) {
            invalid(name, "must contain only numbers");
        }
        out.push_back(e.get<double>());
    }
    return out;
}

std::vector<int> get_ints(const Json& v, const char* name)
{
    if (!v.is_array() || v.empty()) {
        invalid(name, "must be a nonempty array of integers");
    }
    std::vector<int> out;
    for (const Json& e : v) {
        if (!e.is_number_integer()) {
            invalid(name, "must contain only integers");
        }
        out.push_back(e.get<int>());
    }
    return out;
}

// Re-raise library validation failures as config errors on `name`.
template <typename F>
auto guarded(const char* name, F&& make)
{
    try {
        return make();
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ConfigInvalid) {
            throw;
        }
        invalid(name, e.what());
    }
}

CellularAutomaton parse_table_ca(const Json& j)
{
    const int radius = get_int(j, "radius", "ca system");
    const Sidedness s = j.contains("sided") ? parse_sidedness(j.at("sided"), "sided")
                                            : Sidedness::TwoSided;
    const int k = j.contains("alphabet") ? get_int(j, "alphabet", "ca system") : 2;
    const Alphabet alphabet = guarded("alphabet", [&] { return Alphabet(k); });
    const std::size_t len = window_size(s, radius);
    const Json& table = field(j, "table", "ca system");

    std::size_t entries = 1;
    for (std::size_t i = 0; i < len; ++i) {
        entries *= static_cast<std::size_t>(k);
        if (entries > (std::size_t{1} << 24)) {
            invalid("table", "too many neighbourhoods");
        }
    }
    std::vector<Symbol> out(entries, 0);
    if (table.is_array()) {
        if (table.size() != entries) {
            invalid("table", "array must list " + std::to_string(entries) + " outputs");
        }
        for (std::size_t i = 0; i < entries; ++i) {
            if (!table[i].is_number_integer() || !alphabet.contains(table[i].get<int>())) {
                invalid("table", "output symbols must be alphabet integers");
            }
            out[i] = static_cast<Symbol>(table[i].get<int>());
        }
    } else if (table.is_object()) {
        std::vector<bool> seen(entries, false);
        for (const auto& [key, value] : table.items()) {
            const Word w = guarded("table", [&] { return parse_word(key, alphabet); });
            if (w.size() != len) {
                invalid("table", "neighbourhood \"" + key + "\" has the wrong length");
            }
            std::size_t idx = 0;
            for (Symbol sym : w) {
                idx = idx * static_cast<std::size_t>(k) + sym;
            }
            if (!value.is_number_integer() || !alphabet.contains(value.get<int>())) {
                invalid("table", "output symbols must be alphabet integers");
            }
            out[idx] = static_cast<Symbol>(value.get<int>());
            seen[idx] = true;
        }
        for (bool b : seen) {
            if (!b) {
                invalid("table", "rule table must list every neighbourhood");
            }
        }
    } else {
        invalid("table", "must be an object or array");
    }
    return guarded("table", [&] { return CellularAutomaton(alphabet, s, radius, std::move(out)); });
}

} // namespace

Sidedness parse_sidedness(const Json& j, const char* name)
{
    if (j == "one") {
        return Sidedness::OneSided;
    }
    if (j == "two") {
        return Sidedness::TwoSided;
    }
    invalid(name, "must be \"one\" or \"two\"");
}

System parse_system(const Json& j)
{
    const Json& type = field(j, "type", "system");
    if (type == "eca") {
        const int rule = get_int(j, "rule", "eca system");
        return guarded("rule", [&] { return System(CellularAutomaton::elementary(rule)); });
    }
    if (type == "ca") {
        return parse_table_ca(j);
    }
    if (type == "shift") {
        const int k = j.contains("alphabet") ? get_int(j, "alphabet", "shift system") : 2;
        return guarded("alphabet", [&] { return System(CellularAutomaton::shift(Alphabet(k))); });
    }
    if (type == "identity") {
        const int k = j.contains("alphabet") ? get_int(j, "alphabet", "identity system") : 2;
        const Sidedness s = j.contains("sided") ? parse_sidedness(j.at("sided"), "sided")
                                                : Sidedness::TwoSided;
        return guarded("alphabet",
                       [&] { return System(CellularAutomaton::identity(Alphabet(k), s, 1)); });
    }
    if (type == "odometer") {
        const std::vector<int> sizes = get_ints(field(j, "sizes", "odometer system"), "sizes");
        return guarded("sizes", [&] { return System(Odometer(sizes)); });
    }
    if (type == "rotation") {
        const Json& a = field(j, "alpha", "rotation system");
        if (!a.is_number()) {
            invalid("alpha", "must be a number");
        }
        return guarded("alpha", [&] { return System(Rotation(a.get<double>())); });
    }
    invalid("type", "unknown system type " + type.dump());
}

Measure parse_measure(const Json& j)
{
    const Json& type = field(j, "type", "measure");
    if (type == "bernoulli") {
        const auto w = get_doubles(field(j, "weights", "bernoulli measure"), "weights");
        return guarded("weights", [&] { return Measure(BernoulliMeasure(w)); });
    }
    if (type == "markov") {
        const Json& p = field(j, "P", "markov measure");
        if (!p.is_array() || p.empty()) {
            invalid("P", "must be a nonempty matrix");
        }
        MarkovMeasure::Matrix rows;
        for (const Json& row : p) {
            rows.push_back(get_doubles(row, "P"));
        }
        std::optional<std::vector<double>> pi;
        if (j.contains("pi")) {
            pi = get_doubles(j.at("pi"), "pi");
        }
        return guarded("P", [&] { return Measure(MarkovMeasure(rows, pi)); });
    }
    if (type == "haar") {
        const auto sizes = get_ints(field(j, "sizes", "haar measure"), "sizes");
        return guarded("sizes", [&] { return Measure(ProductMeasure(sizes)); });
    }
    if (type == "lebesgue") {
        return CircleLebesgue{};
    }
    invalid("type", "unknown measure type " + type.dump());
}

Json system_to_json(const System& sys)
{
    return std::visit(
        overloaded{
            [](const CellularAutomaton& ca) -> Json {
                Json j;
                if (auto rule = ca.wolfram_number()) {
                    j["type"] = "eca";
                    j["rule"] = *rule;
                    return j;
                }
                j["type"] = "ca";
                j["radius"] = ca.radius();
                j["alphabet"] = ca.alphabet().size();
                j["sided"] = std::string(to_string(ca.sidedness()));
                Json table = Json::array();
                for (Symbol s : ca.table()) {
                    table.push_back(static_cast<int>(s));
                }
                j["table"] = table;
                return j;
            },
            [](const Odometer& odo) -> Json {
                return Json{{"type", "odometer"}, {"sizes", odo.sizes()}};
            },
            [](const Rotation& rot) -> Json {
                return Json{{"type", "rotation"}, {"alpha", rot.alpha()}};
            },
        },
        sys);
}

Json measure_to_json(const Measure& mu)
{
    return std::visit(overloaded{
                          [](const BernoulliMeasure& m) -> Json {
                              return Json{{"type", "bernoulli"}, {"weights", m.weights()}};
                          },
                          [](const MarkovMeasure& m) -> Json {
                              return Json{{"type", "markov"},
                                          {"P", m.transitions()},
                                          {"pi", m.stationary()}};
                          },
                          [](const ProductMeasure& m) -> Json {
                              return Json{{"type", "haar"}, {"sizes", m.sizes()}};
                          },
                          [](const CircleLebesgue&) -> Json { return Json{{"type", "lebesgue"}}; },
                      },
                      mu);
}

double round12(double v)
{
    if (!std::isfinite(v) || v == 0.0) {
        return v;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
}

} // namespace equidyn
