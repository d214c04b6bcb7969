#include "tontine/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace tontine::io {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) {
        throw ParseError(where + " must be an object");
    }
    for (const auto& item : obj.items()) {
        if (allowed.count(item.key()) == 0) {
            throw ParseError(where + ": unknown field '" + item.key() + "'");
        }
    }
}

double number(const json& obj, const char* key, const std::string& where) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        throw ParseError(where + ": missing field '" + key + "'");
    }
    if (!it->is_number()) {
        throw ParseError(where + ": field '" + key + "' must be a number");
    }
    return it->get<double>();
}

double optional_number(const json& obj, const char* key, double fallback, const std::string& where) {
    return obj.contains(key) ? number(obj, key, where) : fallback;
}

std::vector<double> number_array(const json& value, const std::string& where) {
    if (!value.is_array()) {
        throw ParseError(where + " must be an array of numbers");
    }
    std::vector<double> out;
    out.reserve(value.size());
    for (const auto& v : value) {
        if (!v.is_number()) {
            throw ParseError(where + " must be an array of numbers");
        }
        out.push_back(v.get<double>());
    }
    return out;
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Index>(v.size()));
}

void check_version(const json& doc) {
    if (doc.contains("version")) {
        const auto& v = doc["version"];
        if (!v.is_number_integer() || v.get<int>() != kSchemaVersion) {
            throw ParseError("unsupported schema version (expected 1)");
        }
    }
}

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
}

}  // namespace

SurvivalModel<double> PoolSpec::model() const {
    if (joint_table) {
        return SurvivalModel<double>::joint_table(*joint_table, pool.size());
    }
    return SurvivalModel<double>::independent(pool.survival_probs);
}

PoolSpec parse_pool_spec(const std::string& text) {
    const json doc = parse_json(text);
    reject_unknown(doc, {"version", "participants", "admin_investment", "return", "joint_table"}, "pool spec");
    check_version(doc);

    if (!doc.contains("participants") || !doc["participants"].is_array()) {
        throw ParseError("pool spec: 'participants' must be an array");
    }
    std::vector<Participant<double>> participants;
    std::size_t k = 0;
    for (const auto& p : doc["participants"]) {
        const std::string where = "participant " + std::to_string(++k);
        reject_unknown(p, {"investment", "survival_prob"}, where);
        participants.push_back({number(p, "investment", where), number(p, "survival_prob", where)});
    }

    PoolSpec spec;
    spec.pool = Pool<double>::from_participants(participants, optional_number(doc, "admin_investment", 0.0, "pool spec"),
                                                optional_number(doc, "return", 0.0, "pool spec"));
    if (doc.contains("joint_table")) {
        spec.joint_table = number_array(doc["joint_table"], "joint_table");
    }
    return spec;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

PoolSpec load_pool_spec(const std::string& path) { return parse_pool_spec(read_file(path)); }

std::string emit_pool_spec(const PoolSpec& spec) {
    json doc;
    doc["version"] = kSchemaVersion;
    json participants = json::array();
    for (Index i = 0; i < spec.pool.size(); ++i) {
        participants.push_back({{"investment", spec.pool.investments(i)}, {"survival_prob", spec.pool.survival_probs(i)}});
    }
    doc["participants"] = participants;
    doc["admin_investment"] = spec.pool.admin_investment;
    doc["return"] = spec.pool.period_return;
    if (spec.joint_table) {
        doc["joint_table"] = *spec.joint_table;
    }
    return doc.dump(2) + "\n";
}

ClaimsSpec parse_claims_spec(const std::string& text) {
    const json doc = parse_json(text);
    reject_unknown(doc, {"version", "premiums", "return", "outcomes"}, "claims spec");
    check_version(doc);

    if (!doc.contains("outcomes") || !doc["outcomes"].is_array()) {
        throw ParseError("claims spec: 'outcomes' must be an array");
    }
    std::vector<ClaimsOutcome<double>> outcomes;
    std::size_t k = 0;
    for (const auto& o : doc["outcomes"]) {
        const std::string where = "outcome " + std::to_string(k++);
        reject_unknown(o, {"probability", "claims"}, where);
        if (!o.contains("claims")) {
            throw ParseError(where + ": missing field 'claims'");
        }
        outcomes.push_back({number(o, "probability", where), to_vector(number_array(o["claims"], where + " claims"))});
    }

    std::optional<PremiumVector<double>> premiums;
    if (doc.contains("premiums")) {
        premiums.emplace(to_vector(number_array(doc["premiums"], "premiums")));
    }
    return ClaimsSpec{std::move(premiums), optional_number(doc, "return", 0.0, "claims spec"),
                      ClaimsDistribution<double>(std::move(outcomes))};
}

ClaimsSpec load_claims_spec(const std::string& path) { return parse_claims_spec(read_file(path)); }

std::string format_fixed(double x, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
    std::string s(buf);
    if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) {
        s.erase(0, 1);
    }
    return s;
}

std::string format_probability(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string format_vector(const Eigen::VectorXd& v, int decimals) {
    std::string out = "[";
    for (Index i = 0; i < v.size(); ++i) {
        if (i > 0) {
            out += ", ";
        }
        out += format_fixed(v(i), decimals);
    }
    return out + "]";
}

const std::vector<std::uint64_t>& worked_example_order() {
    static const std::vector<std::uint64_t> order{7, 6, 4, 5, 3, 1, 2, 0};
    return order;
}

void write_payout_table_csv(std::ostream& out, const std::vector<PayoutRow<double>>& rows) {
    if (rows.empty()) {
        return;
    }
    const Index width = rows.front().payouts.size();
    out << "scenario,probability";
    for (Index i = 1; i <= width; ++i) {
        out << ",W" << i;
    }
    out << '\n';
    for (const auto& row : rows) {
        out << row.scenario.index << ',' << format_probability(row.probability);
        for (Index i = 0; i < width; ++i) {
            out << ',' << format_fixed(row.payouts.amounts(i), 6);
        }
        out << '\n';
    }
}

}  // namespace tontine::io
