#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "banachlab/expander.hpp"
#include "banachlab/inequality.hpp"

namespace banachlab {

using Json = nlohmann::ordered_json;

inline Json to_json(const InequalityReport& r) {
    Json j;
    j["name"] = r.name;
    j["parameters"] = r.parameters;
    j["lhs_lower"] = r.lhs_lower;
    j["rhs_upper"] = r.rhs_upper;
    j["margin"] = r.margin();
    j["satisfied"] = r.satisfied();
    j["trial_count"] = r.trial_count;
    j["seed"] = r.seed;
    return j;
}

inline Json to_json(const DecayScan& s) {
    Json j;
    j["alpha"] = s.alpha;
    j["beta"] = s.beta;
    j["C"] = s.c;
    j["fitted_beta"] = s.fitted_beta;
    j["bounded"] = s.bounded;
    j["positive_beta"] = s.positive_beta;
    j["h"] = s.h;
    Json rows = Json::array();
    for (const DecayRow& r : s.rows)
        rows.push_back({{"n", r.n}, {"lower", r.lower}, {"upper", r.upper}});
    j["rows"] = rows;
    return j;
}

inline std::string decay_csv(const DecayScan& s, std::uint64_t seed) {
    std::ostringstream out;
    out << "n,lower,upper,alpha,beta,C,fitted_beta,seed\n";
    for (const DecayRow& r : s.rows)
        out << r.n << "," << r.lower << "," << r.upper << "," << s.alpha << "," << s.beta << ","
            << s.c << "," << s.fitted_beta << "," << seed << "\n";
    return out.str();
}

inline Json to_json(const ObstructionRow& r, const std::string& space, std::uint64_t seed) {
    Json j;
    j["m"] = r.m;
    j["vertices"] = r.vertices;
    j["degree"] = r.degree;
    j["lambda1"] = r.lambda1;
    j["ratio_lower"] = r.ratio_lower;
    if (r.ratio_oracle)
        j["ratio_oracle"] = *r.ratio_oracle;
    else
        j["ratio_oracle"] = nullptr;
    j["space"] = space;
    j["seed"] = seed;
    return j;
}

inline std::string obstruction_csv(const std::vector<ObstructionRow>& rows,
                                   const std::string& space, std::uint64_t seed) {
    std::ostringstream out;
    out << "m,vertices,degree,lambda1,ratio_lower,ratio_oracle,space,seed\n";
    for (const ObstructionRow& r : rows) {
        out << r.m << "," << r.vertices << "," << r.degree << "," << r.lambda1 << ","
            << r.ratio_lower << ",";
        if (r.ratio_oracle) out << *r.ratio_oracle;
        out << "," << space << "," << seed << "\n";
    }
    return out.str();
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file " + path);
    f << text;
}

}  // namespace banachlab
