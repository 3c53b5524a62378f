#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "vifrag/util/jsonl.hpp"

namespace vifrag::sandbox {

/// K generated verification scripts, K test cases, and the K x K execution
/// matrix with its row/column accuracies. matrix[j][i] is the outcome of
/// running script j on case i; acc_func[j] is the mean of row j, acc_case[i]
/// the mean of column i.
struct VerificationArtifact {
    std::string instruction_id;
    std::vector<std::string> funcs;
    std::vector<nlohmann::json> cases;
    std::vector<std::vector<int>> matrix;
    std::vector<double> acc_func;
    std::vector<double> acc_case;

    size_t k() const { return funcs.size(); }
};

inline nlohmann::json to_json(const VerificationArtifact& a) {
    nlohmann::json j;
    j["instruction_id"] = a.instruction_id;
    j["funcs"] = a.funcs;
    j["cases"] = a.cases;
    j["matrix"] = a.matrix;
    j["acc_func"] = a.acc_func;
    j["acc_case"] = a.acc_case;
    return j;
}

inline VerificationArtifact artifact_from_json(const nlohmann::json& j) {
    util::check_object_fields(
        j, {"instruction_id", "funcs", "cases", "matrix", "acc_func", "acc_case"}, {},
        "verification artifact");
    VerificationArtifact a;
    a.instruction_id = j.at("instruction_id").get<std::string>();
    a.funcs = j.at("funcs").get<std::vector<std::string>>();
    for (const auto& c : j.at("cases")) a.cases.push_back(c);
    a.matrix = j.at("matrix").get<std::vector<std::vector<int>>>();
    a.acc_func = j.at("acc_func").get<std::vector<double>>();
    a.acc_case = j.at("acc_case").get<std::vector<double>>();
    if (a.funcs.size() != a.cases.size())
        throw util::SchemaError("artifact func/case count mismatch");
    return a;
}

}  // namespace vifrag::sandbox
