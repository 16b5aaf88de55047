#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace dpcert {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kReportSchema = "dp-certify/1";

enum class Verdict { Certified, Fails, NotEstablished, Undecided };

inline const char* to_string(Verdict v)
{
    switch (v) {
        case Verdict::Certified: return "CERTIFIED";
        case Verdict::Fails: return "FAILS";
        case Verdict::NotEstablished: return "NOT-ESTABLISHED";
        default: return "UNDECIDED";
    }
}

// Exit convention: CERTIFIED 0, FAILS / NOT-ESTABLISHED 1, UNDECIDED 2,
// input errors 3.
inline int exit_code(Verdict v)
{
    switch (v) {
        case Verdict::Certified: return 0;
        case Verdict::Fails:
        case Verdict::NotEstablished: return 1;
        default: return 2;
    }
}

struct CheckOutcome {
    std::string name;
    Verdict verdict = Verdict::Undecided;
    std::string detail;              // one-line human explanation
    nlohmann::json payload;          // structured witnesses and bounds
    double wall_ms = 0.0;            // console display only, never serialized
};

// Deterministic report: the serialized form contains no timestamps and uses
// sorted keys, so identical inputs give byte-identical files.
struct Report {
    nlohmann::json surface;
    nlohmann::json config;
    std::vector<CheckOutcome> checks;
    Verdict overall = Verdict::Undecided;
    nlohmann::json certificates;  // saturation certificate bundles, optional

    nlohmann::json to_json() const
    {
        nlohmann::json checks_json(nlohmann::json::value_t::array);
        for (const auto& c : checks) {
            nlohmann::json entry{{"name", c.name},
                                 {"verdict", to_string(c.verdict)},
                                 {"detail", c.detail}};
            if (!c.payload.is_null())
                entry["payload"] = c.payload;
            checks_json.push_back(std::move(entry));
        }
        nlohmann::json j{{"schema", kReportSchema},
                         {"tool", {{"name", "dpcert"}, {"version", kToolVersion}}},
                         {"surface", surface},
                         {"config", config},
                         {"checks", std::move(checks_json)},
                         {"overall", to_string(overall)}};
        if (!certificates.is_null())
            j["certificates"] = certificates;
        return j;
    }

    std::string to_markdown() const
    {
        std::string md = "# dpcert report\n\n";
        md += "overall: **" + std::string(to_string(overall)) + "**\n\n";
        md += "surface: `" + surface.dump() + "`\n\n";
        md += "| check | verdict | detail |\n|---|---|---|\n";
        for (const auto& c : checks)
            md += "| " + c.name + " | " + to_string(c.verdict) + " | " + c.detail + " |\n";
        return md;
    }
};

}  // namespace dpcert
