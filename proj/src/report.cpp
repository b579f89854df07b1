#include "vxa/report.hpp"

#include <sstream>

#include "json.hpp"

namespace vxa {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string coords_str(const Voa& voa, const Presentation& pres, const SparseVector& coords) {
    if (coords.zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [pos, c] : coords.e) {
        if (!first) os << " + ";
        os << "(" << scalar_str(c) << ")" << voa.label(pres.class_ids[pos]);
        first = false;
    }
    return os.str();
}

}  // namespace

std::string presentation_json(const Voa& voa, const Presentation& pres) {
    ordered_json j;
    j["schema"] = "vxa-presentation/v1";
    j["family"] = voa.spec().family == Family::heisenberg ? "heisenberg" : "virasoro";
    j["central_charge"] = scalar_str(voa.spec().central_charge);
    j["twist_order"] = voa.T();
    j["level"] = pres.lvl.str();
    j["cutoff"] = pres.W;
    j["depth"] = pres.depth;
    j["dims_per_weight"] = pres.dims_per_weight;
    j["relation_rank"] = pres.relations.rank();
    ordered_json basis = ordered_json::array();
    for (int id : pres.class_ids) basis.push_back(voa.label(id));
    j["basis"] = std::move(basis);
    j["identity"] = pres.identity_class;
    ordered_json products = ordered_json::array();
    for (const auto& [key, coords] : pres.table) {
        ordered_json entry = ordered_json::array();
        entry.push_back(key.first);
        entry.push_back(key.second);
        ordered_json cs = ordered_json::array();
        for (const auto& [pos, c] : coords.e) {
            cs.push_back(ordered_json::array({pos, scalar_str(c)}));
        }
        entry.push_back(std::move(cs));
        products.push_back(std::move(entry));
    }
    j["products"] = std::move(products);
    return j.dump(2) + "\n";
}

std::string csv_quote(const std::string& field) {
    bool needs = field.find_first_of(",\"\n\r") != std::string::npos;
    if (!needs) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

std::string presentation_csv(const Voa& voa, const Presentation& pres) {
    std::ostringstream os;
    os << "*";
    for (int id : pres.class_ids) os << "," << csv_quote(voa.label(id));
    os << "\r\n";
    for (std::size_t a = 0; a < pres.class_ids.size(); ++a) {
        os << csv_quote(voa.label(pres.class_ids[a]));
        for (std::size_t b = 0; b < pres.class_ids.size(); ++b) {
            auto it = pres.table.find({static_cast<int>(a), static_cast<int>(b)});
            os << ",";
            if (it != pres.table.end()) os << csv_quote(coords_str(voa, pres, it->second));
        }
        os << "\r\n";
    }
    return os.str();
}

std::string report_json(const ReportMeta& meta, const std::vector<CheckResult>& checks) {
    ordered_json j;
    j["schema"] = "vxa-report/v1";
    ordered_json cfg = ordered_json::object();
    for (const auto& [k, v] : meta.config) cfg[k] = v;
    j["config"] = std::move(cfg);
    ordered_json arr = ordered_json::array();
    bool all_pass = true;
    for (const auto& c : checks) {
        ordered_json e;
        e["check"] = c.name;
        e["params"] = c.params;
        e["status"] = c.skipped ? "skipped" : (c.pass ? "pass" : "fail");
        e["cases"] = c.cases;
        if (c.skipped) e["reason"] = c.reason;
        if (!c.pass && !c.skipped) {
            e["witness"] = c.witness;
            all_pass = false;
        }
        arr.push_back(std::move(e));
    }
    j["checks"] = std::move(arr);
    j["all_pass"] = all_pass;
    if (meta.with_timing) j["timing_seconds"] = meta.seconds;
    return j.dump(2) + "\n";
}

}  // namespace vxa
