#pragma once

// Consolidates JSON summaries into one markdown report (one table per system,
// failures sorted first) plus a merged JSON document.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace micz::lab {

struct ReportInput {
    std::vector<std::string> files;
    std::vector<std::string> unreadable;
};

// Expands simple '*' wildcards against the parent directory.
inline ReportInput expand_globs(const std::vector<std::string>& patterns) {
    namespace fs = std::filesystem;
    ReportInput in;
    for (const auto& pat : patterns) {
        if (pat.find('*') == std::string::npos) {
            in.files.push_back(pat);
            continue;
        }
        const fs::path p(pat);
        const fs::path dir = p.parent_path().empty() ? fs::path(".") : p.parent_path();
        const std::string name = p.filename().string();
        auto matches = [&](const std::string& f) {
            size_t fi = 0, pi = 0, star = std::string::npos, mark = 0;
            while (fi < f.size()) {
                if (pi < name.size() && (name[pi] == f[fi])) { ++fi; ++pi; }
                else if (pi < name.size() && name[pi] == '*') { star = pi++; mark = fi; }
                else if (star != std::string::npos) { pi = star + 1; fi = ++mark; }
                else return false;
            }
            while (pi < name.size() && name[pi] == '*') ++pi;
            return pi == name.size();
        };
        std::vector<std::string> found;
        if (fs::exists(dir))
            for (const auto& e : fs::directory_iterator(dir))
                if (e.is_regular_file() && matches(e.path().filename().string()))
                    found.push_back(e.path().string());
        std::sort(found.begin(), found.end());
        in.files.insert(in.files.end(), found.begin(), found.end());
    }
    return in;
}

struct ReportResult {
    int exit_code = 0;
    std::string markdown;
    nlohmann::ordered_json merged;
};

inline ReportResult consolidate(const std::vector<std::string>& patterns) {
    using json = nlohmann::ordered_json;
    ReportResult res;
    auto in = expand_globs(patterns);
    struct Row {
        std::string id, anchor, statement, kind;
        double value = 0, tolerance = 0;
        bool pass = true;
    };
    std::map<std::string, std::vector<Row>> by_system;
    res.merged["summaries"] = json::array();
    for (const auto& f : in.files) {
        std::ifstream s(f);
        json j;
        try {
            if (!s) throw json::parse_error::create(101, 0, "unreadable", nullptr);
            j = json::parse(s);
        } catch (const json::exception&) {
            in.unreadable.push_back(f);
            continue;
        }
        try {
            res.merged["summaries"].push_back({{"file", f}, {"task", j.value("task", "?")}});
            for (const auto& cl : j.at("claims")) {
                Row r;
                r.id = cl.value("id", "?");
                r.anchor = cl.value("anchor", "?");
                r.statement = cl.value("statement", "");
                r.kind = cl.value("kind", "residual");
                r.value = cl.value("value", 0.0);
                r.tolerance = cl.value("tolerance", 0.0);
                r.pass = cl.value("pass", false);
                const std::string sys = r.id.substr(0, r.id.find('/'));
                by_system[sys].push_back(r);
            }
        } catch (const json::exception&) {
            in.unreadable.push_back(f);
        }
    }

    std::ostringstream md;
    md << "# Verification report\n";
    bool any_fail = false;
    json jsys = json::object();
    for (auto& [sys, rows] : by_system) {
        std::stable_sort(rows.begin(), rows.end(),
                         [](const Row& a, const Row& b) { return a.pass < b.pass; });
        md << "\n## " << sys << "\n\n";
        md << "| claim | tag | value | tolerance | verdict |\n";
        md << "|---|---|---|---|---|\n";
        json arr = json::array();
        for (const auto& r : rows) {
            md << "| " << r.id << " | " << r.anchor << " | " << r.value << " | "
               << (r.kind == "residual" ? "<= " : r.kind == "at-least" ? ">= " : "in ")
               << r.tolerance << " | " << (r.pass ? "pass" : "FAIL") << " |\n";
            any_fail = any_fail || !r.pass;
            arr.push_back({{"id", r.id},
                           {"anchor", r.anchor},
                           {"value", r.value},
                           {"tolerance", r.tolerance},
                           {"kind", r.kind},
                           {"pass", r.pass}});
        }
        jsys[sys] = arr;
    }
    res.merged["claims_by_system"] = jsys;
    if (!in.unreadable.empty()) {
        md << "\n## unreadable inputs\n\n";
        for (const auto& f : in.unreadable) md << "- " << f << "\n";
        res.merged["unreadable"] = in.unreadable;
    }
    res.merged["overall_pass"] = !any_fail && in.unreadable.empty() && !in.files.empty();
    res.markdown = md.str();
    res.exit_code = (any_fail || !in.unreadable.empty() || in.files.empty()) ? 1 : 0;
    return res;
}

}  // namespace micz::lab
