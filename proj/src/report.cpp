#include "attninv/report.hpp"

#include "attninv/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>

namespace attninv {

RunSummary summarize(const std::string& instance, const std::string& solver, const std::string& status,
                     const std::vector<RunRecord>& records, double distance) {
    RunSummary s;
    s.instance = instance;
    s.solver = solver;
    s.status = status;
    s.distance = distance;
    if (!records.empty()) {
        s.iterations = static_cast<long>(records.size()) - 1;
        s.final_loss = records.back().loss;
        s.final_grad_norm = records.back().grad_norm;
        s.wall_ms = records.back().wallclock_ms;
    }
    return s;
}

std::string summary_json(const RunSummary& s) {
    nlohmann::ordered_json j;
    j["instance"] = s.instance;
    j["solver"] = s.solver;
    j["status"] = s.status;
    j["iterations"] = s.iterations;
    std::string out = j.dump();
    out.pop_back();
    out += ",\"final_loss\":" + format_double(s.final_loss) + ",\"final_grad_norm\":" +
           format_double(s.final_grad_norm) + ",\"distance\":" + format_double(s.distance) +
           ",\"wall_ms\":" + format_double(s.wall_ms) + "}\n";
    return out;
}

RunSummary parse_summary(const std::string& text) {
    RunSummary s;
    try {
        const auto j = nlohmann::json::parse(text);
        auto num = [&](const char* k, double dflt) {
            return j.contains(k) && j.at(k).is_number() ? j.at(k).get<double>() : dflt;
        };
        s.instance = j.value("instance", "");
        s.solver = j.value("solver", "");
        s.status = j.value("status", "");
        s.iterations = j.value("iterations", 0L);
        s.final_loss = num("final_loss", 0);
        s.final_grad_norm = num("final_grad_norm", 0);
        s.distance = num("distance", -1);
        s.wall_ms = num("wall_ms", 0);
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("summary: ") + e.what());
    }
    return s;
}

std::string csv_header() { return "instance,solver,status,iterations,final_loss,final_grad_norm,distance,wall_ms\n"; }

std::string csv_row(const RunSummary& s) {
    return s.instance + "," + s.solver + "," + s.status + "," + std::to_string(s.iterations) + "," +
           format_double(s.final_loss) + "," + format_double(s.final_grad_norm) + "," +
           (s.distance < 0 ? std::string() : format_double(s.distance)) + "," + format_double(s.wall_ms) + "\n";
}

std::string csv_table(const std::vector<RunSummary>& rows) {
    std::string out = csv_header();
    for (const auto& r : rows) out += csv_row(r);
    return out;
}

std::string text_table(const std::vector<RunSummary>& rows) {
    int w = 8;
    for (const auto& r : rows) w = std::max(w, static_cast<int>(r.instance.size()));
    w = std::min(w, 900);
    char buf[1024];
    std::snprintf(buf, sizeof buf, "%-*s %-7s %-17s %6s %12s %12s %12s %10s\n", w, "instance", "solver", "status",
                  "iters", "loss", "grad_norm", "distance", "wall_ms");
    std::string out = buf;
    for (const auto& r : rows) {
        char dist[32] = "-";
        if (r.distance >= 0) std::snprintf(dist, sizeof dist, "%.3e", r.distance);
        std::snprintf(buf, sizeof buf, "%-*s %-7s %-17s %6ld %12.3e %12.3e %12s %10.2f\n", w,
                      r.instance.substr(0, 900).c_str(), r.solver.c_str(), r.status.c_str(), r.iterations,
                      r.final_loss, r.final_grad_norm, dist, r.wall_ms);
        out += buf;
    }
    return out;
}

}  // namespace attninv
