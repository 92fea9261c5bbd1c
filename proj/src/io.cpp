#include "npcure/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "npcure/errors.hpp"

namespace npcure {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

double parse_real(const std::string& field, std::size_t row, const std::string& column) {
    const std::string t = trim(field);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size())
        throw ParseError("row " + std::to_string(row) + ": non-numeric " + column + " '" +
                         field + "'");
    return v;
}

std::vector<double> parse_grid_spec(const std::string& spec, bool log_scale) {
    // "lo:hi:count"
    double lo = 0.0, hi = 0.0;
    unsigned long count = 0;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%lu", &lo, &hi, &count) != 3)
        throw ParseError("grid spec must be lo:hi:count, got '" + spec + "'");
    if (count < 2 || !(hi > lo)) throw ParseError("invalid grid spec '" + spec + "'");
    if (log_scale) return log_spaced_grid(lo, hi, count);
    std::vector<double> grid(count);
    for (std::size_t i = 0; i < count; ++i)
        grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    return grid;
}

}  // namespace

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> Dataset::group_labels() const {
    std::set<std::string> seen;
    std::vector<std::string> labels;
    for (const DatasetRow& row : rows)
        if (seen.insert(row.group).second) labels.push_back(row.group);
    std::sort(labels.begin(), labels.end());
    return labels;
}

SurvivalSample Dataset::sample_for(const std::string& group) const {
    std::vector<Observation> obs;
    for (const DatasetRow& row : rows)
        if (group.empty() || row.group == group)
            obs.push_back({row.covariate, row.time, row.status});
    if (obs.size() < 2)
        throw ParseError(group.empty() ? "dataset needs at least 2 rows"
                                       : "group '" + group + "' needs at least 2 rows");
    return SurvivalSample(std::move(obs));
}

Dataset read_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open dataset file '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty dataset file '" + path + "'");
    const auto header = split_csv_line(line);
    long time_col = -1, status_col = -1, covariate_col = -1, group_col = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        const std::string name = trim(header[i]);
        if (name == "time") time_col = static_cast<long>(i);
        else if (name == "status") status_col = static_cast<long>(i);
        else if (name == "covariate") covariate_col = static_cast<long>(i);
        else if (name == "group") group_col = static_cast<long>(i);
        else throw ParseError("unknown column '" + name + "'");
    }
    if (time_col < 0 || status_col < 0 || covariate_col < 0)
        throw ParseError("dataset requires columns time, status, covariate");

    Dataset out;
    out.has_group = group_col >= 0;
    std::size_t row_no = 1;
    while (std::getline(in, line)) {
        ++row_no;
        if (trim(line).empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw ParseError("row " + std::to_string(row_no) + ": expected " +
                             std::to_string(header.size()) + " fields");
        DatasetRow row;
        row.time = parse_real(fields[static_cast<std::size_t>(time_col)], row_no, "time");
        if (row.time < 0.0)
            throw ParseError("row " + std::to_string(row_no) + ": negative time");
        const double status =
            parse_real(fields[static_cast<std::size_t>(status_col)], row_no, "status");
        if (status != 0.0 && status != 1.0)
            throw ParseError("row " + std::to_string(row_no) + ": status must be 0 or 1");
        row.status = static_cast<int>(status);
        row.covariate =
            parse_real(fields[static_cast<std::size_t>(covariate_col)], row_no, "covariate");
        if (out.has_group) row.group = trim(fields[static_cast<std::size_t>(group_col)]);
        out.rows.push_back(row);
    }
    if (out.rows.size() < 2) throw ParseError("dataset requires at least 2 data rows");
    return out;
}

void write_dataset(const std::string& path, const SurvivalSample& sample) {
    std::ofstream outfile(path);
    if (!outfile) throw Error("cannot write '" + path + "'");
    outfile << "covariate,time,status\n";
    for (const Observation& o : sample.observations())
        outfile << format_real(o.x) << ',' << format_real(o.t) << ',' << o.status << '\n';
}

BenchmarkPlanFile BenchmarkPlanFile::parse(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open plan file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("plan file '" + path + "': " + e.what());
    }
    if (!j.is_object()) throw ParseError("plan file must hold a flat key-value object");

    static const std::set<std::string> known = {
        "model",  "sizes",   "replications",     "seed",
        "x_grid", "h_grid",  "b_grid",           "time_points",
        "bootstrap", "mise", "stage1_resamples", "stage2_resamples",
        "stage1_grid", "stage2_grid", "range_lo", "range_hi", "pilot"};
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!known.count(key)) throw ParseError("unknown plan key '" + key + "'");
    }

    BenchmarkPlanFile file;
    const int model = j.value("model", 1);
    if (model != 1 && model != 2) throw ParseError("model must be 1 or 2");
    file.plan = ExperimentPlan::defaults(model == 1 ? ModelId::Model1 : ModelId::Model2);
    if (j.contains("sizes")) {
        file.plan.sample_sizes.clear();
        if (j["sizes"].is_array()) {
            for (const auto& e : j["sizes"]) {
                const long v = e.is_number_integer() ? e.get<long>() : -1;
                if (v < 1) throw ParseError("invalid sample size in 'sizes'");
                file.plan.sample_sizes.push_back(static_cast<std::size_t>(v));
            }
        } else {
            std::stringstream ss(j["sizes"].get<std::string>());
            std::string tok;
            while (std::getline(ss, tok, ',')) {
                const long v = std::strtol(tok.c_str(), nullptr, 10);
                if (v < 1) throw ParseError("invalid sample size '" + tok + "'");
                file.plan.sample_sizes.push_back(static_cast<std::size_t>(v));
            }
        }
        if (file.plan.sample_sizes.empty()) throw ParseError("sizes must not be empty");
    }
    if (j.contains("replications")) file.plan.replications = j["replications"].get<std::size_t>();
    if (j.contains("seed")) file.plan.master_seed = j["seed"].get<std::uint64_t>();
    if (j.contains("x_grid")) file.plan.x_grid = parse_grid_spec(j["x_grid"].get<std::string>(), false);
    if (j.contains("h_grid")) file.plan.h_grid = parse_grid_spec(j["h_grid"].get<std::string>(), true);
    if (j.contains("b_grid")) file.plan.b_grid = parse_grid_spec(j["b_grid"].get<std::string>(), true);
    if (j.contains("time_points")) file.plan.time_grid_points = j["time_points"].get<std::size_t>();
    file.run_bootstrap = j.value("bootstrap", true);
    file.run_mise = j.value("mise", true);
    if (j.contains("stage1_resamples")) file.config.stage1_resamples = j["stage1_resamples"].get<std::size_t>();
    if (j.contains("stage2_resamples")) file.config.stage2_resamples = j["stage2_resamples"].get<std::size_t>();
    if (j.contains("stage1_grid")) file.config.stage1_grid_size = j["stage1_grid"].get<std::size_t>();
    if (j.contains("stage2_grid")) file.config.stage2_grid_size = j["stage2_grid"].get<std::size_t>();
    if (j.contains("range_lo")) file.config.range_lo = j["range_lo"].get<double>();
    if (j.contains("range_hi")) file.config.range_hi = j["range_hi"].get<double>();
    if (j.contains("pilot")) {
        const std::string pilot = j["pilot"].get<std::string>();
        if (pilot == "global") file.config.pilot.kind = PilotKind::GlobalUniform;
        else if (pilot == "local") file.config.pilot.kind = PilotKind::LocalKNN;
        else throw ParseError("pilot must be 'global' or 'local'");
    }
    file.config.master_seed = file.plan.master_seed;
    file.plan.validate();
    return file;
}

std::map<std::string, std::string> BenchmarkPlanFile::echo() const {
    std::map<std::string, std::string> kv;
    kv["model"] = plan.model == ModelId::Model1 ? "1" : "2";
    std::string sizes;
    for (std::size_t n : plan.sample_sizes) {
        if (!sizes.empty()) sizes += ',';
        sizes += std::to_string(n);
    }
    kv["sizes"] = sizes;
    kv["replications"] = std::to_string(plan.replications);
    kv["seed"] = std::to_string(plan.master_seed);
    kv["x_grid_points"] = std::to_string(plan.x_grid.size());
    kv["h_grid_points"] = std::to_string(plan.h_grid.size());
    kv["b_grid_points"] = std::to_string(plan.b_grid.size());
    kv["time_points"] = std::to_string(plan.time_grid_points);
    kv["bootstrap"] = run_bootstrap ? "true" : "false";
    kv["mise"] = run_mise ? "true" : "false";
    kv["stage1_resamples"] = std::to_string(config.stage1_resamples);
    kv["stage2_resamples"] = std::to_string(config.stage2_resamples);
    kv["stage1_grid"] = std::to_string(config.stage1_grid_size);
    kv["stage2_grid"] = std::to_string(config.stage2_grid_size);
    kv["range_lo"] = format_real(config.range_lo);
    kv["range_hi"] = format_real(config.range_hi);
    kv["pilot"] = config.pilot.kind == PilotKind::GlobalUniform ? "global" : "local";
    return kv;
}

void write_incidence_mse_csv(const std::string& path,
                             const std::vector<IncidenceMseReport>& reports) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    out << "x,h,mse,failures,n,m\n";
    for (const IncidenceMseReport& report : reports)
        for (std::size_t ix = 0; ix < report.xs.size(); ++ix)
            for (std::size_t ih = 0; ih < report.hs.size(); ++ih)
                out << format_real(report.xs[ix]) << ',' << format_real(report.hs[ih]) << ','
                    << format_real(report.at(ix, ih)) << ','
                    << report.failures[ix * report.hs.size() + ih] << ',' << report.n << ','
                    << report.replications << '\n';
}

void write_latency_mise_csv(const std::string& path,
                            const std::vector<LatencyMiseReport>& reports) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    out << "x,b,mise,failures,n,m\n";
    for (const LatencyMiseReport& report : reports)
        for (std::size_t ix = 0; ix < report.xs.size(); ++ix)
            for (std::size_t ib = 0; ib < report.bs.size(); ++ib)
                out << format_real(report.xs[ix]) << ',' << format_real(report.bs[ib]) << ','
                    << format_real(report.at(ix, ib)) << ','
                    << report.failures[ix * report.bs.size() + ib] << ',' << report.n << ','
                    << report.replications << '\n';
}

void write_bootstrap_csv(const std::string& path,
                         const std::vector<BootstrapStudyReport>& reports) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    out << "x,n,q25,median,q75,mse_q25,mse_median,mse_q75,h_oracle,mse_oracle,failures\n";
    for (const BootstrapStudyReport& report : reports)
        for (const BootstrapStudyRow& row : report.rows)
            out << format_real(row.x) << ',' << row.n << ',' << format_real(row.q25) << ','
                << format_real(row.median) << ',' << format_real(row.q75) << ','
                << format_real(row.mse_q25) << ',' << format_real(row.mse_median) << ','
                << format_real(row.mse_q75) << ',' << format_real(row.h_oracle) << ','
                << format_real(row.mse_oracle) << ',' << row.failures << '\n';
}

}  // namespace npcure
