#include "fjsp/instance_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fjsp {

namespace {

using nlohmann::json;

struct LineTokens {
    int line_no;
    std::vector<std::string> tokens;
    std::size_t pos = 0;

    bool done() const { return pos >= tokens.size(); }

    long long next_int(const char* what) {
        if (done()) throw ParseError(line_no, static_cast<int>(tokens.size()) + 1, std::string("missing ") + what);
        const std::string& tok = tokens[pos];
        std::size_t used = 0;
        long long value = 0;
        try {
            value = std::stoll(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != tok.size())
            throw ParseError(line_no, static_cast<int>(pos) + 1, std::string("expected integer ") + what + ", got '" + tok + "'");
        ++pos;
        return value;
    }

    double next_number(const char* what) {
        if (done()) throw ParseError(line_no, static_cast<int>(tokens.size()) + 1, std::string("missing ") + what);
        const std::string& tok = tokens[pos];
        std::size_t used = 0;
        double value = 0;
        try {
            value = std::stod(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != tok.size())
            throw ParseError(line_no, static_cast<int>(pos) + 1, std::string("expected number ") + what + ", got '" + tok + "'");
        ++pos;
        return value;
    }
};

std::vector<LineTokens> tokenize_lines(const std::string& text) {
    std::vector<LineTokens> lines;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        LineTokens lt{line_no, {}, 0};
        std::istringstream ls(raw);
        std::string tok;
        while (ls >> tok) lt.tokens.push_back(tok);
        if (!lt.tokens.empty()) lines.push_back(std::move(lt));
    }
    return lines;
}

} // namespace

Instance parse_fjs(const std::string& text) {
    auto lines = tokenize_lines(text);
    if (lines.empty()) throw ParseError(1, 0, "empty instance file");

    LineTokens& header = lines[0];
    long long num_jobs = header.next_int("job count");
    long long num_machines = header.next_int("machine count");
    if (!header.done()) header.next_number("flexibility"); // optional, ignored
    if (!header.done()) throw ParseError(header.line_no, static_cast<int>(header.pos) + 1, "trailing tokens in header");
    if (num_jobs < 1 || num_jobs > 10000) throw ParseError(header.line_no, 1, "job count out of range");
    if (num_machines < 1 || num_machines > 10000) throw ParseError(header.line_no, 2, "machine count out of range");

    if (static_cast<long long>(lines.size()) - 1 < num_jobs)
        throw ParseError(lines.back().line_no, 0,
                         "expected " + std::to_string(num_jobs) + " job lines, found " + std::to_string(lines.size() - 1));
    if (static_cast<long long>(lines.size()) - 1 > num_jobs)
        throw ParseError(lines[static_cast<std::size_t>(num_jobs) + 1].line_no, 0, "unexpected extra line after last job");

    std::vector<std::vector<std::vector<MachineOption>>> jobs;
    jobs.reserve(static_cast<std::size_t>(num_jobs));
    for (long long j = 0; j < num_jobs; ++j) {
        LineTokens& line = lines[static_cast<std::size_t>(j) + 1];
        long long task_count = line.next_int("task count");
        if (task_count < 1 || task_count > 100000) throw ParseError(line.line_no, 1, "task count out of range");
        std::vector<std::vector<MachineOption>> tasks;
        tasks.reserve(static_cast<std::size_t>(task_count));
        for (long long t = 0; t < task_count; ++t) {
            long long k = line.next_int("compatible machine count");
            if (k < 1 || k > num_machines)
                throw ParseError(line.line_no, static_cast<int>(line.pos), "compatible machine count out of range");
            std::vector<MachineOption> opts;
            opts.reserve(static_cast<std::size_t>(k));
            for (long long i = 0; i < k; ++i) {
                long long machine = line.next_int("machine id");
                if (machine < 1 || machine > num_machines)
                    throw ParseError(line.line_no, static_cast<int>(line.pos), "machine id out of range");
                long long duration = line.next_int("duration");
                opts.push_back({static_cast<int>(machine - 1), static_cast<Time>(duration)});
            }
            tasks.push_back(std::move(opts));
        }
        if (!line.done())
            throw ParseError(line.line_no, static_cast<int>(line.pos) + 1, "trailing tokens after last task");
        jobs.push_back(std::move(tasks));
    }

    Instance inst(static_cast<int>(num_machines), std::move(jobs));
    auto errors = validate_instance(inst);
    if (!errors.empty()) throw ParseError(lines[0].line_no, 0, "invalid instance: " + errors.front());
    return inst;
}

std::string write_fjs(const Instance& inst) {
    double option_sum = 0;
    for (int id = 0; id < inst.total_tasks(); ++id) option_sum += static_cast<double>(inst.options_flat(id).size());
    char flex[32];
    std::snprintf(flex, sizeof(flex), "%.2f", option_sum / inst.total_tasks());

    std::ostringstream out;
    out << inst.num_jobs() << ' ' << inst.num_machines() << ' ' << flex << '\n';
    for (int j = 0; j < inst.num_jobs(); ++j) {
        out << inst.num_tasks(j);
        for (int t = 0; t < inst.num_tasks(j); ++t) {
            const auto& opts = inst.options(j, t);
            out << ' ' << opts.size();
            for (const auto& opt : opts) out << ' ' << opt.machine + 1 << ' ' << opt.duration;
        }
        out << '\n';
    }
    return out.str();
}

Instance load_fjs_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open instance file: " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return parse_fjs(text.str());
}

void save_fjs_file(const Instance& inst, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write instance file: " + path);
    out << write_fjs(inst);
}

Instance record_instance(const DatasetRecord& rec) {
    std::vector<std::vector<std::vector<MachineOption>>> jobs;
    int id = 0;
    for (int tasks : rec.tasks_per_job) {
        std::vector<std::vector<MachineOption>> job;
        for (int t = 0; t < tasks; ++t, ++id) {
            std::vector<MachineOption> opts;
            if (id < static_cast<int>(rec.durations.size()))
                for (int m = 0; m < static_cast<int>(rec.durations[id].size()); ++m)
                    if (rec.durations[id][m]) opts.push_back({m, *rec.durations[id][m]});
            job.push_back(std::move(opts));
        }
        jobs.push_back(std::move(job));
    }
    return Instance(rec.num_machines, std::move(jobs));
}

DatasetRecord make_record(const Instance& inst, const Solution& sol, DatasetMeta meta) {
    DatasetRecord rec;
    rec.num_machines = inst.num_machines();
    rec.tasks_per_job = inst.tasks_per_job();
    rec.durations.assign(static_cast<std::size_t>(inst.total_tasks()),
                         std::vector<std::optional<Time>>(static_cast<std::size_t>(inst.num_machines())));
    for (int id = 0; id < inst.total_tasks(); ++id)
        for (const auto& opt : inst.options_flat(id)) rec.durations[id][opt.machine] = opt.duration;
    rec.assignment = sol.assignment.machine_of;
    rec.starts = sol.schedule.start;
    rec.makespan = sol.schedule.makespan;
    rec.meta = std::move(meta);
    return rec;
}

namespace {

json record_to_json(const DatasetRecord& rec) {
    json durations = json::array();
    for (const auto& row : rec.durations) {
        json jrow = json::array();
        for (const auto& cell : row) {
            if (cell)
                jrow.push_back(*cell);
            else
                jrow.push_back(nullptr);
        }
        durations.push_back(std::move(jrow));
    }
    return json{{"num_machines", rec.num_machines},
                {"tasks_per_job", rec.tasks_per_job},
                {"durations", std::move(durations)},
                {"assignment", rec.assignment},
                {"starts", rec.starts},
                {"makespan", rec.makespan},
                {"meta",
                 {{"impacted_machine", rec.meta.impacted_machine},
                  {"factor", rec.meta.factor},
                  {"status", rec.meta.status},
                  {"solve_seconds", rec.meta.solve_seconds},
                  {"instance_index", rec.meta.instance_index},
                  {"origin", rec.meta.origin}}}};
}

DatasetRecord record_from_json(const json& j, int line_no) {
    try {
        DatasetRecord rec;
        rec.num_machines = j.at("num_machines").get<int>();
        rec.tasks_per_job = j.at("tasks_per_job").get<std::vector<int>>();
        for (const auto& jrow : j.at("durations")) {
            std::vector<std::optional<Time>> row;
            for (const auto& cell : jrow) {
                if (cell.is_null())
                    row.push_back(std::nullopt);
                else
                    row.push_back(cell.get<Time>());
            }
            rec.durations.push_back(std::move(row));
        }
        rec.assignment = j.at("assignment").get<std::vector<int>>();
        rec.starts = j.at("starts").get<std::vector<Time>>();
        rec.makespan = j.at("makespan").get<Time>();
        const json& meta = j.at("meta");
        rec.meta.impacted_machine = meta.at("impacted_machine").get<int>();
        rec.meta.factor = meta.at("factor").get<double>();
        rec.meta.status = meta.at("status").get<std::string>();
        rec.meta.solve_seconds = meta.at("solve_seconds").get<double>();
        rec.meta.instance_index = meta.at("instance_index").get<int>();
        rec.meta.origin = meta.at("origin").get<std::string>();
        return rec;
    } catch (const json::exception& e) {
        throw ParseError(line_no, 0, std::string("dataset record schema mismatch: ") + e.what());
    }
}

void validate_record(const DatasetRecord& rec, int line_no) {
    Instance inst = record_instance(rec);
    auto errors = validate_instance(inst);
    if (!errors.empty()) throw ParseError(line_no, 0, "record instance invalid: " + errors.front());
    if (static_cast<int>(rec.durations.size()) != inst.total_tasks())
        throw ParseError(line_no, 0, "duration matrix row count does not match task count");
    Assignment a{rec.assignment};
    if (auto err = check_assignment(inst, a)) throw ParseError(line_no, 0, *err);
    if (static_cast<int>(rec.starts.size()) != inst.total_tasks())
        throw ParseError(line_no, 0, "start vector size does not match task count");
    for (Time s : rec.starts)
        if (s < 0) throw ParseError(line_no, 0, "negative start time");
    Schedule sched{rec.starts, rec.makespan};
    auto report = check_feasibility(inst, a, sched);
    if (!report.feasible())
        throw ParseError(line_no, 0, "record schedule infeasible, violation total " + std::to_string(report.total));
    if (makespan(inst, a, sched) != rec.makespan)
        throw ParseError(line_no, 0, "record makespan inconsistent with starts");
}

} // namespace

std::vector<DatasetRecord> read_dataset(std::istream& in, bool strict) {
    std::vector<DatasetRecord> records;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded()) throw ParseError(line_no, 0, "invalid JSON record");
        DatasetRecord rec = record_from_json(j, line_no);
        if (strict) validate_record(rec, line_no);
        records.push_back(std::move(rec));
    }
    return records;
}

void write_dataset(const std::vector<DatasetRecord>& records, std::ostream& out) {
    for (const auto& rec : records) out << record_to_json(rec).dump() << '\n';
}

std::vector<DatasetRecord> read_dataset_file(const std::string& path, bool strict) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open dataset file: " + path);
    return read_dataset(in, strict);
}

void write_dataset_file(const std::vector<DatasetRecord>& records, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write dataset file: " + path);
    write_dataset(records, out);
}

} // namespace fjsp
