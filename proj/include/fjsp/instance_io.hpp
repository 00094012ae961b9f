#ifndef FJSP_INSTANCE_IO_HPP
#define FJSP_INSTANCE_IO_HPP

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fjsp/core.hpp"

namespace fjsp {

// Raised for malformed .fjs text and malformed dataset lines. `line` is
// 1-based; `token` is the 1-based token position within the line (0 when the
// whole line is at fault).
struct ParseError : std::runtime_error {
    int line;
    int token;
    ParseError(int line_, int token_, const std::string& what_)
        : std::runtime_error("line " + std::to_string(line_) +
                             (token_ > 0 ? ", token " + std::to_string(token_) : "") + ": " + what_),
          line(line_),
          token(token_) {}
};

// Standard flexible job-shop text format. Header `J M [avg_flexibility]`,
// then exactly one line per job: task count, then per task the number of
// compatible machines followed by that many `machine duration` pairs.
// Machine ids are 1-based in the file and 0-based in memory.
Instance parse_fjs(const std::string& text);

// Inverse of parse_fjs up to whitespace. The header flexibility field is the
// mean compatible-set size, rounded to two decimals.
std::string write_fjs(const Instance& inst);

Instance load_fjs_file(const std::string& path);
void save_fjs_file(const Instance& inst, const std::string& path);

struct DatasetMeta {
    int impacted_machine = -1;
    double factor = 1.0;
    std::string status = "unsolved";
    double solve_seconds = 0.0; // kept at 0 in generated files so datasets stay byte-reproducible
    int instance_index = -1;
    std::string origin = "ground_truth"; // or "branch"

    bool operator==(const DatasetMeta&) const = default;
};

// One supervised sample: a perturbed instance's durations together with the
// labeled assignment and start times. Dense N x M duration matrix with
// nullopt for incompatible pairs; tasks_per_job recovers the job structure.
struct DatasetRecord {
    int num_machines = 0;
    std::vector<int> tasks_per_job;
    std::vector<std::vector<std::optional<Time>>> durations;
    std::vector<int> assignment;
    std::vector<Time> starts;
    Time makespan = 0;
    DatasetMeta meta;

    bool operator==(const DatasetRecord&) const = default;
};

Instance record_instance(const DatasetRecord& rec);
DatasetRecord make_record(const Instance& inst, const Solution& sol, DatasetMeta meta);

// Line-delimited JSON, one record per line. With strict=true every record is
// revalidated on load: compatible assignment, zero feasibility violations and
// a consistent makespan. Failures raise ParseError with the line number.
std::vector<DatasetRecord> read_dataset(std::istream& in, bool strict);
void write_dataset(const std::vector<DatasetRecord>& records, std::ostream& out);

std::vector<DatasetRecord> read_dataset_file(const std::string& path, bool strict);
void write_dataset_file(const std::vector<DatasetRecord>& records, const std::string& path);

} // namespace fjsp

#endif // FJSP_INSTANCE_IO_HPP
