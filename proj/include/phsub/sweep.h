#ifndef PHSUB_SWEEP_H
#define PHSUB_SWEEP_H

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "phsub/protocol.h"

namespace phsub {

/// Log-spaced λ grid, written "min:max:points" on the command line.
struct LambdaGrid {
    double min = 1e-2;
    double max = 1e2;
    int points = 200;

    static LambdaGrid parse(std::string_view text);
    void validate() const;
    std::vector<double> values() const;
};

struct SweepSpec {
    LambdaGrid grid;
    double eta = 0.95;
    double epsilon = 0.99;
    double c_prep = 1.0;
    double c_select = 0.5;
    double c_measure = 10.0;
    /// Final measurement on the heralded state in the cost-rate columns.
    OutputMeasurement accepted_measurement = OutputMeasurement::heterodyne();
    std::vector<std::string> columns;
    std::optional<std::string> figure_id;
    std::string output_path = "-";
    bool diagnostics = false;
    bool compact = false;
    /// Append Monte Carlo cross-check columns.
    bool oracle = false;
    std::uint64_t trials = 100000;
    std::uint64_t seed = 20211018;
    unsigned workers = 0;
};

struct CellDiagnostic {
    double lambda;
    std::string column;
    std::string method;
    std::int64_t terms_or_nodes;
    double est_error;
};

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    std::vector<CellDiagnostic> diagnostics;
};

const std::vector<std::string> &figure_ids();
const std::vector<std::string> &column_names();

/// Parameters and column set of one of the figures fig1…fig7.
SweepSpec figure_spec(std::string_view figure_id);

/// Applies one key=value setting (config file line or command-line flag).
void apply_setting(SweepSpec &spec, std::string_view key, std::string_view value);

/// Reads a key=value config file; `#` starts a comment.
std::vector<std::pair<std::string, std::string>> parse_config(std::istream &in);

Table run_sweep(const SweepSpec &spec);
/// figure_spec(id) with `overrides` applied in order, then run_sweep.
Table run_figure(std::string_view figure_id, const std::vector<std::pair<std::string, std::string>> &overrides = {});

/// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);

void write_csv(const Table &table, std::ostream &out);
void write_diagnostics(const Table &table, std::ostream &out);

}  // namespace phsub

#endif
