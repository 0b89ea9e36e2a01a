#include "phsub/sweep.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <thread>

#include "phsub/errors.h"
#include "phsub/fisher.h"
#include "phsub/oracle.h"

namespace phsub {

namespace {

struct Cell {
    double value;
    FisherResult diag;
};

struct Context {
    double eta;
    double epsilon;
    CostModel costs;
    OutputMeasurement accepted;

    ProtocolParams protocol(double lambda) const {
        return ProtocolParams(lambda, eta, epsilon);
    }
};

using ColumnFn = std::function<Cell(const Context &, double)>;

Cell fisher_cell(const FisherResult &r) {
    return {r.value, r};
}

Cell closed_cell(double v) {
    FisherResult r;
    r.value = v;
    return {v, r};
}

Cell total_cell(const TotalInformation &t) {
    FisherResult d = t.accepted_fi;
    d.value = t.total;
    d.terms_or_nodes += t.rejected_fi.terms_or_nodes;
    d.est_error = (t.accepted_term / std::max(t.accepted_fi.value, 1e-300)) * t.accepted_fi.est_error +
                  (t.rejected_term / std::max(t.rejected_fi.value, 1e-300)) * t.rejected_fi.est_error;
    return {t.total, d};
}

StateModel family_model(const Context &ctx, Family family, double lambda) {
    switch (family) {
        case Family::Thermal:
            return StateModel::thermal(lambda);
        case Family::Subtracted:
            return StateModel::subtracted(lambda);
        case Family::Added:
            return StateModel::added(lambda);
        case Family::RealisticAccepted:
            return StateModel::realistic_accepted(ctx.protocol(lambda));
        case Family::RealisticRejected:
            return StateModel::realistic_rejected(ctx.protocol(lambda));
    }
    throw UnsupportedFamily("unknown family");
}

const std::map<std::string, ColumnFn> &registry() {
    static const std::map<std::string, ColumnFn> columns = [] {
        std::map<std::string, ColumnFn> m;
        const std::pair<const char *, Family> families[] = {
            {"thermal", Family::Thermal},
            {"sub", Family::Subtracted},
            {"add", Family::Added},
            {"realistic", Family::RealisticAccepted},
            {"rejected", Family::RealisticRejected},
        };
        for (auto [suffix, family] : families) {
            std::string s = suffix;
            std::string qfi_name = s == "thermal" || s == "realistic" || s == "rejected" ? "qfi_" + s : "qfi_ideal_" + s;
            m[qfi_name] = [family](const Context &c, double l) {
                return fisher_cell(measurement_fi(family_model(c, family, l), OutputMeasurement::photon_number()));
            };
            m["fi_hom_" + s] = [family](const Context &c, double l) {
                return fisher_cell(fi_continuous(family_model(c, family, l), ContinuousMeasurement::Homodyne));
            };
            m["fi_het_" + s] = [family](const Context &c, double l) {
                return fisher_cell(fi_continuous(family_model(c, family, l), ContinuousMeasurement::HeterodyneRadial));
            };
            m["fi_onoff_" + s] = [family](const Context &c, double l) {
                return fisher_cell(fi_onoff(family_model(c, family, l), c.epsilon));
            };
        }
        m["ftot_photon_number"] = [](const Context &c, double l) {
            auto pn = OutputMeasurement::photon_number();
            return total_cell(total_information(c.protocol(l), {pn, pn}));
        };
        m["ftot_hom"] = [](const Context &c, double l) {
            auto h = OutputMeasurement::homodyne();
            return total_cell(total_information(c.protocol(l), {h, h}));
        };
        m["ftot_het"] = [](const Context &c, double l) {
            auto h = OutputMeasurement::heterodyne();
            return total_cell(total_information(c.protocol(l), {h, h}));
        };
        m["ftot_onoff"] = [](const Context &c, double l) {
            auto o = OutputMeasurement::onoff(c.epsilon);
            return total_cell(total_information(c.protocol(l), {o, o}));
        };
        m["convexity_lower"] = [](const Context &c, double l) {
            return closed_cell(convexity_bounds(c.protocol(l)).lower);
        };
        m["convexity_upper"] = [](const Context &c, double l) {
            return closed_cell(convexity_bounds(c.protocol(l)).upper);
        };
        m["click_fi"] = [](const Context &c, double l) { return closed_cell(click_fi(c.protocol(l))); };
        m["success_probability"] = [](const Context &c, double l) {
            return closed_cell(success_probability(c.protocol(l)));
        };
        m["rejected_mean"] = [](const Context &c, double l) { return closed_cell(rejected_mean(c.protocol(l))); };
        m["fi_rejected_onoff"] = [](const Context &c, double l) {
            return closed_cell(fi_rejected_onoff(c.protocol(l)));
        };
        m["rate_ps"] = [](const Context &c, double l) {
            ProtocolParams p = c.protocol(l);
            FisherResult acc = measurement_fi(StateModel::realistic_accepted(p), c.accepted);
            double v = rate_postselected_from_fi(p, c.costs, acc.value, false);
            return Cell{v, acc};
        };
        m["rate_ps_compact"] = [](const Context &c, double l) {
            ProtocolParams p = c.protocol(l);
            FisherResult acc = measurement_fi(StateModel::realistic_accepted(p), c.accepted);
            double v = rate_postselected_from_fi(p, c.costs, acc.value, true);
            return Cell{v, acc};
        };
        m["rate_0"] = [](const Context &c, double l) {
            FisherResult q = qfi_closed(StateModel::thermal(l));
            return Cell{rate_direct(l, c.costs, q.value), q};
        };
        return m;
    }();
    return columns;
}

const std::vector<std::string> kOracleColumns = {"p1_mc", "p1_mc_se", "fi_photon_thermal_mc", "fi_photon_thermal_mc_se"};

double parse_number(std::string_view key, std::string_view text) {
    std::string s(text);
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception &) {
        throw InvalidParameter("setting '" + std::string(key) + "' expects a number, got '" + s + "'");
    }
    if (used != s.size() || !std::isfinite(v)) {
        throw InvalidParameter("setting '" + std::string(key) + "' expects a finite number, got '" + s + "'");
    }
    return v;
}

std::uint64_t parse_unsigned(std::string_view key, std::string_view text) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw InvalidParameter("setting '" + std::string(key) + "' expects a non-negative integer, got '" +
                               std::string(text) + "'");
    }
    return v;
}

bool parse_bool(std::string_view key, std::string_view text) {
    if (text == "1" || text == "true" || text == "yes" || text == "on") {
        return true;
    }
    if (text == "0" || text == "false" || text == "no" || text == "off") {
        return false;
    }
    throw InvalidParameter("setting '" + std::string(key) + "' expects a boolean, got '" + std::string(text) + "'");
}

std::string_view trim(std::string_view s) {
    const char *ws = " \t\r\n";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) {
        return {};
    }
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    while (true) {
        auto pos = s.find(sep);
        out.emplace_back(trim(s.substr(0, pos)));
        if (pos == std::string_view::npos) {
            break;
        }
        s.remove_prefix(pos + 1);
    }
    return out;
}

void validate(const SweepSpec &spec) {
    spec.grid.validate();
    ProtocolParams probe(spec.grid.min, spec.eta, spec.epsilon);
    static_cast<void>(probe);
    CostModel costs(spec.c_prep, spec.c_select, spec.c_measure);
    static_cast<void>(costs);
    if (spec.columns.empty()) {
        throw InvalidParameter("no output columns selected");
    }
    for (const auto &c : spec.columns) {
        if (!registry().contains(c)) {
            throw InvalidParameter("unknown column '" + c + "'");
        }
    }
    if (spec.oracle && spec.trials < 2) {
        throw InvalidParameter("oracle cross-check needs at least two trials");
    }
}

}  // namespace

LambdaGrid LambdaGrid::parse(std::string_view text) {
    auto parts = split(text, ':');
    if (parts.size() != 3) {
        throw InvalidParameter("grid must be written min:max:points, got '" + std::string(text) + "'");
    }
    LambdaGrid g;
    g.min = parse_number("grid", parts[0]);
    g.max = parse_number("grid", parts[1]);
    double pts = parse_number("grid", parts[2]);
    if (pts != std::floor(pts) || pts > 1e7) {
        throw InvalidParameter("grid point count must be an integer, got '" + parts[2] + "'");
    }
    g.points = static_cast<int>(pts);
    g.validate();
    return g;
}

void LambdaGrid::validate() const {
    if (!(min > 0)) {
        throw InvalidParameter("grid minimum must be > 0");
    }
    if (!(min < max) || !std::isfinite(max)) {
        throw InvalidParameter("grid minimum must be below the maximum");
    }
    if (points < 2) {
        throw InvalidParameter("grid needs at least two points");
    }
}

std::vector<double> LambdaGrid::values() const {
    validate();
    std::vector<double> out(static_cast<std::size_t>(points));
    double lo = std::log(min);
    double hi = std::log(max);
    for (int i = 0; i < points; ++i) {
        out[static_cast<std::size_t>(i)] = std::exp(lo + (hi - lo) * i / (points - 1));
    }
    out.front() = min;
    out.back() = max;
    return out;
}

const std::vector<std::string> &figure_ids() {
    static const std::vector<std::string> ids = {"fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7"};
    return ids;
}

const std::vector<std::string> &column_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto &[name, fn] : registry()) {
            v.push_back(name);
        }
        return v;
    }();
    return names;
}

SweepSpec figure_spec(std::string_view id) {
    SweepSpec s;
    s.figure_id = std::string(id);
    if (id == "fig1") {
        s.epsilon = 0.99;
        s.columns = {"qfi_thermal", "qfi_ideal_sub", "qfi_realistic"};
    } else if (id == "fig2") {
        s.epsilon = 0.97;
        s.columns = {"fi_hom_thermal", "fi_hom_sub", "fi_hom_add", "fi_hom_realistic", "qfi_thermal"};
    } else if (id == "fig3") {
        s.epsilon = 0.97;
        s.columns = {"fi_het_thermal", "fi_het_sub", "fi_het_add", "fi_het_realistic", "qfi_thermal"};
    } else if (id == "fig4") {
        s.epsilon = 0.97;
        s.columns = {"fi_onoff_thermal",  "fi_onoff_sub", "fi_onoff_add",      "fi_onoff_realistic",
                     "qfi_thermal",       "ftot_photon_number", "convexity_lower"};
    } else if (id == "fig5") {
        s.epsilon = 0.99;
        s.columns = {"ftot_het", "fi_het_thermal"};
    } else if (id == "fig6") {
        s.epsilon = 0.99;
        s.columns = {"ftot_onoff", "fi_onoff_thermal", "fi_het_thermal"};
    } else if (id == "fig7") {
        s.epsilon = 0.99;
        s.columns = {"rate_ps", "rate_0"};
    } else {
        throw InvalidParameter("unknown figure id '" + std::string(id) + "' (expected fig1..fig7)");
    }
    return s;
}

void apply_setting(SweepSpec &spec, std::string_view key, std::string_view value) {
    value = trim(value);
    if (key == "eta") {
        spec.eta = parse_number(key, value);
    } else if (key == "epsilon") {
        spec.epsilon = parse_number(key, value);
    } else if (key == "cp") {
        spec.c_prep = parse_number(key, value);
    } else if (key == "cs") {
        spec.c_select = parse_number(key, value);
    } else if (key == "cm") {
        spec.c_measure = parse_number(key, value);
    } else if (key == "grid") {
        spec.grid = LambdaGrid::parse(value);
    } else if (key == "out") {
        spec.output_path = std::string(value);
    } else if (key == "seed") {
        spec.seed = parse_unsigned(key, value);
    } else if (key == "trials") {
        spec.trials = parse_unsigned(key, value);
    } else if (key == "workers") {
        spec.workers = static_cast<unsigned>(parse_unsigned(key, value));
    } else if (key == "accepted-meas") {
        if (value == "het") {
            spec.accepted_measurement = OutputMeasurement::heterodyne();
        } else if (value == "hom") {
            spec.accepted_measurement = OutputMeasurement::homodyne();
        } else {
            throw InvalidParameter("accepted-meas must be 'het' or 'hom', got '" + std::string(value) + "'");
        }
    } else if (key == "diagnostics") {
        spec.diagnostics = parse_bool(key, value);
    } else if (key == "compact") {
        spec.compact = parse_bool(key, value);
        if (spec.compact && spec.figure_id == "fig7" &&
            std::find(spec.columns.begin(), spec.columns.end(), "rate_ps_compact") == spec.columns.end()) {
            spec.columns.push_back("rate_ps_compact");
        }
    } else if (key == "oracle") {
        spec.oracle = parse_bool(key, value);
    } else if (key == "columns") {
        spec.columns = split(value, ',');
    } else {
        throw InvalidParameter("unknown setting '" + std::string(key) + "'");
    }
}

std::vector<std::pair<std::string, std::string>> parse_config(std::istream &in) {
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view view(line);
        if (auto hash = view.find('#'); hash != std::string_view::npos) {
            view = view.substr(0, hash);
        }
        view = trim(view);
        if (view.empty()) {
            continue;
        }
        auto eq = view.find('=');
        if (eq == std::string_view::npos) {
            throw InvalidParameter("config line " + std::to_string(lineno) + ": expected key=value");
        }
        std::string key(trim(view.substr(0, eq)));
        std::string value(trim(view.substr(eq + 1)));
        if (key.empty()) {
            throw InvalidParameter("config line " + std::to_string(lineno) + ": empty key");
        }
        out.emplace_back(std::move(key), std::move(value));
    }
    return out;
}

Table run_sweep(const SweepSpec &spec) {
    validate(spec);
    const Context ctx{spec.eta, spec.epsilon, CostModel(spec.c_prep, spec.c_select, spec.c_measure),
                      spec.accepted_measurement};
    const std::vector<double> lambdas = spec.grid.values();
    std::vector<const ColumnFn *> fns;
    for (const auto &c : spec.columns) {
        fns.push_back(&registry().at(c));
    }

    const std::size_t n_rows = lambdas.size();
    const std::size_t n_cols = fns.size() + (spec.oracle ? kOracleColumns.size() : 0);
    std::vector<std::vector<double>> rows(n_rows, std::vector<double>(n_cols + 1));
    std::vector<std::vector<FisherResult>> diags(n_rows, std::vector<FisherResult>(fns.size()));
    std::vector<std::exception_ptr> errors(n_rows);

    auto compute_row = [&](std::size_t i) {
        double l = lambdas[i];
        auto &row = rows[i];
        row[0] = l;
        for (std::size_t j = 0; j < fns.size(); ++j) {
            Cell cell = (*fns[j])(ctx, l);
            if (!std::isfinite(cell.value)) {
                throw NonConvergence("non-finite value in column '" + spec.columns[j] + "' at lambda=" +
                                     format_double(l));
            }
            row[j + 1] = cell.value;
            diags[i][j] = cell.diag;
        }
        if (spec.oracle) {
            std::uint64_t row_seed = SplitMix64(spec.seed + i).next();
            SimReport rep = simulate_protocol({ctx.protocol(l), spec.trials, row_seed}, 1);
            EmpiricalFi fi = empirical_fi(StateModel::thermal(l), OutputMeasurement::photon_number(), 1e-3 * l,
                                          spec.trials, row_seed ^ 0x5DEECE66DULL);
            std::size_t base = fns.size() + 1;
            row[base] = rep.empirical_p1;
            row[base + 1] = rep.p1_std_error;
            row[base + 2] = fi.value;
            row[base + 3] = fi.std_error;
        }
    };

    unsigned workers = spec.workers ? spec.workers : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n_rows));
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (std::size_t i = next++; i < n_rows; i = next++) {
            try {
                compute_row(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) {
        pool.emplace_back(work);
    }
    work();
    for (auto &t : pool) {
        t.join();
    }
    for (const auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }

    Table table;
    table.header.push_back("lambda");
    table.header.insert(table.header.end(), spec.columns.begin(), spec.columns.end());
    if (spec.oracle) {
        table.header.insert(table.header.end(), kOracleColumns.begin(), kOracleColumns.end());
    }
    table.rows = std::move(rows);
    for (std::size_t i = 0; i < n_rows; ++i) {
        for (std::size_t j = 0; j < fns.size(); ++j) {
            const FisherResult &d = diags[i][j];
            table.diagnostics.push_back(
                {lambdas[i], spec.columns[j], std::string(method_name(d.method)), d.terms_or_nodes, d.est_error});
        }
    }
    return table;
}

Table run_figure(std::string_view figure_id, const std::vector<std::pair<std::string, std::string>> &overrides) {
    SweepSpec spec = figure_spec(figure_id);
    for (const auto &[k, v] : overrides) {
        apply_setting(spec, k, v);
    }
    return run_sweep(spec);
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) {
        throw std::runtime_error("failed to format number");
    }
    return std::string(buf, ptr);
}

void write_csv(const Table &table, std::ostream &out) {
    for (std::size_t j = 0; j < table.header.size(); ++j) {
        out << (j ? "," : "") << table.header[j];
    }
    out << "\n";
    for (const auto &row : table.rows) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            out << (j ? "," : "") << format_double(row[j]);
        }
        out << "\n";
    }
}

void write_diagnostics(const Table &table, std::ostream &out) {
    out << "lambda,column,method,terms_or_nodes,est_error\n";
    for (const auto &d : table.diagnostics) {
        out << format_double(d.lambda) << "," << d.column << "," << d.method << "," << d.terms_or_nodes << ","
            << format_double(d.est_error) << "\n";
    }
}

}  // namespace phsub
