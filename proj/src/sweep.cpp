#include "metrosim/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "metrosim/analytic.hpp"
#include "metrosim/parallel.hpp"

namespace metrosim::experiment {

namespace {

using json = nlohmann::json;

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

struct Column {
    std::string name;
    std::function<double(const ResultRecord&)> get;
    std::function<void(ResultRecord&, double)> set;
};

const std::vector<Column>& column_table() {
    static const std::vector<Column> table = {
        {"N", [](const auto& r) { return static_cast<double>(r.n); },
         [](auto& r, double v) { r.n = static_cast<int>(v); }},
        {"theta", [](const auto& r) { return r.theta; }, [](auto& r, double v) { r.theta = v; }},
        {"R_a", [](const auto& r) { return r.rate_a; }, [](auto& r, double v) { r.rate_a = v; }},
        {"R_b", [](const auto& r) { return r.rate_b; }, [](auto& r, double v) { r.rate_b = v; }},
        {"abs_R", [](const auto& r) { return r.abs_r; }, [](auto& r, double v) { r.abs_r = v; }},
        {"arg_R", [](const auto& r) { return r.arg_r; }, [](auto& r, double v) { r.arg_r = v; }},
        {"P_down", [](const auto& r) { return r.p_down; }, [](auto& r, double v) { r.p_down = v; }},
        {"delta_theta_paper", [](const auto& r) { return r.delta_theta_paper; },
         [](auto& r, double v) { r.delta_theta_paper = v; }},
        {"delta_theta_exact", [](const auto& r) { return r.delta_theta_exact; },
         [](auto& r, double v) { r.delta_theta_exact = v; }},
        {"inv_delta_theta", [](const auto& r) { return r.inv_delta_theta; },
         [](auto& r, double v) { r.inv_delta_theta = v; }},
        {"sql", [](const auto& r) { return r.sql; }, [](auto& r, double v) { r.sql = v; }},
        {"hl", [](const auto& r) { return r.hl; }, [](auto& r, double v) { r.hl = v; }},
    };
    return table;
}

const Column* find_column(std::string_view name) {
    for (const auto& c : column_table())
        if (c.name == name) return &c;
    return nullptr;
}

[[noreturn]] void field_error(const std::string& field, const std::string& message) {
    throw SpecError("field '" + field + "': " + message);
}

double number_field(const json& value, const std::string& field) {
    if (!value.is_number()) field_error(field, "expected a number");
    return value.get<double>();
}

template <typename T>
std::vector<T> list_field(const json& doc, const std::string& field) {
    if (!doc.contains(field)) field_error(field, "missing");
    const auto& value = doc.at(field);
    if (!value.is_array()) field_error(field, "expected an array");
    std::vector<T> out;
    for (std::size_t i = 0; i < value.size(); ++i) {
        const auto& item = value[i];
        const auto where = field + "[" + std::to_string(i) + "]";
        if constexpr (std::is_same_v<T, int>) {
            if (!item.is_number_integer()) field_error(where, "expected an integer");
            out.push_back(item.get<int>());
        } else if constexpr (std::is_same_v<T, double>) {
            out.push_back(number_field(item, where));
        } else {
            if (!item.is_string()) field_error(where, "expected a string");
            out.push_back(item.get<std::string>());
        }
    }
    return out;
}

}  // namespace

std::vector<double> ThetaGrid::values() const {
    std::vector<double> out;
    if (steps <= 0) return out;
    if (steps == 1) return {start};
    out.reserve(static_cast<std::size_t>(steps));
    for (int k = 0; k < steps; ++k) {
        out.push_back(start + (stop - start) * static_cast<double>(k) / (steps - 1));
    }
    out.back() = stop;
    return out;
}

void SweepSpec::validate() const {
    if (n.empty()) field_error("N", "grid is empty");
    for (std::size_t i = 0; i < n.size(); ++i) {
        if (n[i] < 1) field_error("N[" + std::to_string(i) + "]", "must be >= 1");
    }
    if (!std::isfinite(theta.start)) field_error("theta.start", "must be finite");
    if (!std::isfinite(theta.stop)) field_error("theta.stop", "must be finite");
    if (theta.steps < 1) field_error("theta.steps", "theta grid is empty");
    if (theta.start != theta.stop && theta.steps < 2) {
        field_error("theta.steps", "must be >= 2 when start != stop");
    }
    const auto check_rates = [](const std::vector<double>& rates, const std::string& field) {
        if (rates.empty()) field_error(field, "grid is empty");
        for (std::size_t i = 0; i < rates.size(); ++i) {
            if (!(rates[i] >= 0.0 && rates[i] <= 1.0)) {
                field_error(field + "[" + std::to_string(i) + "]", "loss rate must lie in [0, 1]");
            }
        }
    };
    check_rates(loss_a, "loss_a");
    check_rates(loss_b, "loss_b");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < outputs.size(); ++i) {
        const auto where = "outputs[" + std::to_string(i) + "]";
        if (!find_column(outputs[i])) field_error(where, "unknown column '" + outputs[i] + "'");
        if (!seen.insert(outputs[i]).second) field_error(where, "duplicate column");
    }
}

std::vector<std::string> SweepSpec::columns() const {
    return outputs.empty() ? all_columns() : outputs;
}

SweepSpec parse_sweep_spec(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw SpecError(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw SpecError("sweep config must be a JSON object");
    static const std::set<std::string> known = {"N", "theta", "loss_a", "loss_b", "outputs"};
    for (const auto& [key, value] : doc.items()) {
        if (!known.contains(key)) field_error(key, "unknown field");
    }

    SweepSpec spec;
    spec.n = list_field<int>(doc, "N");
    if (!doc.contains("theta")) field_error("theta", "missing");
    const auto& theta = doc.at("theta");
    if (!theta.is_object()) field_error("theta", "expected {start, stop, steps}");
    for (const char* key : {"start", "stop", "steps"}) {
        if (!theta.contains(key)) field_error(std::string("theta.") + key, "missing");
    }
    spec.theta.start = number_field(theta.at("start"), "theta.start");
    spec.theta.stop = number_field(theta.at("stop"), "theta.stop");
    if (!theta.at("steps").is_number_integer()) field_error("theta.steps", "expected an integer");
    spec.theta.steps = theta.at("steps").get<int>();
    spec.loss_a = list_field<double>(doc, "loss_a");
    spec.loss_b = list_field<double>(doc, "loss_b");
    if (doc.contains("outputs")) spec.outputs = list_field<std::string>(doc, "outputs");
    spec.validate();
    return spec;
}

SweepSpec load_sweep_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw SpecError("cannot open config file " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_sweep_spec(buffer.str());
    } catch (const SpecError& e) {
        throw SpecError(path.string() + ": " + e.what());
    }
}

const std::vector<std::string>& all_columns() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& c : column_table()) out.push_back(c.name);
        return out;
    }();
    return names;
}

ResultRecord evaluate_point(int n, double theta, const LossConfig& loss) {
    ResultRecord r;
    r.n = n;
    r.theta = theta;
    r.rate_a = loss.rate_a;
    r.rate_b = loss.rate_b;
    const auto coherence = analytic::coherence_R(n, theta, loss);
    r.abs_r = std::abs(coherence);
    r.arg_r = std::arg(coherence);
    r.p_down = analytic::lossy_population(n, theta, loss);
    const auto guarded = [&](analytic::SensitivityMethod method) {
        try {
            return analytic::delta_theta(n, theta, loss, method);
        } catch (const analytic::VanishingDerivative&) {
            return nan;
        }
    };
    r.delta_theta_paper = guarded(analytic::SensitivityMethod::paper_approx);
    r.delta_theta_exact = guarded(analytic::SensitivityMethod::exact);
    r.inv_delta_theta = 1.0 / r.delta_theta_paper;
    r.sql = analytic::sql(n);
    r.hl = analytic::hl(n);
    return r;
}

std::vector<ResultRecord> run_sweep(const SweepSpec& spec, unsigned threads) {
    spec.validate();
    struct Point {
        int n;
        double theta;
        LossConfig loss;
    };
    std::vector<Point> points;
    const auto thetas = spec.theta.values();
    for (const int n : spec.n)
        for (const double ra : spec.loss_a)
            for (const double rb : spec.loss_b)
                for (const double theta : thetas) points.push_back({n, theta, {ra, rb}});

    std::vector<ResultRecord> records(points.size());
    parallel_for(points.size(), threads, [&](std::size_t i) {
        records[i] = evaluate_point(points[i].n, points[i].theta, points[i].loss);
    });
    std::stable_sort(records.begin(), records.end(), [](const auto& x, const auto& y) {
        return std::tie(x.n, x.rate_a, x.rate_b, x.theta) <
               std::tie(y.n, y.rate_a, y.rate_b, y.theta);
    });
    return records;
}

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    char buf[64];
    const auto [ptr, ec] =
        std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
    return std::string(buf, ptr);
}

void write_csv(std::ostream& out, std::span<const ResultRecord> records,
               std::span<const std::string> columns, std::span<const std::string> comments) {
    std::vector<const Column*> selected;
    for (const auto& name : columns) {
        const auto* column = find_column(name);
        if (!column) throw std::invalid_argument("unknown CSV column '" + name + "'");
        selected.push_back(column);
    }
    for (const auto& line : comments) out << "# " << line << '\n';
    for (std::size_t i = 0; i < selected.size(); ++i) {
        out << (i ? "," : "") << selected[i]->name;
    }
    out << '\n';
    for (const auto& record : records) {
        for (std::size_t i = 0; i < selected.size(); ++i) {
            const double value = selected[i]->get(record);
            out << (i ? "," : "")
                << (selected[i]->name == "N" ? std::to_string(record.n) : format_number(value));
        }
        out << '\n';
    }
}

std::vector<ResultRecord> read_csv(std::istream& in) {
    std::string line;
    std::vector<const Column*> header;
    std::vector<ResultRecord> records;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty() || line.front() == '#') continue;
        std::vector<std::string> fields;
        std::string field;
        std::istringstream row(line);
        while (std::getline(row, field, ',')) fields.push_back(field);
        if (header.empty()) {
            for (const auto& name : fields) {
                const auto* column = find_column(name);
                if (!column) {
                    throw std::runtime_error("line " + std::to_string(line_number) +
                                             ": unknown column '" + name + "'");
                }
                header.push_back(column);
            }
            continue;
        }
        if (fields.size() != header.size()) {
            throw std::runtime_error("line " + std::to_string(line_number) + ": expected " +
                                     std::to_string(header.size()) + " fields");
        }
        ResultRecord record;
        for (std::size_t i = 0; i < fields.size(); ++i) {
            double value = 0.0;
            const auto& text = fields[i];
            const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
            if (ec != std::errc{} || ptr != text.data() + text.size()) {
                throw std::runtime_error("line " + std::to_string(line_number) +
                                         ": cannot parse '" + text + "' in column " +
                                         header[i]->name);
            }
            header[i]->set(record, value);
        }
        records.push_back(record);
    }
    return records;
}

}  // namespace metrosim::experiment
