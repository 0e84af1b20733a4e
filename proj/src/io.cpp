#include "tsvar/io.hpp"

#include "tsvar/errors.hpp"
#include "text_util.hpp"

#include <json.hpp>

#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace tsvar {

using detail::format_double;
using detail::parse_double;
using detail::trim;

ProblemFileError::ProblemFileError(const std::string& source, std::size_t line, std::string section, std::size_t offset,
                                   const std::string& what)
    : Error(source + ":" + std::to_string(line) + ": [" + (section.empty() ? std::string("-") : section)
            + "] offset " + std::to_string(offset) + ": " + what)
    , line_(line)
    , section_(std::move(section))
    , offset_(offset)
{}

namespace {

struct Line {
    std::size_t number;
    std::string_view raw;
    std::string_view text; // comment stripped and trimmed
    std::size_t column;    // offset of text within raw
};

struct KeyValue {
    std::string_view value;
    std::size_t value_column;
    std::size_t line;
};

const std::set<std::string, std::less<>> kSections = {"timescale", "dimension", "objectives",
                                                      "constraints", "boundary", "solver"};

class ProblemParser {
public:
    ProblemParser(std::string_view text, const std::string& source)
        : source_(source)
    {
        split_lines(text);
    }

    ProblemFile parse()
    {
        collect();
        require_section("timescale");
        require_section("dimension");
        require_section("objectives");
        require_section("boundary");

        const KeyValue scale_kv = require_key("timescale", "scale");
        std::optional<TimeScale> scale;
        try {
            scale = TimeScale::parse(scale_kv.value);
        } catch (const ParseError& e) {
            fail(scale_kv.line, "timescale", scale_kv.value_column + e.offset(), e.message());
        } catch (const Error& e) {
            fail(scale_kv.line, "timescale", scale_kv.value_column, e.what());
        }
        std::optional<double> resolution;
        if (auto kv = find_key("timescale", "resolution")) {
            resolution = number(*kv, "timescale");
            if (!(*resolution > 0.0))
                fail(kv->line, "timescale", kv->value_column, "resolution must be positive");
        }

        const KeyValue n_kv = require_key("dimension", "n");
        const double n_value = number(n_kv, "dimension");
        if (n_value < 1 || n_value > 64 || n_value != static_cast<int>(n_value))
            fail(n_kv.line, "dimension", n_kv.value_column, "n must be an integer in 1..64");
        const int dim = static_cast<int>(n_value);

        std::vector<Expr> objectives;
        for (const Line& l : lines_of("objectives"))
            objectives.push_back(expression(l.text, l.number, l.column, "objectives", dim));
        if (objectives.empty())
            fail(section_line("objectives"), "objectives", 0, "at least one objective is required");

        std::vector<Constraint> constraints;
        for (const Line& l : lines_of("constraints")) {
            const auto eq = l.text.find('=');
            if (eq == std::string_view::npos || l.text.find('=', eq + 1) != std::string_view::npos)
                fail(l.number, "constraints", l.column, "expected 'expression = target'");
            const std::string_view lhs = l.text.substr(0, eq);
            const std::string_view rhs_raw = l.text.substr(eq + 1);
            const std::string_view rhs = trim(rhs_raw);
            const std::size_t rhs_col = l.column + eq + 1 + (rhs.empty() ? 0 : static_cast<std::size_t>(rhs.data() - rhs_raw.data()));
            Expr g = expression(lhs, l.number, l.column, "constraints", dim);
            const auto target = parse_double(rhs);
            if (!target)
                fail(l.number, "constraints", rhs_col, "bad target '" + std::string(rhs) + "'");
            constraints.push_back({std::move(g), *target});
        }

        const Eigen::VectorXd alpha = vector(require_key("boundary", "alpha"), dim);
        const Eigen::VectorXd beta = vector(require_key("boundary", "beta"), dim);

        ProblemFile file{*scale, resolution, dim, std::move(objectives), std::move(constraints), alpha, beta, {}, {}, kDefaultNcTolerance};
        solver_section(file);
        check_unknown_keys();
        return file;
    }

private:
    [[noreturn]] void fail(std::size_t line, const std::string& section, std::size_t offset, const std::string& what) const
    {
        throw ProblemFileError(source_, line, section, offset, what);
    }

    void split_lines(std::string_view text)
    {
        std::size_t number = 1;
        for (std::string_view raw : detail::split(text, '\n')) {
            std::string_view body = raw;
            if (const auto hash = body.find('#'); hash != std::string_view::npos)
                body = body.substr(0, hash);
            const std::string_view t = trim(body);
            const std::size_t column = t.empty() ? 0 : static_cast<std::size_t>(t.data() - raw.data());
            lines_.push_back({number++, raw, t, column});
        }
    }

    void collect()
    {
        std::string current;
        for (const Line& l : lines_) {
            if (l.text.empty())
                continue;
            if (l.text.front() == '[') {
                if (l.text.back() != ']')
                    fail(l.number, current, l.column, "unterminated section header");
                const std::string name(trim(l.text.substr(1, l.text.size() - 2)));
                if (!kSections.count(name))
                    fail(l.number, name, l.column + 1, "unknown section '" + name + "'");
                if (section_lines_.count(name))
                    fail(l.number, name, l.column, "duplicate section '" + name + "'");
                section_lines_[name] = l.number;
                sections_[name];
                current = name;
                continue;
            }
            if (current.empty())
                fail(l.number, "", l.column, "content before the first section header");
            if (current == "objectives" || current == "constraints") {
                sections_[current].push_back(l);
                continue;
            }
            const auto eq = l.text.find('=');
            if (eq == std::string_view::npos)
                fail(l.number, current, l.column, "expected 'key = value'");
            const std::string key(trim(l.text.substr(0, eq)));
            const std::string_view raw_value = l.text.substr(eq + 1);
            const std::string_view value = trim(raw_value);
            const std::size_t value_col
                = l.column + eq + 1 + (value.empty() ? 0 : static_cast<std::size_t>(value.data() - raw_value.data()));
            auto& keys = keys_[current];
            if (keys.count(key))
                fail(l.number, current, l.column, "duplicate key '" + key + "'");
            keys[key] = {value, value_col, l.number};
        }
    }

    void require_section(const std::string& name) const
    {
        if (!section_lines_.count(name))
            fail(lines_.empty() ? 1 : lines_.back().number, name, 0, "missing section [" + name + "]");
    }

    std::size_t section_line(const std::string& name) const { return section_lines_.at(name); }

    const std::vector<Line>& lines_of(const std::string& name)
    {
        return sections_[name];
    }

    std::optional<KeyValue> find_key(const std::string& section, const std::string& key)
    {
        auto s = keys_.find(section);
        if (s == keys_.end())
            return std::nullopt;
        auto k = s->second.find(key);
        if (k == s->second.end())
            return std::nullopt;
        used_.insert(section + "." + key);
        return k->second;
    }

    KeyValue require_key(const std::string& section, const std::string& key)
    {
        auto kv = find_key(section, key);
        if (!kv)
            fail(section_line(section), section, 0, "missing key '" + key + "'");
        return *kv;
    }

    double number(const KeyValue& kv, const std::string& section) const
    {
        const auto v = parse_double(kv.value);
        if (!v)
            fail(kv.line, section, kv.value_column, "bad number '" + std::string(kv.value) + "'");
        return *v;
    }

    int integer(const KeyValue& kv, const std::string& section, int lo) const
    {
        const double v = number(kv, section);
        if (v != static_cast<double>(static_cast<long long>(v)) || v < lo || v > 1e9)
            fail(kv.line, section, kv.value_column, "expected an integer >= " + std::to_string(lo));
        return static_cast<int>(v);
    }

    Eigen::VectorXd vector(const KeyValue& kv, int dim) const
    {
        const auto parts = detail::split(kv.value, ',');
        if (static_cast<int>(parts.size()) != dim)
            fail(kv.line, "boundary", kv.value_column,
                 "expected " + std::to_string(dim) + " values, got " + std::to_string(parts.size()));
        Eigen::VectorXd out(dim);
        std::size_t col = kv.value_column;
        for (int k = 0; k < dim; ++k) {
            const auto v = parse_double(trim(parts[static_cast<std::size_t>(k)]));
            if (!v)
                fail(kv.line, "boundary", col, "bad number '" + std::string(trim(parts[static_cast<std::size_t>(k)])) + "'");
            out(k) = *v;
            col += parts[static_cast<std::size_t>(k)].size() + 1;
        }
        return out;
    }

    Expr expression(std::string_view text, std::size_t line, std::size_t column, const std::string& section, int dim) const
    {
        try {
            return parse_expr(text, dim);
        } catch (const ParseError& e) {
            fail(line, section, column + e.offset(), e.message());
        }
    }

    void solver_section(ProblemFile& file)
    {
        SolverOptions& o = file.solver;
        const auto positive = [&](const char* key, double& target) {
            if (auto kv = find_key("solver", key)) {
                target = number(*kv, "solver");
                if (!(target > 0.0))
                    fail(kv->line, "solver", kv->value_column, std::string(key) + " must be positive");
            }
        };
        positive("grad_tol", o.grad_tol);
        positive("constraint_tol", o.constraint_tol);
        positive("det_tol", o.det_tol);
        positive("nc_tol", file.nc_tol);
        double el = 0.0;
        if (find_key("solver", "el_tol")) {
            positive("el_tol", el);
            file.el_tol = el;
        }
        if (auto kv = find_key("solver", "max_inner"))
            o.max_inner = integer(*kv, "solver", 1);
        if (auto kv = find_key("solver", "max_outer"))
            o.max_outer = integer(*kv, "solver", 1);
        if (auto kv = find_key("solver", "multistart"))
            o.multistart = integer(*kv, "solver", 1);
        if (auto kv = find_key("solver", "seed"))
            o.seed = static_cast<std::uint64_t>(integer(*kv, "solver", 0));
        if (auto kv = find_key("solver", "method")) {
            if (kv->value == "newton")
                o.method = InnerMethod::Newton;
            else if (kv->value == "gradient")
                o.method = InnerMethod::GradientDescent;
            else
                fail(kv->line, "solver", kv->value_column, "method must be 'newton' or 'gradient'");
        }
    }

    void check_unknown_keys() const
    {
        for (const auto& [section, keys] : keys_)
            for (const auto& [key, kv] : keys)
                if (!used_.count(section + "." + key))
                    fail(kv.line, section, 0, "unknown key '" + key + "'");
    }

    const std::string& source_;
    std::vector<Line> lines_;
    std::map<std::string, std::size_t> section_lines_;
    std::map<std::string, std::vector<Line>> sections_;
    std::map<std::string, std::map<std::string, KeyValue>> keys_;
    std::set<std::string> used_;
};

std::string read_all(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

nlohmann::json to_json(const Eigen::VectorXd& v)
{
    auto out = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        out.push_back(v(i));
    return out;
}

} // namespace

VariationalProblem ProblemFile::build(std::optional<double> resolution_override) const
{
    const double res = resolution_override.value_or(resolution.value_or(kDefaultResolution));
    return VariationalProblem(scale, res, dim, objectives, constraints, alpha, beta);
}

ProblemFile parse_problem(std::string_view text, const std::string& source)
{
    return ProblemParser(text, source).parse();
}

ProblemFile read_problem_file(const std::filesystem::path& path)
{
    return parse_problem(read_all(path), path.string());
}

SolutionTable parse_solution(std::string_view text, const std::string& source)
{
    std::vector<std::string_view> rows;
    for (std::string_view raw : detail::split(text, '\n')) {
        const std::string_view t = trim(raw);
        if (!t.empty())
            rows.push_back(t);
    }
    if (rows.empty())
        throw TableError(source + ": empty solution file");

    const auto header = detail::split(rows.front(), ',');
    if (header.size() < 2 || trim(header[0]) != "t")
        throw TableError(source + ":1: header must be 't,y1,...,yn'");
    for (std::size_t k = 1; k < header.size(); ++k)
        if (trim(header[k]) != "y" + std::to_string(k))
            throw TableError(source + ":1: expected column 'y" + std::to_string(k) + "', got '"
                             + std::string(trim(header[k])) + "'");

    const auto n = static_cast<Eigen::Index>(header.size() - 1);
    SolutionTable table;
    table.values.resize(static_cast<Eigen::Index>(rows.size() - 1), n);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto cells = detail::split(rows[r], ',');
        if (cells.size() != header.size())
            throw TableError(source + ": row " + std::to_string(r + 1) + " has " + std::to_string(cells.size())
                             + " columns, expected " + std::to_string(header.size()));
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const auto v = parse_double(trim(cells[c]));
            if (!v)
                throw TableError(source + ": row " + std::to_string(r + 1) + ": bad number '"
                                 + std::string(trim(cells[c])) + "'");
            if (c == 0)
                table.t.push_back(*v);
            else
                table.values(static_cast<Eigen::Index>(r - 1), static_cast<Eigen::Index>(c - 1)) = *v;
        }
    }
    return table;
}

SolutionTable read_solution_file(const std::filesystem::path& path)
{
    return parse_solution(read_all(path), path.string());
}

GridFunction solution_on_grid(const VariationalProblem& p, const SolutionTable& table)
{
    if (table.values.cols() != p.dim())
        throw DimensionError("solution has " + std::to_string(table.values.cols()) + " components, problem has "
                             + std::to_string(p.dim()));
    if (!p.grid().matches(table.t))
        throw DimensionError("solution grid (" + std::to_string(table.t.size()) + " rows) does not match the problem grid ("
                             + std::to_string(p.grid().size()) + " points)");
    return GridFunction(p.grid_ptr(), table.values);
}

void write_solution(std::ostream& out, const GridFunction& y)
{
    out << 't';
    for (int k = 1; k <= y.dim(); ++k)
        out << ",y" << k;
    out << '\n';
    for (std::size_t i = 0; i < y.size(); ++i) {
        out << format_double(y.grid().point(i));
        for (int k = 0; k < y.dim(); ++k)
            out << ',' << format_double(y(i, k));
        out << '\n';
    }
}

void write_el_residual(std::ostream& out, const ELReport& report)
{
    out << "index,t";
    for (Eigen::Index k = 1; k <= report.residual.cols(); ++k)
        out << ",r" << k;
    out << '\n';
    for (std::size_t i = 0; i < report.t.size(); ++i) {
        out << i << ',' << format_double(report.t[i]);
        for (Eigen::Index k = 0; k < report.residual.cols(); ++k)
            out << ',' << format_double(report.residual(static_cast<Eigen::Index>(i), k));
        out << '\n';
    }
}

void write_front(std::ostream& out, const ParetoFront& front, const std::vector<std::string>& solution_paths)
{
    if (solution_paths.size() != front.entries.size())
        throw DimensionError("one solution path per front entry is required");
    const std::size_t d = front.entries.empty() ? 0 : front.entries.front().weights.size();
    for (std::size_t i = 1; i <= d; ++i)
        out << "gamma" << i << ',';
    for (std::size_t i = 1; i <= d; ++i)
        out << 'L' << i << ',';
    out << "solution\n";
    for (std::size_t e = 0; e < front.entries.size(); ++e) {
        const ParetoEntry& entry = front.entries[e];
        for (double w : entry.weights)
            out << format_double(w) << ',';
        for (double v : entry.objectives)
            out << format_double(v) << ',';
        out << solution_paths[e] << '\n';
    }
}

std::string solve_report_json(const ScalarObjective& obj, const SolveResult& result, const ELReport& el)
{
    nlohmann::json j;
    j["status"] = to_string(result.status);
    j["weights"] = obj.weights();
    j["objective"] = result.objective;
    j["objectives"] = result.values.objectives;
    j["constraints"] = result.values.constraints;
    j["violations"] = result.values.violations;
    j["multipliers"] = to_json(result.multipliers);
    j["grad_norm"] = result.grad_norm;
    j["max_violation"] = result.max_violation;
    j["iterations"] = result.iterations;
    j["outer_iterations"] = result.outer_iterations;
    j["penalty"] = result.penalty;
    j["seed"] = result.seed;
    j["start_index"] = result.start_index;
    j["el_residual_max"] = el.max_residual;
    j["dubois_reymond_spread"] = el.dubois_reymond_spread;
    return j.dump(2) + "\n";
}

std::string front_report_json(const ParetoFront& front, int k, const std::vector<std::string>& solution_paths)
{
    nlohmann::json j;
    j["k"] = k;
    j["attempted"] = front.attempted;
    j["dominated_removed"] = front.dominated_removed;
    auto failures = nlohmann::json::array();
    for (const auto& f : front.failures)
        failures.push_back({{"weights", f.weights}, {"reason", f.reason}});
    j["failures"] = failures;
    auto entries = nlohmann::json::array();
    for (std::size_t e = 0; e < front.entries.size(); ++e) {
        const ParetoEntry& entry = front.entries[e];
        const SolveResult& r = entry.result;
        entries.push_back({
            {"weights", entry.weights},
            {"objectives", entry.objectives},
            {"solution", e < solution_paths.size() ? solution_paths[e] : ""},
            {"status", to_string(r.status)},
            {"iterations", r.iterations},
            {"outer_iterations", r.outer_iterations},
            {"grad_norm", r.grad_norm},
            {"max_violation", r.max_violation},
            {"multipliers", to_json(r.multipliers)},
        });
    }
    j["entries"] = entries;
    return j.dump(2) + "\n";
}

void write_text_file(const std::filesystem::path& path, const std::string& content)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error("cannot write " + path.string());
    out << content;
    if (!out)
        throw Error("failed writing " + path.string());
}

std::string read_text_file(const std::filesystem::path& path)
{
    return read_all(path);
}

} // namespace tsvar
