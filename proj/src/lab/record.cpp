#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "aclab/errors.hpp"
#include "aclab/lab.hpp"

namespace aclab::lab {

using nlohmann::json;

ExperimentConfig config_from_json(const json& j)
{
    if (!j.is_object()) throw ValidationError("config must be a JSON object");
    ExperimentConfig cfg;
    for (const auto& [key, value] : j.items()) {
        try {
            if (key == "kind") cfg.kind = value.get<std::string>();
            else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
            else if (key == "trials") cfg.trials = value.get<std::uint64_t>();
            else if (key == "out") cfg.out = value.get<std::string>();
            else if (key == "params") {
                if (!value.is_object()) throw ValidationError("params must be an object");
                cfg.params = value;
            } else throw ValidationError("unknown config key '" + key + "'");
        } catch (const json::exception& ex) {
            throw ValidationError("config key '" + key + "': " + ex.what());
        }
    }
    return cfg;
}

json to_json(const ExperimentConfig& cfg)
{
    return {{"kind", cfg.kind}, {"seed", cfg.seed}, {"trials", cfg.trials}, {"out", cfg.out}, {"params", cfg.params}};
}

namespace {

const char* type_name(CellType t)
{
    switch (t) {
    case CellType::Int: return "int";
    case CellType::Real: return "real";
    case CellType::Exact: return "rational";
    case CellType::Text: return "text";
    case CellType::Flag: return "bool";
    }
    return "?";
}

CellType type_from_name(const std::string& s)
{
    for (CellType t : {CellType::Int, CellType::Real, CellType::Exact, CellType::Text, CellType::Flag})
        if (s == type_name(t)) return t;
    throw ValidationError("unknown column type '" + s + "'");
}

bool matches(const Cell& c, CellType t)
{
    return static_cast<std::size_t>(t) == c.index();
}

std::string csv_escape(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

std::string csv_cell(const Cell& c)
{
    struct V {
        std::string operator()(std::int64_t x) const { return std::to_string(x); }
        std::string operator()(double x) const
        {
            if (std::isnan(x)) return "nan";
            if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
            return format_decimal(Rational(x), 12);
        }
        std::string operator()(const Rational& q) const { return format_decimal(q, 12); }
        std::string operator()(const std::string& s) const { return csv_escape(s); }
        std::string operator()(bool b) const { return b ? "true" : "false"; }
    };
    return std::visit(V{}, c);
}

json cell_json(const Cell& c)
{
    struct V {
        json operator()(std::int64_t x) const { return x; }
        json operator()(double x) const
        {
            if (std::isnan(x)) return "nan";
            if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
            return x;
        }
        json operator()(const Rational& q) const { return to_string(q); }
        json operator()(const std::string& s) const { return s; }
        json operator()(bool b) const { return b; }
    };
    return std::visit(V{}, c);
}

Cell cell_from_json(const json& j, CellType t)
{
    switch (t) {
    case CellType::Int: return j.get<std::int64_t>();
    case CellType::Real:
        if (j.is_string()) {
            const auto s = j.get<std::string>();
            if (s == "nan") return std::nan("");
            if (s == "inf") return HUGE_VAL;
            if (s == "-inf") return -HUGE_VAL;
            throw ValidationError("bad real cell '" + s + "'");
        }
        return j.get<double>();
    case CellType::Exact: return parse_rational(j.get<std::string>());
    case CellType::Text: return j.get<std::string>();
    case CellType::Flag: return j.get<bool>();
    }
    throw ValidationError("bad cell");
}

} // namespace

void Table::add(std::vector<Cell> row)
{
    if (row.size() != columns.size()) throw std::logic_error("row arity does not match the columns");
    for (std::size_t k = 0; k < row.size(); ++k)
        if (!matches(row[k], columns[k].type))
            throw std::logic_error("cell type mismatch in column " + columns[k].name);
    rows.push_back(std::move(row));
}

std::string to_csv(const Table& table)
{
    std::string out;
    for (std::size_t k = 0; k < table.columns.size(); ++k) {
        if (k) out += ',';
        out += csv_escape(table.columns[k].name);
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (k) out += ',';
            out += csv_cell(row[k]);
        }
        out += '\n';
    }
    return out;
}

void write_jsonl(const ResultRecord& r, std::ostream& os)
{
    json cols = json::array();
    for (const auto& c : r.summary.columns) cols.push_back({{"name", c.name}, {"type", type_name(c.type)}});
    json seeds = json::array();
    for (const auto& [label, s] : r.seeds) seeds.push_back({label, s});
    os << json{{"record", "header"},
               {"version", r.version},
               {"config", to_json(r.config)},
               {"started", r.started},
               {"seeds", seeds},
               {"columns", cols}}
              .dump()
       << '\n';
    for (const auto& run : r.runs) os << json{{"record", "run"}, {"data", run}}.dump() << '\n';
    for (const auto& row : r.summary.rows) {
        json values = json::array();
        for (const auto& c : row) values.push_back(cell_json(c));
        os << json{{"record", "row"}, {"values", values}}.dump() << '\n';
    }
    os << json{{"record", "footer"},
               {"finished", r.finished},
               {"runs", r.runs.size()},
               {"rows", r.summary.rows.size()}}
              .dump()
       << '\n';
}

ResultRecord read_jsonl(std::istream& is)
{
    ResultRecord r;
    std::string line;
    bool header = false, footer = false;
    try {
        while (std::getline(is, line)) {
            if (line.empty()) continue;
            if (footer) throw ValidationError("data after the footer");
            const json j = json::parse(line);
            const std::string kind = j.at("record").get<std::string>();
            if (!header && kind != "header") throw ValidationError("record does not start with a header");
            if (kind == "header") {
                if (header) throw ValidationError("second header");
                header = true;
                r.version = j.at("version").get<std::string>();
                r.config = config_from_json(j.at("config"));
                r.started = j.at("started").get<std::string>();
                for (const auto& s : j.at("seeds")) r.seeds.emplace_back(s.at(0).get<std::string>(), s.at(1).get<std::uint64_t>());
                for (const auto& c : j.at("columns"))
                    r.summary.columns.push_back({c.at("name").get<std::string>(), type_from_name(c.at("type").get<std::string>())});
            } else if (kind == "run") {
                r.runs.push_back(j.at("data"));
            } else if (kind == "row") {
                const auto& vals = j.at("values");
                if (vals.size() != r.summary.columns.size()) throw ValidationError("row arity mismatch");
                std::vector<Cell> row;
                for (std::size_t k = 0; k < vals.size(); ++k) row.push_back(cell_from_json(vals[k], r.summary.columns[k].type));
                r.summary.rows.push_back(std::move(row));
            } else if (kind == "footer") {
                footer = true;
                r.finished = j.at("finished").get<std::string>();
                if (j.at("runs").get<std::size_t>() != r.runs.size() || j.at("rows").get<std::size_t>() != r.summary.rows.size())
                    throw ValidationError("footer counts do not match the record");
            } else {
                throw ValidationError("unknown record line '" + kind + "'");
            }
        }
    } catch (const json::exception& ex) {
        throw ValidationError(std::string("malformed JSONL record: ") + ex.what());
    }
    if (!footer) throw ValidationError("record has no footer");
    return r;
}

void emit(const ResultRecord& record, Format format, std::ostream& os)
{
    if (format == Format::Csv) os << to_csv(record.summary);
    else write_jsonl(record, os);
    if (!os) throw std::runtime_error("write failed");
}

void emit_files(const ResultRecord& record, const std::string& prefix)
{
    for (const auto& [ext, fmt] : {std::pair{".jsonl", Format::Jsonl}, std::pair{".csv", Format::Csv}}) {
        const std::string path = prefix + ext;
        std::ofstream os(path, std::ios::binary);
        if (!os) throw std::runtime_error("cannot open " + path + " for writing");
        emit(record, fmt, os);
    }
}

} // namespace aclab::lab
