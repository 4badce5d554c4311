#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "aclab/rational.hpp"

namespace aclab::lab {

inline constexpr const char* kVersion = "aclab-lab 1.0";

// distribution, pointprob, span-check, gamma, decompose, dispersedness,
// general-position, halasz, nu-gamma, kappa-gamma, scale-probe, concentration
const std::vector<std::string>& experiment_kinds();

struct ExperimentConfig {
    std::string kind;
    nlohmann::json params = nlohmann::json::object();
    std::uint64_t seed = 1;
    std::uint64_t trials = 10'000;
    std::string out;    // output prefix; empty means CSV on stdout
    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

// {"kind", "seed", "trials", "out", "params"}; every key but "params" optional.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& cfg);

enum class CellType { Int, Real, Exact, Text, Flag };
using Cell = std::variant<std::int64_t, double, Rational, std::string, bool>;

struct Column {
    std::string name;
    CellType type = CellType::Text;
    friend bool operator==(const Column&, const Column&) = default;
};

struct Table {
    std::vector<Column> columns;
    std::vector<std::vector<Cell>> rows;

    // Checks arity and cell types against the columns.
    void add(std::vector<Cell> row);
    friend bool operator==(const Table&, const Table&) = default;
};

struct ResultRecord {
    ExperimentConfig config;
    std::string version = kVersion;
    std::string started;     // UTC, ISO 8601
    std::string finished;
    std::vector<std::pair<std::string, std::uint64_t>> seeds;   // derived seeds by role
    std::vector<nlohmann::json> runs;                           // per-run outputs
    Table summary;
    friend bool operator==(const ResultRecord&, const ResultRecord&) = default;
};

// Parses and checks the kind-specific parameters without sampling anything.
// ValidationError on the first problem.
void validate_config(const ExperimentConfig& cfg);

// workers = 0 uses default_workers().
ResultRecord run_experiment(const ExperimentConfig& cfg, unsigned workers = 0);

// Exact rationals print as 12 significant digits, reals likewise; no timestamps.
std::string to_csv(const Table& table);

// Header line, one line per run, one per summary row, footer line.
void write_jsonl(const ResultRecord& record, std::ostream& os);
ResultRecord read_jsonl(std::istream& is);

enum class Format { Jsonl, Csv };
void emit(const ResultRecord& record, Format format, std::ostream& os);
// prefix.jsonl and prefix.csv
void emit_files(const ResultRecord& record, const std::string& prefix);

} // namespace aclab::lab
