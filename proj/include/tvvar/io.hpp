#ifndef TVVAR_IO_HPP_
#define TVVAR_IO_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "tvvar/estimators.hpp"
#include "tvvar/evaluation.hpp"
#include "tvvar/simulation.hpp"
#include "json.hpp"

namespace tvvar {

inline constexpr int kSchemaVersion = 1;

// Series CSV: a header "variable,1,2,...,n" and one row per variable whose
// first field is the 0-based variable index. Values are written with 17
// significant digits. Readers throw DataError on malformed input.
void write_series_csv(std::ostream& out, const SeriesMatrix& x);
SeriesMatrix read_series_csv(std::istream& in);
void write_series_csv_file(const std::string& path, const SeriesMatrix& x);
SeriesMatrix read_series_csv_file(const std::string& path);

// d x d matrix CSV without a header.
void write_matrix_csv(std::ostream& out, const DenseMatrix& m);

nlohmann::json to_json(const DenseMatrix& m);
DenseMatrix matrix_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SeriesMatrix& x);
SeriesMatrix series_from_json(const nlohmann::json& j);

nlohmann::json to_json(const TransitionPath& path);
TransitionPath path_from_json(const nlohmann::json& j);

nlohmann::json to_json(const GraphPattern& p);
GraphPattern pattern_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SimulationTruth& truth);
SimulationTruth truth_from_json(const nlohmann::json& j);

nlohmann::json to_json(const EstimatorConfig& cfg);
EstimatorConfig estimator_config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const EstimatePath& path);
EstimatePath estimate_path_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ErrorTable& table);
void write_error_table_csv(std::ostream& out, const ErrorTable& table);

nlohmann::json to_json(const std::vector<RocPoint>& curve);
void write_roc_csv(std::ostream& out, const std::string& label,
                   const std::vector<RocPoint>& curve, bool header = true);

nlohmann::json to_json(const TuningResult& result);
TuningResult tuning_from_json(const nlohmann::json& j);

// Whole-file helpers; JSON is written with an indent of 1.
nlohmann::json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& j);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace tvvar

#endif  // TVVAR_IO_HPP_
