#pragma once

#include "foldlab/trajectory.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace foldlab::cli::io {

using Json = nlohmann::ordered_json;

/// %.17g; nan/inf spelled out.
std::string fmt(double v);

class Csv {
 public:
  explicit Csv(std::vector<std::string> header);
  Csv& cell(double v);
  Csv& cell(long v);
  Csv& cell(const std::string& v);
  Csv& end_row();
  std::string str() const;

 private:
  std::string text_;
  bool row_start_ = true;
};

Json vec(const Eigen::VectorXd& v);
Json mat_columns(const Eigen::MatrixXd& m);
/// Numbers that may be nan or infinite: JSON null in that case.
Json num(double v);

/// Fold curves: t, x_1..x_{n+1}. Billiards: t, x_1..x_n, bounce_flag.
std::string curve_csv(const SampledCurve<double>& curve);
std::string billiard_csv(const SampledCurve<double>& curve, const std::vector<Bounce<double>>& bounces);
Json bounces_json(const std::vector<Bounce<double>>& bounces);

void write_file(const std::string& path, const std::string& content);

}  // namespace foldlab::cli::io
