#include "output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace foldlab::cli::io {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Csv::Csv(std::vector<std::string> header) {
  for (const auto& h : header) cell(h);
  end_row();
}

Csv& Csv::cell(const std::string& v) {
  if (!row_start_) text_ += ',';
  text_ += v;
  row_start_ = false;
  return *this;
}

Csv& Csv::cell(double v) { return cell(fmt(v)); }
Csv& Csv::cell(long v) { return cell(std::to_string(v)); }

Csv& Csv::end_row() {
  text_ += '\n';
  row_start_ = true;
  return *this;
}

std::string Csv::str() const { return text_; }

Json num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json vec(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(num(v(i)));
  return out;
}

Json mat_columns(const Eigen::MatrixXd& m) {
  Json out = Json::array();
  for (Eigen::Index j = 0; j < m.cols(); ++j) out.push_back(vec(m.col(j)));
  return out;
}

namespace {
std::vector<std::string> coordinate_header(Eigen::Index dim) {
  std::vector<std::string> h{"t"};
  for (Eigen::Index i = 1; i <= dim; ++i) h.push_back("x_" + std::to_string(i));
  return h;
}
}  // namespace

std::string curve_csv(const SampledCurve<double>& curve) {
  Csv csv(coordinate_header(curve.dim()));
  for (std::size_t i = 0; i < curve.size(); ++i) {
    csv.cell(curve.times[i]);
    for (Eigen::Index k = 0; k < curve.points[i].size(); ++k) csv.cell(curve.points[i](k));
    csv.end_row();
  }
  return csv.str();
}

std::string billiard_csv(const SampledCurve<double>& curve, const std::vector<Bounce<double>>& bounces) {
  auto header = coordinate_header(curve.dim());
  header.push_back("bounce_flag");
  Csv csv(header);
  std::size_t next = 0;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    // Flag the first sample at or after each bounce time.
    long flag = 0;
    while (next < bounces.size() && bounces[next].time <= curve.times[i] + 1e-12) {
      flag = 1;
      ++next;
    }
    csv.cell(curve.times[i]);
    for (Eigen::Index k = 0; k < curve.points[i].size(); ++k) csv.cell(curve.points[i](k));
    csv.cell(flag).end_row();
  }
  return csv.str();
}

Json bounces_json(const std::vector<Bounce<double>>& bounces) {
  Json out = Json::array();
  for (const auto& b : bounces)
    out.push_back({{"t", num(b.time)},
                   {"point", vec(b.point)},
                   {"incoming", vec(b.incoming)},
                   {"outgoing", vec(b.outgoing)},
                   {"grazing", b.grazing}});
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorKind::Config, "cannot write " + path);
  out << content;
  require(static_cast<bool>(out), ErrorKind::Config, "failed writing " + path);
}

}  // namespace foldlab::cli::io
