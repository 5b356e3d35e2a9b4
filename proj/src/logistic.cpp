#include "winpred/logistic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "winpred/csv.hpp"
#include "winpred/error.hpp"

namespace winpred {

namespace {

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + e^z) without overflow.
double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

// Row-major design matrix view with 0/1 targets.
struct Design {
  std::span<const double> x;
  std::vector<double> y;
  std::size_t n = 0;
  std::size_t d = 0;

  std::span<const double> row(std::size_t i) const { return x.subspan(i * d, d); }
};

Design make_design(std::span<const double> values, const LabeledData& data) {
  Design design{values, {}, data.rows(), data.cols()};
  design.y.resize(data.rows());
  for (std::size_t i = 0; i < data.rows(); ++i) {
    design.y[i] = data.label(i) == MatchOutcome::RadiantWin ? 1.0 : 0.0;
  }
  return design;
}

double linear(std::span<const double> w, double b, std::span<const double> x) {
  double z = b;
  for (std::size_t j = 0; j < w.size(); ++j) z += w[j] * x[j];
  return z;
}

double objective(const Design& design, std::span<const double> w, double b, double ridge) {
  double ll = 0.0;
  for (std::size_t i = 0; i < design.n; ++i) {
    const double z = linear(w, b, design.row(i));
    ll += design.y[i] * z - softplus(z);
  }
  double norm2 = 0.0;
  for (double wj : w) norm2 += wj * wj;
  return ll - ridge * norm2;
}

// Gradient into `gw` (size d) and `gb`.
void gradient(const Design& design, std::span<const double> w, double b, double ridge,
              std::vector<double>& gw, double& gb) {
  std::fill(gw.begin(), gw.end(), 0.0);
  gb = 0.0;
  for (std::size_t i = 0; i < design.n; ++i) {
    const auto x = design.row(i);
    const double r = design.y[i] - sigmoid(linear(w, b, x));
    for (std::size_t j = 0; j < design.d; ++j) gw[j] += r * x[j];
    gb += r;
  }
  for (std::size_t j = 0; j < design.d; ++j) gw[j] -= 2.0 * ridge * w[j];
}

void check_finite(std::span<const double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorKind::NonFiniteFeature, "feature value is NaN or infinite");
  }
}

std::vector<double> all_values(const LabeledData& data) {
  std::vector<double> values;
  values.reserve(data.rows() * data.cols());
  for (std::size_t i = 0; i < data.rows(); ++i) {
    auto r = data.row(i);
    values.insert(values.end(), r.begin(), r.end());
  }
  return values;
}

}  // namespace

void validate(const LrConfig& c) {
  if (!(c.ridge >= 0.0) || !std::isfinite(c.ridge)) {
    throw Error(ErrorKind::InvalidConfig, "ridge must be finite and >= 0");
  }
  if (!(c.convergence_tolerance > 0.0)) {
    throw Error(ErrorKind::InvalidConfig, "convergence_tolerance must be > 0");
  }
  if (c.max_iterations < 0) throw Error(ErrorKind::InvalidConfig, "max_iterations must be >= 0");
}

double penalized_log_likelihood(std::span<const double> weights, double bias,
                                const LabeledData& data, double ridge) {
  if (weights.size() != data.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "weight count differs from feature count");
  }
  const auto values = all_values(data);
  return objective(make_design(values, data), weights, bias, ridge);
}

LrGradient penalized_gradient(std::span<const double> weights, double bias,
                              const LabeledData& data, double ridge) {
  if (weights.size() != data.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "weight count differs from feature count");
  }
  const auto values = all_values(data);
  check_finite(values);
  check_finite(weights);
  LrGradient g;
  g.weights.resize(weights.size());
  gradient(make_design(values, data), weights, bias, ridge, g.weights, g.bias);
  return g;
}

LrModel train_lr(const LabeledData& data, const LrConfig& config) {
  validate(config);
  if (data.rows() < 2) throw Error(ErrorKind::DimensionMismatch, "need at least two rows");
  if (!data.has_both_classes()) throw Error(ErrorKind::SingleClassData, "training labels hold one class");

  LrModel model;
  model.config = config;
  model.feature_names = data.feature_names();
  const std::size_t n = data.rows();
  const std::size_t d = data.cols();

  std::vector<double> values = all_values(data);
  check_finite(values);
  if (config.standardize) {
    model.means.assign(d, 0.0);
    model.stddevs.assign(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < d; ++j) model.means[j] += values[i * d + j];
    }
    for (auto& m : model.means) m /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        const double c = values[i * d + j] - model.means[j];
        model.stddevs[j] += c * c;
      }
    }
    for (auto& s : model.stddevs) {
      s = std::sqrt(s / static_cast<double>(n));
      if (!(s > 0.0)) s = 1.0;
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        values[i * d + j] = (values[i * d + j] - model.means[j]) / model.stddevs[j];
      }
    }
  }
  // Design matrix with a trailing column of ones for the bias.
  Eigen::MatrixXd x(n, d + 1);
  Eigen::VectorXd y(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) x(Eigen::Index(i), Eigen::Index(j)) = values[i * d + j];
    x(Eigen::Index(i), Eigen::Index(d)) = 1.0;
    y(Eigen::Index(i)) = data.label(i) == MatchOutcome::RadiantWin ? 1.0 : 0.0;
  }
  // 2 * ridge on every weight, nothing on the bias.
  Eigen::VectorXd penalty = Eigen::VectorXd::Constant(Eigen::Index(d + 1), 2.0 * config.ridge);
  penalty(Eigen::Index(d)) = 0.0;

  auto eval = [&](const Eigen::VectorXd& theta) {
    const Eigen::VectorXd z = x * theta;
    double ll = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) ll += y(i) * z(i) - softplus(z(i));
    return ll - 0.5 * theta.dot(penalty.cwiseProduct(theta));
  };

  Eigen::VectorXd theta = Eigen::VectorXd::Zero(Eigen::Index(d + 1));
  double f = eval(theta);
  int iter = 0;
  for (; iter < config.max_iterations; ++iter) {
    const Eigen::VectorXd z = x * theta;
    Eigen::VectorXd p(z.size()), curvature(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      p(i) = sigmoid(z(i));
      curvature(i) = p(i) * (1.0 - p(i));
    }
    const Eigen::VectorXd g = x.transpose() * (y - p) - penalty.cwiseProduct(theta);
    if (g.squaredNorm() == 0.0) break;

    // Negated Hessian, nudged to stay positive definite when the data are
    // separable or columns collinear.
    Eigen::MatrixXd h = x.transpose() * curvature.asDiagonal() * x;
    h.diagonal() += penalty;
    h.diagonal().array() += 1e-10 * std::max(1.0, h.diagonal().maxCoeff());
    Eigen::VectorXd direction = h.ldlt().solve(g);
    double slope = g.dot(direction);
    if (!direction.allFinite() || !(slope > 0.0)) {
      direction = g;
      slope = g.squaredNorm();
    }

    double step = 1.0, f_next = f;
    bool accepted = false;
    Eigen::VectorXd next;
    for (int tries = 0; tries < 60; ++tries) {
      next = theta + step * direction;
      f_next = eval(next);
      if (f_next >= f + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    const double improvement = f_next - f;
    theta = std::move(next);
    f = f_next;
    if (improvement < config.convergence_tolerance) {
      ++iter;
      break;
    }
  }

  std::vector<double> w(theta.data(), theta.data() + d);
  const double b = theta(Eigen::Index(d));
  model.weights = std::move(w);
  model.bias = b;
  model.iterations = iter;
  return model;
}

double predict_proba(const LrModel& model, std::span<const double> x) {
  if (x.size() != model.weights.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                fmt::format("input has {} features, model expects {}", x.size(), model.weights.size()));
  }
  double z = model.bias;
  const bool standardized = !model.means.empty();
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double v = standardized ? (x[j] - model.means[j]) / model.stddevs[j] : x[j];
    z += model.weights[j] * v;
  }
  return sigmoid(z);
}

MatchOutcome label_from_probability(double p) {
  return p >= 0.5 ? MatchOutcome::RadiantWin : MatchOutcome::DireWin;
}

MatchOutcome predict_label(const LrModel& model, std::span<const double> x) {
  return label_from_probability(predict_proba(model, x));
}

// ---------------------------------------------------------------------------
// Text persistence:
//   winpred-lr 1
//   ridge <r>
//   max_iterations <n>
//   convergence_tolerance <t>
//   standardize true|false
//   features <d>
//   (bias),<b>
//   <name>,<weight>[,<mean>,<stddev>]      one row per feature

std::string serialize(const LrModel& m) {
  std::string out = "winpred-lr 1\n";
  out += fmt::format("ridge {}\n", csv::format_exact(m.config.ridge));
  out += fmt::format("max_iterations {}\n", m.config.max_iterations);
  out += fmt::format("convergence_tolerance {}\n", csv::format_exact(m.config.convergence_tolerance));
  out += fmt::format("standardize {}\n", m.config.standardize ? "true" : "false");
  out += fmt::format("features {}\n", m.weights.size());
  out += fmt::format("(bias),{}\n", csv::format_exact(m.bias));
  const bool standardized = !m.means.empty();
  for (std::size_t j = 0; j < m.weights.size(); ++j) {
    out += fmt::format("{},{}", m.feature_names[j], csv::format_exact(m.weights[j]));
    if (standardized) {
      out += fmt::format(",{},{}", csv::format_exact(m.means[j]), csv::format_exact(m.stddevs[j]));
    }
    out += '\n';
  }
  return out;
}

LrModel parse_lr_model(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  auto next = [&](std::string_view expect_key) {
    if (!std::getline(in, line)) {
      throw Error(ErrorKind::MalformedModel, fmt::format("missing '{}'", expect_key));
    }
    const auto sp = line.find(' ');
    if (line.substr(0, sp) != expect_key || sp == std::string::npos) {
      throw Error(ErrorKind::MalformedModel, fmt::format("expected '{}', got '{}'", expect_key, line));
    }
    return line.substr(sp + 1);
  };
  try {
    if (next("winpred-lr") != "1") throw Error(ErrorKind::MalformedModel, "unsupported version");
    LrModel m;
    m.config.ridge = csv::parse_real(next("ridge"), "ridge");
    m.config.max_iterations = static_cast<int>(csv::parse_int(next("max_iterations"), "max_iterations"));
    m.config.convergence_tolerance =
        csv::parse_real(next("convergence_tolerance"), "convergence_tolerance");
    m.config.standardize = csv::parse_bool(next("standardize"), "standardize");
    const auto d = static_cast<std::size_t>(csv::parse_int(next("features"), "features"));
    if (!std::getline(in, line) || line.rfind("(bias),", 0) != 0) {
      throw Error(ErrorKind::MalformedModel, "missing bias row");
    }
    m.bias = csv::parse_real(line.substr(7), "bias");
    const std::size_t width = m.config.standardize ? 4 : 2;
    for (std::size_t j = 0; j < d; ++j) {
      if (!std::getline(in, line)) throw Error(ErrorKind::MalformedModel, "truncated weight rows");
      const auto f = csv::split_line(line);
      if (f.size() != width) throw Error(ErrorKind::MalformedModel, fmt::format("bad row '{}'", line));
      m.feature_names.push_back(f[0]);
      m.weights.push_back(csv::parse_real(f[1], "weight"));
      if (m.config.standardize) {
        m.means.push_back(csv::parse_real(f[2], "mean"));
        m.stddevs.push_back(csv::parse_real(f[3], "stddev"));
      }
    }
    return m;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::MalformedModel) throw;
    throw Error(ErrorKind::MalformedModel, e.what());
  }
}

}  // namespace winpred
