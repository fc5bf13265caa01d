#include "phasespace/io.hpp"

#include <cmath>
#include <cstdio>
#include <vector>

#include "json.hpp"

namespace phasespace {

namespace {

using nlohmann::json;

json parse(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::kConfigInvalid, std::string("malformed JSON: ") + e.what());
  }
}

const json& field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) fail(ErrorCode::kConfigInvalid, std::string("missing field '") + name + "'");
  return j.at(name);
}

double number(const json& j, const char* name) {
  if (!j.is_number()) fail(ErrorCode::kConfigInvalid, std::string("field '") + name + "' must be a number");
  return j.get<double>();
}

double number_field(const json& j, const char* name) { return number(field(j, name), name); }

int count_field(const json& j, const char* name) {
  const json& v = field(j, name);
  if (!v.is_number_integer() || v.get<long long>() < 1 || v.get<long long>() > 64) {
    fail(ErrorCode::kConfigInvalid, std::string("field '") + name + "' must be an integer in [1, 64]");
  }
  return v.get<int>();
}

std::string kind_of(const json& j) {
  const json& k = field(j, "kind");
  if (!k.is_string()) fail(ErrorCode::kConfigInvalid, "field 'kind' must be a string");
  return k.get<std::string>();
}

RealVector vector_of(const json& j, const char* name, int expected) {
  if (!j.is_array()) fail(ErrorCode::kConfigInvalid, std::string("field '") + name + "' must be an array");
  if (expected >= 0 && static_cast<int>(j.size()) != expected) {
    fail(ErrorCode::kConfigInvalid,
         std::string("field '") + name + "' must have " + std::to_string(expected) + " entries");
  }
  RealVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(j[i], name);
  return v;
}

RealMatrix matrix_of(const json& j, const char* name, int dim) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim) {
    fail(ErrorCode::kConfigInvalid, std::string("field '") + name + "' must have " + std::to_string(dim) + " rows");
  }
  RealMatrix m(dim, dim);
  for (int r = 0; r < dim; ++r) m.row(r) = vector_of(j[r], name, dim).transpose();
  return m;
}

struct PiecewiseMatrix {
  std::vector<double> until;
  std::vector<RealMatrix> matrices;

  RealMatrix operator()(double t) const {
    for (std::size_t k = 0; k < until.size(); ++k) {
      if (t < until[k]) return matrices[k];
    }
    return matrices.back();
  }
};

QuadraticHamiltonian hamiltonian_from(const json& doc) {
  const int n = count_field(doc, "n_modes");
  const int dim = 2 * n;
  RealVector c;
  if (doc.contains("C")) c = vector_of(doc.at("C"), "C", dim);
  const json& b = field(doc, "B");
  if (b.is_array()) return QuadraticHamiltonian::constant(matrix_of(b, "B", dim), c);

  const std::string kind = kind_of(b);
  QuadraticHamiltonian::VectorFn c_fn;
  if (c.size() > 0) c_fn = [c](double) { return c; };
  if (kind == "constant") return QuadraticHamiltonian::constant(matrix_of(field(b, "matrix"), "matrix", dim), c);
  if (kind == "cosine_modulated") {
    const RealMatrix base = matrix_of(field(b, "base"), "base", dim);
    const RealMatrix amplitude = matrix_of(field(b, "amplitude"), "amplitude", dim);
    const double w = number_field(b, "frequency");
    return QuadraticHamiltonian::time_dependent(
        n, [=](double t) -> RealMatrix { return base + amplitude * std::cos(w * t); }, c_fn);
  }
  if (kind == "piecewise") {
    const json& segs = field(b, "segments");
    if (!segs.is_array() || segs.empty()) fail(ErrorCode::kConfigInvalid, "'segments' must be a non-empty array");
    PiecewiseMatrix pw;
    for (const json& s : segs) {
      const double until = number_field(s, "until");
      if (!pw.until.empty() && !(until > pw.until.back())) {
        fail(ErrorCode::kConfigInvalid, "segment 'until' values must increase");
      }
      pw.until.push_back(until);
      pw.matrices.push_back(matrix_of(field(s, "matrix"), "matrix", dim));
    }
    return QuadraticHamiltonian::time_dependent(n, pw, c_fn);
  }
  fail(ErrorCode::kConfigInvalid, "unknown Hamiltonian kind '" + kind + "'");
}

GaussianState state_from(const json& doc) {
  if (doc.is_object() && doc.contains("kind")) {
    const std::string kind = kind_of(doc);
    if (kind == "vacuum") return GaussianState::vacuum(count_field(doc, "n_modes"));
    if (kind == "coherent") {
      const RealVector mean = vector_of(field(doc, "mean"), "mean", -1);
      if (mean.size() == 0 || mean.size() % 2 != 0) fail(ErrorCode::kConfigInvalid, "'mean' needs 2N entries");
      return GaussianState::coherent(mean);
    }
    if (kind == "thermal") {
      return GaussianState::thermal(count_field(doc, "n_modes"), number_field(doc, "mean_photons"));
    }
    fail(ErrorCode::kConfigInvalid, "unknown state kind '" + kind + "'");
  }
  const int n = count_field(doc, "n_modes");
  const RealVector mean = vector_of(field(doc, "mean"), "mean", 2 * n);
  const RealVector upper = vector_of(field(doc, "dispersion_upper"), "dispersion_upper", n * (2 * n + 1));
  return GaussianState::from_upper(n, mean, std::span<const double>(upper.data(), static_cast<std::size_t>(upper.size())));
}

std::string matrix_json(const RealMatrix& m) {
  std::string out = "[";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    std::vector<double> row(m.cols());
    for (Eigen::Index c = 0; c < m.cols(); ++c) row[c] = m(r, c);
    if (r > 0) out += ",\n    ";
    out += json_array(row);
  }
  return out + "]";
}

}  // namespace

QuadraticHamiltonian hamiltonian_from_json(std::string_view text) { return hamiltonian_from(parse(text)); }

GaussianState state_from_json(std::string_view text) { return state_from(parse(text)); }

PropagatorReal propagator_from_json(std::string_view text, double tol) {
  const json doc = parse(text);
  const int dim = 2 * count_field(doc, "n_modes");
  return PropagatorReal(matrix_of(field(doc, "lambda"), "lambda", dim), vector_of(field(doc, "delta"), "delta", dim),
                        number_field(doc, "time"), tol);
}

FrequencyProfile profile_from_json(std::string_view text) {
  const json doc = parse(text);
  const std::string kind = kind_of(doc);
  if (kind == "constant") return FrequencyProfile::constant(number_field(doc, "omega_sq"));
  if (kind == "free") return FrequencyProfile::free_particle();
  if (kind == "repulsive") return FrequencyProfile::repulsive();
  if (kind == "cosine_modulated") {
    return FrequencyProfile::cosine_modulated(number_field(doc, "omega0_sq"), number_field(doc, "depth"),
                                              number_field(doc, "frequency"));
  }
  if (kind == "piecewise") {
    const json& segs = field(doc, "segments");
    if (!segs.is_array()) fail(ErrorCode::kConfigInvalid, "'segments' must be an array");
    std::vector<FrequencyProfile::Segment> segments;
    if (segs.empty()) fail(ErrorCode::kConfigInvalid, "'segments' must not be empty");
    for (const json& s : segs) {
      const double duration = number_field(s, "duration");
      if (!(duration > 0.0)) fail(ErrorCode::kConfigInvalid, "segment 'duration' must be positive");
      segments.push_back({duration, number_field(s, "omega_sq")});
    }
    bool periodic = false;
    if (doc.contains("periodic")) {
      if (!doc.at("periodic").is_boolean()) fail(ErrorCode::kConfigInvalid, "'periodic' must be a boolean");
      periodic = doc.at("periodic").get<bool>();
    }
    return FrequencyProfile::piecewise(std::move(segments), periodic);
  }
  fail(ErrorCode::kConfigInvalid, "unknown profile kind '" + kind + "'");
}

std::string state_to_json(const GaussianState& state) {
  const std::vector<double> mean(state.mean().data(), state.mean().data() + state.mean().size());
  return "{\n  \"n_modes\": " + std::to_string(state.n_modes()) + ",\n  \"mean\": " + json_array(mean) +
         ",\n  \"dispersion_upper\": " + json_array(state.upper_triangle()) + "\n}\n";
}

std::string propagator_to_json(const PropagatorReal& prop) {
  const std::vector<double> delta(prop.delta().data(), prop.delta().data() + prop.delta().size());
  return "{\n  \"n_modes\": " + std::to_string(prop.n_modes()) + ",\n  \"time\": " + json_number(prop.time()) +
         ",\n  \"lambda\": " + matrix_json(prop.lambda()) + ",\n  \"delta\": " + json_array(delta) + "\n}\n";
}

std::string format_number(double v) {
  // Collapse -0 so that sign-of-zero noise cannot break byte identity.
  if (v == 0.0) v = 0.0;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

std::string json_number(double v) { return std::isfinite(v) ? format_number(v) : "null"; }

std::string json_array(std::span<const double> values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ", ";
    out += json_number(values[i]);
  }
  return out + "]";
}

}  // namespace phasespace
