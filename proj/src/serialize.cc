#include "prem/serialize.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <string>

#include "prem/errors.h"

namespace prem {

namespace {

int read_qubits(const json& j) {
  if (!j.is_object() || !j.contains("n") || !j.at("n").is_number_integer()) {
    throw ValidationError("document lacks an integer 'n' field");
  }
  const int n = j.at("n").get<int>();
  check_qubit_count(n);
  return n;
}

void check_order_field(const json& j) {
  if (j.contains("order") && j.at("order") != "numeric") {
    throw ValidationError("unsupported index order '" + j.at("order").dump() +
                          "'; only \"numeric\" is defined");
  }
}

std::vector<double> read_data(const json& j, std::size_t expected) {
  if (!j.contains("data") || !j.at("data").is_array()) {
    throw ValidationError("document lacks a 'data' array");
  }
  const json& data = j.at("data");
  if (data.size() != expected) {
    throw ValidationError("'data' has " + std::to_string(data.size()) +
                          " values, expected " + std::to_string(expected));
  }
  std::vector<double> out;
  out.reserve(expected);
  for (const json& v : data) {
    if (!v.is_number()) throw ValidationError("'data' holds a non-numeric value");
    out.push_back(v.get<double>());
  }
  return out;
}

Flavor parse_flavor(const std::string& s) {
  for (Flavor f : {Flavor::kPrior, Flavor::kObserved, Flavor::kMitigated}) {
    if (s == to_string(f)) return f;
  }
  throw ValidationError("unknown vector flavor '" + s + "'");
}

}  // namespace

json to_json(const ResponseMatrix& r) {
  const Matrix& m = r.matrix();
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index row = 0; row < m.rows(); ++row) {
    for (Eigen::Index col = 0; col < m.cols(); ++col) data.push_back(m(row, col));
  }
  return json{{"n", r.num_qubits()}, {"order", "numeric"}, {"data", std::move(data)}};
}

ResponseMatrix response_from_json(const json& j) {
  const int n = read_qubits(j);
  if (n > kMaxDenseQubits) {
    throw ValidationError("dense response files are limited to " +
                          std::to_string(kMaxDenseQubits) + " qubits");
  }
  check_order_field(j);
  const std::size_t dim = dimension(n);
  const std::vector<double> data = read_data(j, dim * dim);
  Matrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t row = 0; row < dim; ++row) {
    for (std::size_t col = 0; col < dim; ++col) {
      m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = data[row * dim + col];
    }
  }
  Provenance prov;
  prov.model = "file";
  return ResponseMatrix(n, std::move(m), std::move(prov));
}

json to_json(const ProbabilityVector& p) {
  const Vector& v = p.values();
  return json{{"n", p.num_qubits()},
              {"order", "numeric"},
              {"flavor", to_string(p.flavor())},
              {"data", std::vector<double>(v.data(), v.data() + v.size())}};
}

ProbabilityVector vector_from_json(const json& j, Flavor fallback) {
  const int n = read_qubits(j);
  check_order_field(j);
  const std::vector<double> data = read_data(j, dimension(n));
  Flavor flavor = fallback;
  if (j.contains("flavor")) flavor = parse_flavor(j.at("flavor").get<std::string>());
  Vector v = Eigen::Map<const Vector>(data.data(), static_cast<Eigen::Index>(data.size()));
  return ProbabilityVector(n, std::move(v), flavor);
}

json to_json(const WeightBand& band) {
  json entries = json::array();
  for (const BandEntry& e : band.entries()) entries.push_back(json::array({e.row, e.col, e.value}));
  return json{{"n", band.num_qubits()}, {"j", band.order()}, {"entries", std::move(entries)}};
}

WeightBand band_from_json(const json& j) {
  const int n = read_qubits(j);
  if (!j.contains("j") || !j.at("j").is_number_integer()) {
    throw ValidationError("band document lacks an integer 'j' field");
  }
  if (!j.contains("entries") || !j.at("entries").is_array()) {
    throw ValidationError("band document lacks an 'entries' array");
  }
  std::vector<BandEntry> entries;
  entries.reserve(j.at("entries").size());
  for (const json& e : j.at("entries")) {
    if (!e.is_array() || e.size() != 3 || !e[0].is_number_unsigned() ||
        !e[1].is_number_unsigned() || !e[2].is_number()) {
      throw ValidationError("band entries must be [row, col, value] triples");
    }
    entries.push_back({e[0].get<std::uint32_t>(), e[1].get<std::uint32_t>(),
                       e[2].get<double>()});
  }
  return WeightBand(n, j.at("j").get<int>(), std::move(entries));
}

BandDecomposition bands_from_json(std::span<const json> docs) {
  std::map<int, WeightBand> by_order;
  auto add = [&](const json& doc) {
    WeightBand band = band_from_json(doc);
    const int order = band.order();
    if (!by_order.emplace(order, std::move(band)).second) {
      throw ValidationError("band " + std::to_string(order) + " given twice");
    }
  };
  for (const json& doc : docs) {
    if (doc.is_array()) {
      for (const json& d : doc) add(d);
    } else {
      add(doc);
    }
  }
  if (by_order.empty()) throw ValidationError("no bands supplied");
  std::vector<WeightBand> bands;
  int n = by_order.begin()->second.num_qubits();
  int expected = 0;
  for (auto& [order, band] : by_order) {
    if (order != expected) {
      throw ValidationError("bands must cover 0..w_max; band " + std::to_string(expected) +
                            " is missing");
    }
    if (band.num_qubits() != n) throw ValidationError("bands disagree on n");
    bands.push_back(std::move(band));
    ++expected;
  }
  return BandDecomposition(n, std::move(bands));
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << doc.dump() << '\n';
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace prem
