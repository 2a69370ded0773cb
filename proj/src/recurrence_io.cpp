#include "mvop/recurrence_io.hpp"

#include <fstream>
#include <string>

#include "mvop/errors.hpp"

namespace mvop {

using nlohmann::json;

namespace {

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j, Eigen::Index rows, Eigen::Index cols, const std::string& what) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows)
    throw SchemaError(what + ": expected " + std::to_string(rows) + " rows");
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw SchemaError(what + ": expected " + std::to_string(cols) + " columns");
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto& v = row[static_cast<std::size_t>(c)];
      if (!v.is_number()) throw SchemaError(what + ": non-numeric entry");
      m(r, c) = v.get<double>();
    }
  }
  return m;
}

template <typename T>
T required(const json& doc, const char* key) {
  if (!doc.contains(key)) throw SchemaError(std::string("missing field '") + key + "'");
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception&) {
    throw SchemaError(std::string("field '") + key + "' has the wrong type");
  }
}

}  // namespace

json recurrence_to_json(const RecurrenceData& rec) {
  if (!rec.all_finite()) throw DomainError("cannot serialise non-finite recurrence matrices");
  json doc;
  doc["format_version"] = kRecurrenceFormatVersion;
  doc["d"] = rec.dim();
  doc["N"] = rec.max_degree();
  doc["ordering"] = "graded-lex";
  doc["lambda_order"] = "non-increasing";
  json A = json::array(), B = json::array();
  for (int n = 1; n <= rec.max_degree(); ++n) {
    json an = json::array(), bn = json::array();
    for (int i = 0; i < rec.dim(); ++i) {
      an.push_back(matrix_to_json(rec.A(n, i)));
      bn.push_back(matrix_to_json(rec.B(n, i)));
    }
    A.push_back(std::move(an));
    B.push_back(std::move(bn));
  }
  doc["A"] = std::move(A);
  doc["B"] = std::move(B);
  if (rec.max_degree() > 0 && rec.canonical()) {
    json lam = json::array();
    for (int n = 1; n <= rec.max_degree(); ++n) {
      json v = json::array();
      const auto& l = rec.lambda(n);
      for (Eigen::Index k = 0; k < l.size(); ++k) v.push_back(l(k));
      lam.push_back(std::move(v));
    }
    doc["Lambda"] = std::move(lam);
  }
  return doc;
}

RecurrenceData recurrence_from_json(const json& doc) {
  if (!doc.is_object()) throw SchemaError("recurrence document must be a JSON object");
  if (required<int>(doc, "format_version") != kRecurrenceFormatVersion) throw SchemaError("unsupported format_version");
  if (required<std::string>(doc, "ordering") != "graded-lex") throw SchemaError("unsupported ordering");
  if (required<std::string>(doc, "lambda_order") != "non-increasing") throw SchemaError("unsupported lambda_order");
  const int d = required<int>(doc, "d");
  const int N = required<int>(doc, "N");
  if (d < 1 || N < 0) throw SchemaError("d must be >= 1 and N >= 0");

  RecurrenceData rec(d, N);
  const auto& A = doc.contains("A") ? doc.at("A") : throw SchemaError("missing field 'A'");
  const auto& B = doc.contains("B") ? doc.at("B") : throw SchemaError("missing field 'B'");
  if (!A.is_array() || static_cast<int>(A.size()) != N) throw SchemaError("A must list N degrees");
  if (!B.is_array() || static_cast<int>(B.size()) != N) throw SchemaError("B must list N degrees");
  for (int n = 1; n <= N; ++n) {
    const auto& an = A[static_cast<std::size_t>(n - 1)];
    const auto& bn = B[static_cast<std::size_t>(n - 1)];
    if (!an.is_array() || static_cast<int>(an.size()) != d || !bn.is_array() || static_cast<int>(bn.size()) != d)
      throw SchemaError("degree " + std::to_string(n) + " must list d matrices");
    const Eigen::Index rows = rec.level_size(n - 1), cols = rec.level_size(n);
    for (int i = 0; i < d; ++i) {
      const std::string tag = "degree " + std::to_string(n) + ", coordinate " + std::to_string(i + 1);
      rec.A(n, i) = matrix_from_json(an[static_cast<std::size_t>(i)], rows, rows, "A " + tag);
      rec.B(n, i) = matrix_from_json(bn[static_cast<std::size_t>(i)], rows, cols, "B " + tag);
    }
  }
  if (doc.contains("Lambda")) {
    const auto& lam = doc.at("Lambda");
    if (!lam.is_array() || static_cast<int>(lam.size()) != N) throw SchemaError("Lambda must list N degrees");
    for (int n = 1; n <= N; ++n) {
      const Eigen::MatrixXd v =
          matrix_from_json(json::array({lam[static_cast<std::size_t>(n - 1)]}), 1, rec.level_size(n), "Lambda");
      rec.set_lambda(n, v.row(0).transpose());
    }
  }
  return rec;
}

void serialize_recurrence(const RecurrenceData& rec, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << recurrence_to_json(rec).dump(1) << '\n';
  if (!out) throw Error("failed writing " + path.string());
}

RecurrenceData deserialize_recurrence(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
  return recurrence_from_json(doc);
}

}  // namespace mvop
