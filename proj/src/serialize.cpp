#include "ppde/serialize.hpp"

#include <cstdio>

namespace ppde {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

ojson grid_to_json(const TimeGrid& tg) {
  return ojson{{"horizon", tg.horizon}, {"steps", tg.steps}};
}

ojson grid_to_json(const SpatialGrid& q) {
  ojson lo = ojson::array(), hi = ojson::array();
  for (int i = 0; i < q.dim(); ++i) {
    lo.push_back(q.lower[i]);
    hi.push_back(q.upper[i]);
  }
  return ojson{{"lower", lo}, {"upper", hi}, {"points", q.points_per_axis}};
}

ojson stub_to_json(const PathStub& w) {
  ojson vals = ojson::array();
  for (int j = 0; j <= w.k(); ++j) {
    ojson pt = ojson::array();
    for (int i = 0; i < w.dim(); ++i) pt.push_back(w.values(i, j));
    vals.push_back(pt);
  }
  return ojson{{"k", w.k()}, {"values", vals}};
}

PathStub stub_from_json(const nlohmann::json& j, const TimeGrid& tg) {
  if (!j.contains("values") || !j.at("values").is_array() || j.at("values").empty())
    throw Error(Err::ConfigError, "stub needs a non-empty values array");
  const auto& vals = j.at("values");
  const std::size_t d = vals.front().size();
  Mat m(static_cast<int>(d), static_cast<int>(vals.size()));
  for (std::size_t col = 0; col < vals.size(); ++col) {
    if (vals[col].size() != d)
      throw Error(Err::ConfigError, "stub values have inconsistent dimension");
    for (std::size_t row = 0; row < d; ++row)
      m(static_cast<int>(row), static_cast<int>(col)) = vals[col][row].get<double>();
  }
  PathStub w(tg, std::move(m));
  if (j.contains("k") && j.at("k").get<int>() != w.k())
    throw Error(Err::ConfigError, "stub k disagrees with its values length");
  return w;
}

namespace {

ojson mat_to_json(const Mat& m) {
  ojson rows = ojson::array();
  for (int i = 0; i < m.rows(); ++i) {
    ojson row = ojson::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

Mat mat_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw Error(Err::ConfigError, "expected a matrix");
  const int rows = static_cast<int>(j.size());
  const int cols = static_cast<int>(j.front().size());
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (static_cast<int>(j[static_cast<std::size_t>(i)].size()) != cols)
      throw Error(Err::ConfigError, "ragged matrix");
    for (int c = 0; c < cols; ++c)
      m(i, c) = j[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)].get<double>();
  }
  return m;
}

Vec vec_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw Error(Err::ConfigError, "expected a vector");
  Vec v(static_cast<int>(j.size()));
  for (int i = 0; i < v.size(); ++i) v[i] = j[static_cast<std::size_t>(i)].get<double>();
  return v;
}

ojson vec_to_json(const Vec& v) {
  ojson a = ojson::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

}  // namespace

ojson jet_to_json(const Jet& jet) {
  return ojson{{"a", jet.a}, {"p", vec_to_json(jet.p)}, {"X", mat_to_json(jet.X)}};
}

Jet jet_from_json(const nlohmann::json& j) {
  Jet jet;
  jet.a = j.at("a").get<double>();
  jet.p = vec_from_json(j.at("p"));
  jet.X = mat_from_json(j.at("X"));
  if (jet.X.rows() != jet.p.size() || jet.X.cols() != jet.p.size())
    throw Error(Err::ConfigError, "jet X dimension disagrees with p");
  return jet;
}

ojson ishii_to_json(const IshiiCertificate& cert) {
  return ojson{{"alpha", cert.alpha}, {"eps", cert.eps},   {"A", mat_to_json(cert.A)},
               {"X1", mat_to_json(cert.X1)}, {"X2", mat_to_json(cert.X2)},
               {"b1", cert.b1},       {"b2", cert.b2},     {"dt_phi", cert.dt_phi}};
}

IshiiCertificate ishii_from_json(const nlohmann::json& j) {
  IshiiCertificate cert;
  cert.alpha = j.value("alpha", 1.0);
  cert.eps = j.at("eps").get<double>();
  cert.A = mat_from_json(j.at("A"));
  cert.X1 = mat_from_json(j.at("X1"));
  cert.X2 = mat_from_json(j.at("X2"));
  cert.b1 = j.value("b1", 0.0);
  cert.b2 = j.value("b2", 0.0);
  cert.dt_phi = j.value("dt_phi", 0.0);
  return cert;
}

ojson ledger_to_json(const std::vector<LedgerEntry>& ledger) {
  ojson arr = ojson::array();
  for (const auto& e : ledger)
    arr.push_back(ojson{{"name", e.name},
                        {"lhs", e.lhs},
                        {"rhs", e.rhs},
                        {"margin", e.margin},
                        {"pass", e.pass},
                        {"required", e.required}});
  return arr;
}

ojson certificate_to_json(const MaximizationResult& r) {
  ojson cert = ojson::array();
  for (const auto& c : r.certificate) cert.push_back(ojson{{"m", c.m}, {"mbar", c.mbar}});
  ojson out{{"method", r.method == MaxMethod::Frozen ? "frozen" : "brute_force"},
            {"value", r.value},
            {"iterations", r.iterations},
            {"certificate", cert},
            {"maximizer", stub_to_json(r.maximizer)}};
  if (r.is_pair) out["maximizer2"] = stub_to_json(r.maximizer2);
  return out;
}

ojson comparison_to_json(const ComparisonReport& rep) {
  ojson out{{"verdict", verdict_name(rep.verdict)},
            {"c", rep.c},
            {"m_tilde", rep.m_tilde},
            {"alpha_used", rep.alpha_used},
            {"all_required_pass", rep.all_required_pass()},
            {"ledger", ledger_to_json(rep.ledger)}};
  if (rep.has_witness) out["witness"] = stub_to_json(rep.witness);
  if (rep.has_certificate) out["certificate"] = certificate_to_json(rep.certificate);
  if (rep.has_ishii) out["ishii"] = ishii_to_json(rep.ishii);
  if (!rep.note.empty()) out["note"] = rep.note;
  return out;
}

std::string ledger_to_csv(const std::vector<LedgerEntry>& ledger) {
  std::string csv = "check_name,lhs,rhs,margin,pass\n";
  for (const auto& e : ledger) {
    csv += e.name + "," + format_double(e.lhs) + "," + format_double(e.rhs) + "," +
           format_double(e.margin) + "," + (e.pass ? "true" : "false") + "\n";
  }
  return csv;
}

std::string certificate_to_csv(const MaximizationResult& r) {
  std::string csv = "i,m,mbar\n";
  for (std::size_t i = 0; i < r.certificate.size(); ++i)
    csv += std::to_string(i) + "," + format_double(r.certificate[i].m) + "," +
           format_double(r.certificate[i].mbar) + "\n";
  return csv;
}

std::string solution_to_jsonl(const LatticeSolution& sol) {
  std::string out;
  for (const auto& [key, value] : sol.values) {
    ojson k = ojson::array();
    for (int i : key) k.push_back(i);
    out += ojson{{"key", k}, {"value", value}}.dump();
    out += "\n";
  }
  return out;
}

}  // namespace ppde
