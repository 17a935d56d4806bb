#ifndef PPDE_SERIALIZE_HPP
#define PPDE_SERIALIZE_HPP

#include <json.hpp>

#include "ppde/comparison.hpp"
#include "ppde/solver.hpp"

namespace ppde {

using ojson = nlohmann::ordered_json;

ojson grid_to_json(const TimeGrid& tg);
ojson grid_to_json(const SpatialGrid& q);

/// {"k": int, "values": [[f64; d], ...]} with one point per time node.
ojson stub_to_json(const PathStub& w);
PathStub stub_from_json(const nlohmann::json& j, const TimeGrid& tg);

ojson jet_to_json(const Jet& jet);
Jet jet_from_json(const nlohmann::json& j);

ojson ishii_to_json(const IshiiCertificate& cert);
IshiiCertificate ishii_from_json(const nlohmann::json& j);

ojson ledger_to_json(const std::vector<LedgerEntry>& ledger);
ojson certificate_to_json(const MaximizationResult& r);
ojson comparison_to_json(const ComparisonReport& rep);

/// "check_name,lhs,rhs,margin,pass" rows, %.12g formatting.
std::string ledger_to_csv(const std::vector<LedgerEntry>& ledger);
std::string certificate_to_csv(const MaximizationResult& r);

/// One "key-tuple<TAB>value" JSON line per lattice node, map order.
std::string solution_to_jsonl(const LatticeSolution& sol);

std::string format_double(double v);  // %.12g

}  // namespace ppde

#endif
