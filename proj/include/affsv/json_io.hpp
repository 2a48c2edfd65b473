#pragma once

// JSON encoding of matrices, measures, operators and reports. Matrices are
// row-major arrays of rows. Parsing errors are reported as ConfigError.

#include <json.hpp>

#include <complex>
#include <string>

#include "affsv/params.hpp"
#include "affsv/riccati.hpp"
#include "affsv/semigroup.hpp"
#include "affsv/simulate.hpp"
#include "affsv/transform.hpp"

namespace affsv {

using Json = nlohmann::ordered_json;

Json to_json(const SymMatrix& m);
Json to_json(const HVector& v);
Json to_json(const JumpMeasureSpec& spec);
Json to_json(const LinearMap& b);
Json to_json(const Generator& gen);
Json to_json(const NoiseSpec& noise);
Json to_json(const ValidationReport& rep);
Json to_json(const Complex& z);
Json to_json(const McEstimate& mc);
Json to_json(const CompareReport& c);
Json to_json(const TransformQuery& q);
Json to_json(const RiccatiSolution& sol);
Json to_json(const MomentReport& m);

Dense dense_from_json(const Json& j, const std::string& what);
SymMatrix sym_from_json(const Json& j, const std::string& what);
PsdMatrix psd_from_json(const Json& j, const std::string& what);
HVector vector_from_json(const Json& j, const std::string& what);
JumpMeasureSpec jumps_from_json(const Json& j);
/// `jumps` supplies mu for the compensating ray terms ("compensate_mu").
LinearMap linear_map_from_json(const Json& j, Index dim, const JumpMeasureSpec& jumps);
Generator generator_from_json(const Json& j, Index dim);
NoiseSpec noise_from_json(const Json& j);
/// Reads "b", "B" and "jumps" from a config object.
AdmissibleParams params_from_json(const Json& j);
TransformQuery query_from_json(const Json& j, Index dim);

}  // namespace affsv
