#pragma once

// JSON and text serialization for clusters, forms, matrices and reports.

#include "pcred/pipeline.hpp"

#include <json.hpp>

namespace pcred {

using Json = nlohmann::ordered_json;

// Cluster: {"n": int, "points": [[coord, ...], ...]} where each coordinate is
// [re, im] (decimal strings or numbers) or a single real literal, which may
// be an exact integer or rational string.
PointCluster cluster_from_json(const Json& j);
Json to_json(const PointCluster& c, int digits = 0);

// {"n": int, "matrix": [[[re, im], ...], ...]}; n is the size minus one.
HermitianForm hermitian_from_json(const Json& j);
Json to_json(const HermitianForm& q, int digits = 0);
Json to_json(const CovariantResult& r, int digits = 0);

// {"n": int, "matrix": [[decimal strings]]}
GramMatrix gram_from_json(const Json& j);
Json to_json(const GramMatrix& g, int digits = 0);
Json real_matrix_json(const RMatrix& m, int digits = 0);

// Integer rows.
UnimodularTransform transform_from_json(const Json& j);
Json to_json(const UnimodularTransform& u);

// {"nvars": int, "terms": [{"exp": [ints], "coeff": "decimal-int"}]}; a plain
// JSON string is parsed with the text syntax.
MultiPoly poly_from_json(const Json& j, std::size_t nvars = 0);
Json to_json(const MultiPoly& p);

Json to_json(const StabilityClass& s);
Json to_json(const ThetaResult& t, int digits = 0);

// Report with "schema": "cluster-reduce/1".
Json to_json(const ReductionReport& r, int digits = 0);
std::string to_text(const ReductionReport& r, int digits = 20);

}  // namespace pcred
