#ifndef PREM_SERIALIZE_H_
#define PREM_SERIALIZE_H_

// JSON forms shared by the CLI, the harness cache and test fixtures.
//
//   matrix: {"n": int, "order": "numeric", "data": [row-major, 4^n values]}
//   vector: {"n": int, "order": "numeric", "data": [2^n values],
//            "flavor": "prior"|"observed"|"mitigated"}   (flavor optional)
//   band:   {"n": int, "j": int, "entries": [[row, col, value], ...]}

#include <filesystem>
#include <span>
#include <vector>

#include <json.hpp>

#include "prem/decompose.h"
#include "prem/response.h"

namespace prem {

using json = nlohmann::json;

json to_json(const ResponseMatrix& r);
ResponseMatrix response_from_json(const json& j);

json to_json(const ProbabilityVector& p);
// `fallback` applies when the document carries no flavor.
ProbabilityVector vector_from_json(const json& j, Flavor fallback = Flavor::kObserved);

json to_json(const WeightBand& band);
WeightBand band_from_json(const json& j);

// Accepts a single band object or an array of them; bands are ordered by j and
// must cover 0..w_max without gaps.
BandDecomposition bands_from_json(std::span<const json> docs);

// Throw IoError with the path on failure; malformed JSON raises
// ValidationError.
json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& doc);

}  // namespace prem

#endif  // PREM_SERIALIZE_H_
