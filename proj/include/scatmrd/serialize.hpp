#pragma once

// JSON and plain-text serialization of every artifact the tools exchange:
// field towers (tower/1), subspaces (subspace/1), search traces (trace/1),
// construction records (construction/1), rank-metric codes (code/1) and
// analysis reports (report/1).  JSON is emitted with alphabetically sorted
// keys and fixed indentation, so equal objects serialize to equal bytes,
// and files are written atomically (temp + rename).  Every record carries a
// "format" version tag which readers validate.
//
// The plain-text matrix export ("rankcode-matrix-export v1") prints one
// codeword block per canonical generator, one matrix row per line, entries
// as base-field indices.  For h > 1 the header additionally pins the
// minimal polynomial of the F_q generator gamma, because index arithmetic
// is defined through gamma; re-import refuses a file whose gamma semantics
// differ from the canonically rebuilt field.

#include <json.hpp>

#include <memory>
#include <stdexcept>
#include <string>

#include "scatmrd/constructions.hpp"
#include "scatmrd/fields.hpp"
#include "scatmrd/linmaps.hpp"
#include "scatmrd/linsets.hpp"
#include "scatmrd/rankcodes.hpp"

namespace scatmrd {

using json = nlohmann::json;

inline constexpr const char* kTowerFormat = "tower/1";
inline constexpr const char* kSubspaceFormat = "subspace/1";
inline constexpr const char* kTraceFormat = "trace/1";
inline constexpr const char* kConstructionFormat = "construction/1";
inline constexpr const char* kCodeFormat = "code/1";
inline constexpr const char* kReportFormat = "report/1";
inline constexpr const char* kMatrixExportHeader = "rankcode-matrix-export v1";

// Thrown for unreadable files, malformed documents and format-tag
// mismatches, so callers can separate I/O failures from domain errors.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---- fields ----------------------------------------------------------

// {declared_degrees (p-units), format, h, M, modulus: [c_0..c_M], p}
json tower_to_json(const Tower& tw);
std::shared_ptr<const Tower> tower_from_json(const json& j);

// Elements serialize as their coefficient vector [c_0, ..., c_{M-1}].
json element_to_json(const Element& x);
Element element_from_json(const json& j, const Tower& tw);

// ---- linear maps -----------------------------------------------------

// {base_q_degree, coeffs: [coeff vector, ...]}; the tower is supplied by
// the enclosing record.
json lp_to_json(const LinearizedPoly& f);
LinearizedPoly lp_from_json(const json& j, std::shared_ptr<const Tower> tw);

// {basis: "power", entries: [h F_p digits per entry, row-major], m, n, q}
json fqmat_to_json(const FqMat& a);
FqMat fqmat_from_json(const json& j, std::shared_ptr<const Tower> tw);

// ---- subspaces -------------------------------------------------------

// {ambient: {components, h, n, p, r}, basis: [[F_p coords], ...], format,
//  k, tower}.  The basis rows are the coordinates of the canonical
// F_q-basis, so equal subspaces serialize identically.
json subspace_to_json(const Subspace& u);
Subspace subspace_from_json(const json& j);

// ---- traces and construction records ---------------------------------

json trace_to_json(const SearchTrace& t);
SearchTrace trace_from_json(const json& j);

// {format, kind, params, subspace, trace} (+ aux for w-example).
json plane_build_to_json(const PlaneBuild& b);
json monomial_build_to_json(const std::string& kind, const MonomialBuild& b);
json pseudoregulus_build_to_json(const QParams& q, int n, int t_pairs, int s,
                                 const Subspace& u);
json w_example_build_to_json(const QParams& q, int n, int k,
                             const WExampleBuild& b);

// Re-hydrate builder parameters from a construction record; the elements
// are transported into the tower embedded in the record's subspace.
PlaneConstructionParams plane_params_from_json(const json& j);
MonomialParams monomial_params_from_json(const json& j);

// The subspace of either a bare subspace/1 record or a construction/1
// record (its "subspace" member).
Subspace subspace_from_document(const json& j);

// ---- codes ------------------------------------------------------------

// {d_min?, dim, format, generators: [flat row-major entry digits, ...],
//  h, m, n, p, provenance, tower, verification_status}
json code_to_json(const RankCode& c);
RankCode code_from_json(const json& j);

VerifStatus verif_status_from_string(const std::string& s);
Provenance provenance_from_string(const std::string& s);

// ---- reports ----------------------------------------------------------

// {count, format, histogram, kind: "linear_set", max_weight, scattered,
//  witness?}; the witness (F_p coordinates) is emitted only when the set
// is not scattered.
json analysis_to_json(const LinearSetAnalysis& a, const Subspace& u);

// ---- plain-text matrix export ------------------------------------------

std::string export_matrices(const RankCode& c);
RankCode import_matrices(const std::string& text);

// ---- files -------------------------------------------------------------

// dump with sorted keys, single-space indent, trailing newline.
std::string json_to_string(const json& j);
std::string read_file(const std::string& path);
void write_file_atomic(const std::string& path, const std::string& content);
json read_json_file(const std::string& path);

}  // namespace scatmrd
