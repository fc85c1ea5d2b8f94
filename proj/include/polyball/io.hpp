#pragma once

// JSON and operator file formats.
//
//  spec      {"k":2,"n":[2,2],"m":[2,1],"L":[3,3],"d":1}
//  symbol    [{"alpha":["1",""],"beta":["","2"],"A":[[[re,im],...],...]}, ...]
//  point     {"dim":2,"factors":[[M_11, M_12], [M_21]]}, M as [[[re,im],...],...] rows
//  operator  one JSON header line, then either "row col re im" lines (coo) or
//            raw little-endian float64 (re, im) pairs in row-major order (dense).

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "polyball/berezin.hpp"
#include "polyball/toeplitz.hpp"

namespace polyball {

using Json = nlohmann::json;

TruncationSpec spec_from_json(const Json& j);
Json spec_to_json(const TruncationSpec& spec);

Json matrix_to_json(const DenseOp& m);
DenseOp matrix_from_json(const Json& j);

Json symbol_to_json(const Symbol& s);
Symbol symbol_from_json(const TruncationSpec& spec, const Json& j);

Json point_to_json(const PointTuple& x);
PointTuple point_from_json(const Json& j);

Json toeplitz_report_to_json(const ToeplitzReport& r);

enum class OperatorFormat { Coo, Dense };

/// Header naming the spec and the basis order (one multiword label per index).
Json operator_header(const GradedBasis& basis, OperatorFormat format);

void write_operator(std::ostream& out, const GradedBasis& basis, const DenseOp& t, OperatorFormat format);
/// Reads either format; the header spec must match `basis`.
DenseOp read_operator(std::istream& in, const GradedBasis& basis);

void write_operator_file(const std::string& path, const GradedBasis& basis, const DenseOp& t, OperatorFormat format);
DenseOp read_operator_file(const std::string& path, const GradedBasis& basis);

}  // namespace polyball
