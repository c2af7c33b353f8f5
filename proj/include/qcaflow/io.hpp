// Copyright 2026 The qcaflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// JSON and CSV forms of the result records. Complex matrices are written
// as {"re": [[...]], "im": [[...]]}. Numbers use shortest round-trip
// formatting, independent of the C locale.
#pragma once

#include <json.hpp>
#include <string>

#include "qcaflow/flow.hpp"
#include "qcaflow/renorm.hpp"
#include "qcaflow/scan.hpp"
#include "qcaflow/support.hpp"

namespace qcaflow::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "qcaflow/1";

Json to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);
// Reads {"re": ..., "im": ...} from a file; ConfigError on bad content.
ComplexMatrix read_matrix_file(const std::string& path);

Json to_json(const QubitQCAParams& p);
Json to_json(const Tolerances& t);
Json to_json(const TileProjection& t);
Json to_json(const RenormResult& r, bool include_matrix = true);
Json to_json(const PointReport& r);
Json to_json(const ScanReport& r);
Json to_json(const IndexResult& r);
Json to_json(const FlowState& s);
Json to_json(const FlowTrajectory& t);

std::string format_double(double v);

// phi,theta,nx,ny,nz,predicate,numeric,witness,max_residual
std::string scan_csv(const ScanReport& r);
// step,phi,theta,case,projection
std::string trajectory_csv(const FlowTrajectory& t);

}  // namespace qcaflow::io
