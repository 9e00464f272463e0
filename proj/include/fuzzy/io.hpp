#pragma once

#include "fuzzy/repn.hpp"

#include <nlohmann/json.hpp>

namespace fz {

/// Byte layout of exported matrices: column-major, each entry as two IEEE-754
/// binary64 values (real, imaginary) in little-endian order, then base64.
std::string encode_matrix(const Mat& m);
Mat decode_matrix(const std::string& text, Eigen::Index rows, Eigen::Index cols);

/// {"format":"fuzzy-irrep","version":1,"algebra","hw","dim","layout",
///  "generators":[base64...],"hw_vector":base64}
nlohmann::json export_irrep(const Irrep& r);

struct ImportedRep {
  RepSpace rep;
  Weight hw;
  Vec hw_vector;
};

ImportedRep import_irrep(const nlohmann::json& j);

}  // namespace fz
