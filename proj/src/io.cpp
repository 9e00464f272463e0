#include "fuzzy/io.hpp"

#include <boost/archive/iterators/base64_from_binary.hpp>
#include <boost/archive/iterators/binary_from_base64.hpp>
#include <boost/archive/iterators/transform_width.hpp>

#include <bit>
#include <cstdint>

namespace fz {

namespace {

using namespace boost::archive::iterators;
using ToBase64 = base64_from_binary<transform_width<std::string::const_iterator, 6, 8>>;
using FromBase64 = transform_width<binary_from_base64<std::string::const_iterator>, 8, 6>;

void put_le(std::string& out, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  for (int k = 0; k < 8; ++k) out.push_back(static_cast<char>((bits >> (8 * k)) & 0xff));
}

double get_le(const std::string& in, size_t pos) {
  std::uint64_t bits = 0;
  for (int k = 0; k < 8; ++k) bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[pos + k])) << (8 * k);
  return std::bit_cast<double>(bits);
}

}  // namespace

std::string encode_matrix(const Mat& m) {
  std::string raw;
  raw.reserve(static_cast<size_t>(m.size()) * 16);
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) put_le(raw, m(i, j).real()), put_le(raw, m(i, j).imag());
  std::string out(ToBase64(raw.begin()), ToBase64(raw.end()));
  out.append((3 - raw.size() % 3) % 3, '=');
  return out;
}

Mat decode_matrix(const std::string& text, Eigen::Index rows, Eigen::Index cols) {
  std::string s = text;
  size_t pad = 0;
  while (!s.empty() && s.back() == '=') s.pop_back(), ++pad;
  if (pad > 2) throw Error("malformed base64 padding");
  std::string raw;
  try {
    raw.assign(FromBase64(s.begin()), FromBase64(s.end()));
  } catch (const std::exception&) {
    throw Error("malformed base64 payload");
  }
  const size_t need = static_cast<size_t>(rows * cols) * 16;
  if (raw.size() != need) throw Error("matrix payload does not match its declared shape");
  Mat m(rows, cols);
  size_t p = 0;
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i, p += 16) m(i, j) = cplx(get_le(raw, p), get_le(raw, p + 8));
  return m;
}

nlohmann::json export_irrep(const Irrep& r) {
  nlohmann::json j;
  j["format"] = "fuzzy-irrep";
  j["version"] = 1;
  j["algebra"] = r.alg->name();
  j["hw"] = r.hw;
  j["dim"] = r.dim();
  j["layout"] = "column-major complex128 (re, im) little-endian, base64";
  auto& g = j["generators"] = nlohmann::json::array();
  for (const auto& m : r.J) g.push_back(encode_matrix(m));
  j["hw_vector"] = encode_matrix(r.hw_vector);
  return j;
}

ImportedRep import_irrep(const nlohmann::json& j) {
  if (j.value("format", "") != "fuzzy-irrep") throw Error("not an exported irreducible representation");
  if (j.value("version", 0) != 1) throw Error("unsupported export version");
  ImportedRep out;
  out.rep.alg = algebra_data(parse_diagram(j.at("algebra").get<std::string>()));
  out.hw = j.at("hw").get<Weight>();
  const int d = j.at("dim").get<int>();
  const auto& g = j.at("generators");
  if (static_cast<int>(g.size()) != out.rep.alg->dim) throw Error("generator count does not match the algebra");
  for (const auto& s : g) out.rep.J.push_back(decode_matrix(s.get<std::string>(), d, d));
  out.hw_vector = decode_matrix(j.at("hw_vector").get<std::string>(), d, 1);
  out.rep.provenance = "imported irrep " + j.at("algebra").get<std::string>() + " " + to_string(out.hw);
  return out;
}

}  // namespace fz
