#include "uncertainty/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>

namespace unc {

namespace {

std::vector<Complexd> parse_entries(const nlohmann::json& doc, std::size_t expected) {
  if (!doc.is_object() || !doc.contains("dim") || !doc.contains("entries")) {
    throw Error(ErrorKind::InvalidArgument, "expected an object with 'dim' and 'entries'");
  }
  const auto& entries = doc.at("entries");
  if (!entries.is_array() || entries.size() != expected) {
    throw Error(ErrorKind::DimensionMismatch,
                "expected " + std::to_string(expected) + " entries");
  }
  std::vector<Complexd> out;
  out.reserve(expected);
  for (const auto& e : entries) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      throw Error(ErrorKind::InvalidArgument, "each entry must be a [re, im] pair");
    }
    const Complexd z(e[0].get<double>(), e[1].get<double>());
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw Error(ErrorKind::InvalidArgument, "non-finite entry");
    }
    out.push_back(z);
  }
  return out;
}

int parse_dim(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("dim") || !doc.at("dim").is_number_integer()) {
    throw Error(ErrorKind::InvalidArgument, "'dim' must be an integer");
  }
  const int dim = doc.at("dim").get<int>();
  if (dim < 1) throw Error(ErrorKind::OutOfRange, "'dim' must be positive");
  return dim;
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::InvalidArgument, path.string() + ": " + e.what());
  }
}

}  // namespace

CMatrixd observable_from_json(const nlohmann::json& doc) {
  const int dim = parse_dim(doc);
  const auto entries = parse_entries(doc, static_cast<std::size_t>(dim) * dim);
  CMatrixd m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) m(r, c) = entries[static_cast<std::size_t>(r) * dim + c];
  }
  require_hermitian(m);
  return m;
}

CVectord state_from_json(const nlohmann::json& doc, bool normalize) {
  const int dim = parse_dim(doc);
  const auto entries = parse_entries(doc, static_cast<std::size_t>(dim));
  CVectord v(dim);
  for (int i = 0; i < dim; ++i) v(i) = entries[i];
  if (normalize) {
    const double n = v.norm();
    if (!(n > 0.0)) throw Error(ErrorKind::NotNormalized, "zero vector cannot be normalized");
    v /= n;
  }
  require_normalized(v);
  return v;
}

nlohmann::json to_json(const CMatrixd& m) {
  nlohmann::json entries = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) entries.push_back({m(r, c).real(), m(r, c).imag()});
  }
  return {{"dim", m.rows()}, {"entries", entries}};
}

nlohmann::json to_json(const CVectord& v) {
  nlohmann::json entries = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) entries.push_back({v(i).real(), v(i).imag()});
  return {{"dim", v.size()}, {"entries", entries}};
}

CMatrixd load_observable(const std::filesystem::path& path) {
  return observable_from_json(read_json(path));
}

CVectord load_state(const std::filesystem::path& path, bool normalize) {
  return state_from_json(read_json(path), normalize);
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move report into place at " + path.string());
  }
}

}  // namespace unc
