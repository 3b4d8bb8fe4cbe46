#include "scipi/data_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "scipi/error.hpp"

namespace scipi {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool blank(std::string_view s) { return trim(s).empty(); }

double parse_number(std::string_view token, long line) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (token.empty() || ec != std::errc() || end != token.data() + token.size()) {
    throw ParseError("not a number: '" + std::string(token) + "'", line);
  }
  return value;
}

void check_size(Eigen::Index rows, Eigen::Index cols) {
  if (rows > 0 && cols > kMaxDenseEntries / rows) {
    throw InputError("matrix of " + std::to_string(rows) + " x " + std::to_string(cols) +
                     " exceeds the dense size cap of " + std::to_string(kMaxDenseEntries) +
                     " entries");
  }
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return in;
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Matrix parse_dense_csv(std::istream& in, bool header) {
  std::vector<double> values;
  Eigen::Index cols = -1;
  Eigen::Index rows = 0;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (header && line_no == 1) continue;
    if (blank(line)) continue;
    Eigen::Index count = 0;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      values.push_back(parse_number(rest.substr(0, comma), line_no));
      ++count;
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (cols < 0) {
      cols = count;
    } else if (count != cols) {
      throw ParseError("expected " + std::to_string(cols) + " columns, found " +
                           std::to_string(count),
                       line_no);
    }
    ++rows;
    if (static_cast<Eigen::Index>(values.size()) > kMaxDenseEntries) check_size(rows, cols);
  }
  if (rows == 0) throw ParseError("no data rows", line_no);
  Matrix M(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      M(i, j) = values[static_cast<std::size_t>(i * cols + j)];
    }
  }
  return M;
}

Matrix load_dense_csv(const std::string& path, bool header) {
  auto in = open_input(path);
  return parse_dense_csv(in, header);
}

void write_dense_csv(std::ostream& out, const Matrix& M) {
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      if (j) out << ',';
      out << format_double(M(i, j));
    }
    out << '\n';
  }
}

Matrix parse_matrix_market(std::istream& in) {
  std::string line;
  long line_no = 0;
  if (!std::getline(in, line)) throw ParseError("empty file", 1);
  line_no = 1;

  std::istringstream head(line);
  std::string banner, object, layout, field, symmetry;
  head >> banner >> object >> layout >> field >> symmetry;
  if (banner != "%%MatrixMarket") throw ParseError("missing %%MatrixMarket banner", line_no);
  object = lower(object);
  layout = lower(layout);
  field = lower(field);
  symmetry = lower(symmetry);
  if (object != "matrix") throw UnsupportedError("Matrix Market object '" + object + "'");
  if (layout != "coordinate" && layout != "array") {
    throw ParseError("unknown layout '" + layout + "'", line_no);
  }
  if (field != "real" && field != "integer" && field != "double") {
    throw UnsupportedError("Matrix Market field '" + field + "' (expected real or integer)");
  }
  if (symmetry != "general" && symmetry != "symmetric") {
    throw UnsupportedError("Matrix Market symmetry '" + symmetry +
                           "' (expected general or symmetric)");
  }
  const bool symmetric = symmetry == "symmetric";
  const bool coordinate = layout == "coordinate";

  // Size line, after comments.
  while (std::getline(in, line)) {
    ++line_no;
    if (!blank(line) && trim(line).front() != '%') break;
  }
  std::istringstream size_line(line);
  long long rows = -1, cols = -1, nnz = -1;
  size_line >> rows >> cols;
  if (coordinate) size_line >> nnz;
  if (!size_line || rows < 1 || cols < 1 || (coordinate && nnz < 0)) {
    throw ParseError("malformed size line", line_no);
  }
  if (symmetric && rows != cols) throw ParseError("symmetric matrix must be square", line_no);
  check_size(rows, cols);
  Matrix M = Matrix::Zero(rows, cols);

  auto next_data_line = [&](std::string& out) {
    while (std::getline(in, out)) {
      ++line_no;
      if (!blank(out) && trim(out).front() != '%') return true;
    }
    return false;
  };
  auto split = [&](const std::string& text) {
    std::vector<std::string_view> tokens;
    std::string_view rest(text);
    while (true) {
      rest = trim(rest);
      if (rest.empty()) break;
      std::size_t n = 0;
      while (n < rest.size() && !std::isspace(static_cast<unsigned char>(rest[n]))) ++n;
      tokens.push_back(rest.substr(0, n));
      rest.remove_prefix(n);
    }
    return tokens;
  };

  if (coordinate) {
    for (long long e = 0; e < nnz; ++e) {
      if (!next_data_line(line)) {
        throw ParseError("expected " + std::to_string(nnz) + " entries, found " +
                             std::to_string(e),
                         line_no);
      }
      const auto tokens = split(line);
      if (tokens.size() != 3) throw ParseError("expected 'row col value'", line_no);
      const double ri = parse_number(tokens[0], line_no);
      const double ci = parse_number(tokens[1], line_no);
      const double v = parse_number(tokens[2], line_no);
      const auto i = static_cast<long long>(ri);
      const auto j = static_cast<long long>(ci);
      if (static_cast<double>(i) != ri || static_cast<double>(j) != ci || i < 1 || j < 1 ||
          i > rows || j > cols) {
        throw ParseError("index out of range", line_no);
      }
      if (symmetric && j > i) throw ParseError("symmetric storage expects the lower triangle", line_no);
      M(i - 1, j - 1) += v;
      if (symmetric && i != j) M(j - 1, i - 1) += v;
    }
  } else {
    const long long expected = symmetric ? rows * (rows + 1) / 2 : rows * cols;
    long long read = 0;
    for (long long j = 0; j < cols; ++j) {
      for (long long i = symmetric ? j : 0; i < rows; ++i) {
        if (!next_data_line(line)) {
          throw ParseError("expected " + std::to_string(expected) + " values, found " +
                               std::to_string(read),
                           line_no);
        }
        const auto tokens = split(line);
        if (tokens.size() != 1) throw ParseError("expected one value per line", line_no);
        const double v = parse_number(tokens[0], line_no);
        M(i, j) = v;
        if (symmetric) M(j, i) = v;
        ++read;
      }
    }
  }
  if (next_data_line(line)) throw ParseError("unexpected data after the last entry", line_no);
  return M;
}

Matrix load_matrix_market(const std::string& path) {
  auto in = open_input(path);
  return parse_matrix_market(in);
}

void write_matrix_market(std::ostream& out, const Matrix& M, MatrixMarketLayout layout,
                         bool symmetric) {
  if (symmetric && (M.rows() != M.cols() || !(M - M.transpose()).isZero(0.0))) {
    throw InputError("write_matrix_market: matrix is not symmetric");
  }
  const bool coordinate = layout == MatrixMarketLayout::Coordinate;
  out << "%%MatrixMarket matrix " << (coordinate ? "coordinate" : "array") << " real "
      << (symmetric ? "symmetric" : "general") << '\n';
  if (coordinate) {
    long long nnz = 0;
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      for (Eigen::Index i = symmetric ? j : 0; i < M.rows(); ++i) nnz += M(i, j) != 0.0;
    }
    out << M.rows() << ' ' << M.cols() << ' ' << nnz << '\n';
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      for (Eigen::Index i = symmetric ? j : 0; i < M.rows(); ++i) {
        if (M(i, j) != 0.0) out << i + 1 << ' ' << j + 1 << ' ' << format_double(M(i, j)) << '\n';
      }
    }
  } else {
    out << M.rows() << ' ' << M.cols() << '\n';
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      for (Eigen::Index i = symmetric ? j : 0; i < M.rows(); ++i) {
        out << format_double(M(i, j)) << '\n';
      }
    }
  }
}

void save_matrix_market(const std::string& path, const Matrix& M, MatrixMarketLayout layout,
                        bool symmetric) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  write_matrix_market(out, M, layout, symmetric);
}

DatasetSpec DatasetSpec::parse(const std::string& text, std::uint64_t seed) {
  DatasetSpec spec;
  spec.seed = seed;
  const auto colon = text.find(':');
  spec.generator = std::string(trim(std::string_view(text).substr(0, colon)));
  if (spec.generator.empty()) throw InputError("dataset spec '" + text + "' has no generator");
  if (colon == std::string::npos) return spec;
  std::string_view rest = std::string_view(text).substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = trim(rest.substr(0, comma));
    if (!item.empty()) {
      const auto eq = item.find('=');
      if (eq == std::string_view::npos) {
        throw InputError("dataset spec item '" + std::string(item) + "' is not key=value");
      }
      const std::string key(trim(item.substr(0, eq)));
      try {
        spec.params[key] = parse_number(item.substr(eq + 1), 0);
      } catch (const ParseError&) {
        throw InputError("dataset spec value for '" + key + "' is not a number");
      }
    }
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return spec;
}

double DatasetSpec::get(const std::string& key, double fallback) const {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

Eigen::Index DatasetSpec::get_index(const std::string& key, Eigen::Index fallback,
                                    Eigen::Index min_value) const {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  const double v = it->second;
  if (v != std::floor(v) || v < static_cast<double>(min_value) || v > 1e9) {
    throw InputError("dataset parameter '" + key + "' must be an integer >= " +
                     std::to_string(min_value));
  }
  return static_cast<Eigen::Index>(v);
}

std::string DatasetSpec::to_string() const {
  std::string out = generator;
  char sep = ':';
  for (const auto& [key, value] : params) {
    out += sep;
    out += key + "=" + format_double(value);
    sep = ',';
  }
  return out;
}

}  // namespace scipi
