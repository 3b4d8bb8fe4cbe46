#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "scipi/data_io.hpp"
#include "scipi/error.hpp"
#include "test_support.hpp"

namespace scipi {
namespace {

Matrix parse_csv(const std::string& text, bool header = false) {
  std::istringstream in(text);
  return parse_dense_csv(in, header);
}

Matrix parse_mm(const std::string& text) {
  std::istringstream in(text);
  return parse_matrix_market(in);
}

long parse_error_line(const std::string& text) {
  try {
    parse_mm(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

TEST(DenseCsv, ParsesRowsAndHeader) {
  const Matrix M = parse_csv("a,b\n1, 2.5\n\n-3,4e-2\n", true);
  ASSERT_EQ(M.rows(), 2);
  ASSERT_EQ(M.cols(), 2);
  EXPECT_EQ(M(0, 1), 2.5);
  EXPECT_EQ(M(1, 0), -3.0);
  EXPECT_EQ(M(1, 1), 0.04);
}

TEST(DenseCsv, ErrorsCarryLineNumbers) {
  try {
    parse_csv("1,2\n3\n");
    FAIL() << "ragged rows accepted";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
  }
  try {
    parse_csv("1,2\n3,x\n");
    FAIL() << "non-numeric accepted";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
  }
  EXPECT_THROW(parse_csv(""), ParseError);
}

TEST(DenseCsv, RoundTripIsExact) {
  Rng rng(3);
  const Matrix M = rng.normal_matrix(4, 3) * 1e3;
  std::ostringstream out;
  write_dense_csv(out, M);
  EXPECT_EQ(parse_csv(out.str()), M);
}

TEST(MatrixMarket, CoordinateGeneralSumsDuplicates) {
  const Matrix M = parse_mm(
      "%%MatrixMarket matrix coordinate real general\n"
      "% comment\n"
      "2 3 3\n"
      "1 1 1.5\n"
      "2 3 -2\n"
      "1 1 0.5\n");
  EXPECT_EQ(M.rows(), 2);
  EXPECT_EQ(M.cols(), 3);
  EXPECT_EQ(M(0, 0), 2.0);
  EXPECT_EQ(M(1, 2), -2.0);
  EXPECT_EQ(M(0, 1), 0.0);
}

TEST(MatrixMarket, SymmetricArrayMirrorsLowerTriangle) {
  const Matrix M = parse_mm(
      "%%MatrixMarket matrix array integer symmetric\n"
      "2 2\n"
      "1\n2\n3\n");
  EXPECT_EQ(M(0, 0), 1.0);
  EXPECT_EQ(M(1, 0), 2.0);
  EXPECT_EQ(M(0, 1), 2.0);
  EXPECT_EQ(M(1, 1), 3.0);
}

TEST(MatrixMarket, Rejections) {
  EXPECT_EQ(parse_error_line("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1\n"), 3);
  EXPECT_EQ(parse_error_line("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1\n"), 3);
  EXPECT_EQ(parse_error_line("%%Matrix matrix array real general\n1 1\n1\n"), 1);
  EXPECT_THROW(parse_mm("%%MatrixMarket matrix array complex general\n1 1\n1 0\n"),
               UnsupportedError);
  EXPECT_THROW(parse_mm("%%MatrixMarket matrix array real hermitian\n1 1\n1\n"), UnsupportedError);
  EXPECT_THROW(parse_mm("%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n1 2 1\n"),
               ParseError);
  EXPECT_THROW(parse_mm("%%MatrixMarket matrix array real general\n1 1\n1\n2\n"), ParseError);
}

TEST(MatrixMarket, RoundTripAllLayouts) {
  Rng rng(5);
  const Matrix G = rng.normal_matrix(5, 4);
  const Matrix S = test::random_symmetric(rng, 4);
  for (auto layout : {MatrixMarketLayout::Array, MatrixMarketLayout::Coordinate}) {
    std::ostringstream a;
    write_matrix_market(a, G, layout);
    EXPECT_EQ(parse_mm(a.str()), G);
    std::ostringstream s;
    write_matrix_market(s, S, layout, true);
    EXPECT_EQ(parse_mm(s.str()), S);
  }
  std::ostringstream bad;
  EXPECT_THROW(write_matrix_market(bad, G.topLeftCorner(4, 4), MatrixMarketLayout::Array, true),
               InputError);
}

TEST(MatrixMarket, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "scipi_test_roundtrip.mtx";
  Rng rng(6);
  const Matrix M = rng.normal_matrix(3, 3);
  save_matrix_market(path.string(), M);
  EXPECT_EQ(load_matrix_market(path.string()), M);
  std::filesystem::remove(path);
  EXPECT_THROW(load_matrix_market(path.string()), InputError);
}

TEST(DatasetSpec, ParsesKeyValues) {
  const DatasetSpec s = DatasetSpec::parse("spectrum: d=50, l1=1,l2=0.9", 7);
  EXPECT_EQ(s.generator, "spectrum");
  EXPECT_EQ(s.seed, 7u);
  EXPECT_EQ(s.get("l2", 0.0), 0.9);
  EXPECT_EQ(s.get("missing", 3.0), 3.0);
  EXPECT_EQ(s.get_index("d", 1), 50);
  EXPECT_EQ(DatasetSpec::parse("design").params.size(), 0u);
  EXPECT_EQ(DatasetSpec::parse(s.to_string()).params, s.params);
}

TEST(DatasetSpec, Rejections) {
  EXPECT_THROW(DatasetSpec::parse(":d=3"), InputError);
  EXPECT_THROW(DatasetSpec::parse("spectrum:d"), InputError);
  EXPECT_THROW(DatasetSpec::parse("spectrum:d=abc"), InputError);
  const DatasetSpec s = DatasetSpec::parse("x:d=2.5,k=0");
  EXPECT_THROW(s.get_index("d", 1), InputError);
  EXPECT_THROW(s.get_index("k", 1), InputError);
  EXPECT_EQ(s.get_index("k", 1, 0), 0);
}

TEST(Generators, SpectrumMatrixHasRequestedEigenvalues) {
  const Vector eigs = leading_spectrum(6, 1.0, 0.9);
  EXPECT_EQ(eigs[0], 1.0);
  EXPECT_EQ(eigs[1], 0.9);
  EXPECT_NEAR(eigs[5], 0.9 / 5.0, 1e-15);
  const Matrix A = gen_spectrum_matrix(2, 6, eigs);
  EXPECT_LE(test::max_abs(A - A.transpose()), 1e-15);
  const Vector got = sym_eig(A).eigenvalues;
  EXPECT_LE((got - eigs).cwiseAbs().maxCoeff(), 1e-12);
  const Matrix Q = gen_orthogonal(2, 6);
  EXPECT_LE(test::max_abs(Q.transpose() * Q - Matrix::Identity(6, 6)), 1e-13);
}

TEST(Generators, ShapesAndRanges) {
  const Matrix D = gen_mixture_design(1, 20, 3);
  EXPECT_GE(D.minCoeff(), 0.1);
  EXPECT_LT(D.maxCoeff(), 1.1);
  const LowRankNonneg lr = gen_lowrank_nonneg(1, 6, 5, 2);
  EXPECT_LE(test::max_abs(lr.V - lr.W * lr.H), 1e-15);
  EXPECT_GE(lr.V.minCoeff(), 0.0);

  const GmmData g = gen_gmm_data(1, 31, 3, 1, 5.0);
  EXPECT_EQ(g.data.rows(), 31);
  EXPECT_EQ(g.labels.size(), 31u);
  EXPECT_EQ(g.means[2][0], 10.0);
  EXPECT_NEAR(g.weights.sum(), 1.0, 1e-15);
  for (std::size_t i = 1; i < g.labels.size(); ++i) EXPECT_LE(g.labels[i - 1], g.labels[i]);
  EXPECT_THROW(gen_gmm_data(1, 2, 3, 1, 5.0), InputError);
}

TEST(Generators, IcaDataIsWhitened) {
  const IcaData data = gen_ica_data(4, 500, 3);
  const Matrix cov = data.W.transpose() * data.W / 500.0;
  EXPECT_LE(test::max_abs(cov - Matrix::Identity(3, 3)), 1e-10);
  EXPECT_LE(data.W.colwise().mean().cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE(test::max_abs(data.directions.transpose() * data.directions - Matrix::Identity(3, 3)),
            1e-12);
  EXPECT_THROW(gen_ica_data(1, 3, 3), InputError);
}

TEST(Whiten, RejectsDegenerateData) {
  Matrix X(4, 2);
  X << 1, 2, 2, 4, 3, 6, 4, 8;
  EXPECT_THROW(whiten(X), InputError);
  EXPECT_THROW(whiten(Matrix::Ones(2, 2)), InputError);
}

}  // namespace
}  // namespace scipi
