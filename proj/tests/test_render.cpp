#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fixture_maps.hpp"
#include "logharm/render.hpp"

using logharm::Complex;
using logharm::Error;
using logharm::ErrorKind;
using logharm::parse;
using logharm::RenderFormat;
using logharm::RenderJob;

namespace {

RenderJob csv_job(const std::string& expr) {
  RenderJob job;
  job.target = parse(expr);
  job.radial = 32;
  job.angular = 64;
  return job;
}

std::vector<std::vector<double>> parse_csv(const std::string& text, std::string* header) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  if (header) *header = line;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST(RenderMesh, GeometricRadii) {
  const RenderJob job = csv_job("z");
  const auto r = job.radii();
  ASSERT_EQ(r.size(), 32u);
  EXPECT_EQ(r.front(), 0.0);
  EXPECT_NEAR(r.back(), 0.99, 1e-15);
  for (std::size_t k = 2; k < r.size(); ++k)
    EXPECT_NEAR((1.0 - r[k]) / (1.0 - r[k - 1]), (1.0 - r[2]) / (1.0 - r[1]), 1e-12);
  EXPECT_EQ(job.mesh_size(), 1u + 31u * 64u);
}

TEST(RenderCsv, HeaderRowsAndOrder) {
  const RenderJob job = csv_job("z/(1-z)^2");
  std::ostringstream os;
  const auto summary = logharm::render_image(job, os, 1);
  std::string header;
  const auto rows = parse_csv(os.str(), &header);
  EXPECT_EQ(header, "z_re,z_im,w_re,w_im");
  ASSERT_EQ(rows.size(), job.mesh_size());
  EXPECT_EQ(summary.rows, rows.size());
  EXPECT_EQ(summary.skipped, 0u);
  const auto e = parse("z/(1-z)^2");
  double last_r = -1.0;
  for (const auto& row : rows) {
    ASSERT_EQ(row.size(), 4u);
    const Complex z{row[0], row[1]};
    // rows are sorted by radius, then angle
    EXPECT_GE(std::abs(z), last_r - 1e-12);
    last_r = std::abs(z);
    // %.17g round-trips doubles exactly
    const Complex w = e(z);
    EXPECT_EQ(w.real(), row[2]);
    EXPECT_EQ(w.imag(), row[3]);
  }
}

TEST(RenderCsv, IdentityBoundingBox) {
  const RenderJob job = csv_job("z");
  std::ostringstream os;
  const auto s = logharm::render_image(job, os, 1);
  EXPECT_NEAR(s.max_re, 0.99, 1e-12);
  EXPECT_NEAR(s.min_re, -0.99, 1e-12);
  EXPECT_NEAR(s.max_im, 0.99, 1e-2);
  EXPECT_NEAR(s.min_im, -0.99, 1e-2);
  EXPECT_NEAR(s.max_modulus, 0.99, 1e-12);
}

TEST(RenderCsv, DiskAutomorphismStaysInDisk) {
  const RenderJob job = csv_job("(z-0.5)/(1-0.5*z)");
  std::ostringstream os;
  const auto s = logharm::render_image(job, os, 1);
  EXPECT_LT(s.max_modulus, 1.0);
  EXPECT_GT(s.max_modulus, 0.98);
}

TEST(RenderCsv, FieldColumn) {
  RenderJob job = csv_job("z/(1-z)^2");
  job.color_by_field = true;
  std::ostringstream os;
  logharm::render_image(job, os, 1);
  std::string header;
  const auto rows = parse_csv(os.str(), &header);
  EXPECT_EQ(header, "z_re,z_im,w_re,w_im,field");
  for (const auto& row : rows) {
    ASSERT_EQ(row.size(), 5u);
    EXPECT_LE(row[4], 6.0 + 1e-9);
    EXPECT_GE(row[4], 0.0);
  }
}

TEST(RenderCsv, LogHarmonicTarget) {
  RenderJob job;
  job.target = testmaps::lh_koebe();
  job.radial = 32;
  job.angular = 64;
  std::ostringstream os;
  const auto s = logharm::render_image(job, os, 1);
  EXPECT_EQ(s.rows, job.mesh_size());
  const auto rows = parse_csv(os.str(), nullptr);
  const auto f = testmaps::lh_koebe();
  for (std::size_t k = 0; k < rows.size(); k += 97) {
    const Complex w = f.value({rows[k][0], rows[k][1]});
    EXPECT_EQ(w.real(), rows[k][2]);
    EXPECT_EQ(w.imag(), rows[k][3]);
  }
}

TEST(RenderCsv, PoleAtOriginIsSkipped) {
  const RenderJob job = csv_job("1/z");
  std::ostringstream os;
  const auto s = logharm::render_image(job, os, 1);
  EXPECT_EQ(s.skipped, 1u);
  EXPECT_EQ(s.rows, job.mesh_size() - 1);
}

TEST(RenderCsv, DeterministicAcrossWorkers) {
  const RenderJob job = csv_job("exp(z/(1-z))");
  std::ostringstream a, b, c;
  logharm::render_image(job, a, 1);
  logharm::render_image(job, b, 4);
  logharm::render_image(job, c, 8);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str(), c.str());
}

TEST(RenderPpm, HeaderAndPayloadSize) {
  RenderJob job = csv_job("z/(1-z)^2");
  job.format = RenderFormat::Ppm;
  job.width = 120;
  job.height = 80;
  std::ostringstream os;
  logharm::render_image(job, os, 1);
  const std::string out = os.str();
  const std::string header = "P6 120 80 255\n";
  ASSERT_GE(out.size(), header.size());
  EXPECT_EQ(out.substr(0, header.size()), header);
  EXPECT_EQ(out.size(), header.size() + 120u * 80u * 3u);
  // something other than background was drawn
  EXPECT_NE(out.find_first_not_of('\xff', header.size()), std::string::npos);
}

TEST(RenderPpm, WritesFile) {
  const auto path = std::filesystem::temp_directory_path() / "logharm_render_test.ppm";
  RenderJob job;
  job.target = testmaps::lh_half_plane();
  job.format = RenderFormat::Ppm;
  job.width = 64;
  job.height = 64;
  job.path = path.string();
  job.color_by_field = true;
  const auto s = logharm::render_image(job, 1);
  EXPECT_GT(s.rows, 0u);
  EXPECT_EQ(std::filesystem::file_size(path), std::string("P6 64 64 255\n").size() + 64u * 64u * 3u);
  std::filesystem::remove(path);
}

TEST(RenderJob, Validation) {
  auto kind = [](const RenderJob& job) {
    try {
      std::ostringstream os;
      logharm::render_image(job, os, 1);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::ParseError;
  };
  RenderJob job = csv_job("z");
  job.radial = 31;
  EXPECT_EQ(kind(job), ErrorKind::InvalidArgument);
  job = csv_job("z");
  job.angular = 63;
  EXPECT_EQ(kind(job), ErrorKind::InvalidArgument);
  job = csv_job("z");
  job.r_max = 1.0;
  EXPECT_EQ(kind(job), ErrorKind::InvalidArgument);
  job = csv_job("z");
  job.format = RenderFormat::Ppm;
  job.width = 0;
  EXPECT_EQ(kind(job), ErrorKind::InvalidArgument);
}

TEST(RenderJob, UnwritablePathIsIoFailure) {
  RenderJob job = csv_job("z");
  job.path = "/nonexistent-dir/out.csv";
  try {
    logharm::render_image(job, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::IoFailure);
  }
}
