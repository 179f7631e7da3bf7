// Exercises the shared library through its C header only.

#include <gtest/gtest.h>

#include <cstdio>
#include <string>
#include <vector>

#include "collinear_lab.h"

namespace {

struct ResultGuard {
  clab_result* r = nullptr;
  ~ResultGuard() { clab_result_free(r); }
};

std::string text_of(const clab_result* r) { return clab_result_text(r); }

}  // namespace

TEST(CApi, StatusNames) {
  EXPECT_STREQ(clab_status_name(CLAB_OK), "ok");
  EXPECT_STRNE(clab_status_name(CLAB_ERR_PARSE), clab_status_name(CLAB_ERR_IO));
}

TEST(CApi, DirichletReport) {
  ResultGuard g;
  ASSERT_EQ(clab_dirichlet("1/2", 2, &g.r), CLAB_OK);
  EXPECT_EQ(text_of(g.r), "b=2 a=1 err=0/1 bound=1/4\n");
  EXPECT_STREQ(clab_result_get(g.r, "b"), "2");
  EXPECT_EQ(clab_result_get(g.r, "no-such-key"), nullptr);
  EXPECT_EQ(clab_result_found(g.r), 1);

  ResultGuard h;
  ASSERT_EQ(clab_dirichlet("239/169", 5, &h.r), CLAB_OK);
  EXPECT_STREQ(clab_result_get(h.r, "a"), "3");
  EXPECT_STREQ(clab_result_get(h.r, "err"), "29/338");
}

TEST(CApi, ParseErrorsSetLastError) {
  ResultGuard g;
  EXPECT_EQ(clab_dirichlet("1/x", 2, &g.r), CLAB_ERR_PARSE);
  EXPECT_EQ(g.r, nullptr);
  EXPECT_NE(std::string(clab_last_error()), "");
  clab_pointset* s = nullptr;
  EXPECT_EQ(clab_pointset_parse("1 2\n3\n", &s), CLAB_ERR_PARSE);
  EXPECT_EQ(clab_pointset_load("/nonexistent/file.txt", &s), CLAB_ERR_IO);
  EXPECT_EQ(s, nullptr);
}

TEST(CApi, NullArgumentsRejected) {
  EXPECT_EQ(clab_dirichlet(nullptr, 2, nullptr), CLAB_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(clab_collinear(nullptr, "hash", 1, nullptr), CLAB_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(clab_pointset_size(nullptr), 0u);
  clab_pointset_free(nullptr);
  clab_map_free(nullptr);
  clab_result_free(nullptr);
}

TEST(CApi, CollinearOnFivePoints) {
  const int64_t coords[] = {0, 0, 1, 2, 2, 4, 3, 5, 5, 1};
  clab_pointset* s = nullptr;
  ASSERT_EQ(clab_pointset_from_coords(2, 5, coords, &s), CLAB_OK);
  EXPECT_EQ(clab_pointset_size(s), 5u);
  for (const char* engine : {"naive", "hash"}) {
    ResultGuard g;
    ASSERT_EQ(clab_collinear(s, engine, 2, &g.r), CLAB_OK);
    EXPECT_STREQ(clab_result_get(g.r, "count"), "3");
  }
  ResultGuard bad;
  EXPECT_EQ(clab_collinear(s, "quantum", 1, &bad.r), CLAB_ERR_INVALID_ARGUMENT);
  clab_pointset_free(s);
}

TEST(CApi, PointSetRoundTrip) {
  clab_pointset* s = nullptr;
  ASSERT_EQ(clab_pointset_parse("# pts\n3 -1\n0 2\n", &s), CLAB_OK);
  const std::string path = testing::TempDir() + "capi_points.txt";
  ASSERT_EQ(clab_pointset_save(s, path.c_str()), CLAB_OK);
  clab_pointset* t = nullptr;
  ASSERT_EQ(clab_pointset_load(path.c_str(), &t), CLAB_OK);
  ASSERT_EQ(clab_pointset_size(t), 2u);
  int64_t p[2];
  ASSERT_EQ(clab_pointset_get(t, 0, p), CLAB_OK);
  EXPECT_EQ(p[0], 0);
  EXPECT_EQ(p[1], 2);
  EXPECT_EQ(clab_pointset_get(t, 5, p), CLAB_ERR_INVALID_ARGUMENT);
  clab_pointset_free(s);
  clab_pointset_free(t);
  std::remove(path.c_str());
}

TEST(CApi, GeneratedMapValidatesAndEvaluates) {
  clab_map* f = nullptr;
  ASSERT_EQ(clab_generate_map("affine", 2, 1, 2, "0:9", 1, &f), CLAB_OK);
  EXPECT_EQ(clab_map_domain_dim(f), 2u);
  EXPECT_EQ(clab_map_image_dim(f), 3u);
  const int64_t x[] = {3, 4};
  int64_t y[3];
  ASSERT_EQ(clab_map_eval(f, x, y), CLAB_OK);
  EXPECT_EQ(y[2], 14);
  const int64_t out[] = {10, 0};
  EXPECT_EQ(clab_map_eval(f, out, y), CLAB_ERR_OUT_OF_WINDOW);
  ResultGuard g;
  ASSERT_EQ(clab_validate(f, "neighbors", &g.r), CLAB_OK);
  EXPECT_EQ(clab_result_found(g.r), 1);
  clab_map_free(f);
}

TEST(CApi, CoverOnEmptySetReportsWitnessStage) {
  clab_map* f = nullptr;
  ASSERT_EQ(clab_generate_map("flat", 2, 1, 0, "0:40", 0, &f), CLAB_OK);
  clab_pointset* empty = nullptr;
  ASSERT_EQ(clab_pointset_from_coords(2, 0, nullptr, &empty), CLAB_OK);
  ResultGuard g;
  ASSERT_EQ(clab_cover(f, empty, 3, 4, "1/4", 100, 0, 1, &g.r), CLAB_OK);
  EXPECT_EQ(clab_result_found(g.r), 0);
  EXPECT_STREQ(clab_result_get(g.r, "stage"), "witness");
  EXPECT_NE(text_of(g.r).find("witness: none (z-iii unsatisfiable)"), std::string::npos);
  clab_pointset_free(empty);
  clab_map_free(f);
}

TEST(CApi, WalkAndPathLift) {
  std::vector<int64_t> walk(2 * 50);
  ASSERT_EQ(clab_generate_walk(50, "3", 7, walk.data()), CLAB_OK);
  clab_map* f = nullptr;
  clab_pointset* a = nullptr;
  ASSERT_EQ(clab_sequence_to_path(2, 50, walk.data(), "3", &f, &a), CLAB_OK);
  EXPECT_EQ(clab_pointset_size(a), 50u);
  int64_t pos[1], y[2];
  for (size_t i = 0; i < 50; ++i) {
    ASSERT_EQ(clab_pointset_get(a, i, pos), CLAB_OK);
    ASSERT_EQ(clab_map_eval(f, pos, y), CLAB_OK);
    EXPECT_EQ(y[0], walk[2 * i]);
    EXPECT_EQ(y[1], walk[2 * i + 1]);
  }
  clab_map_free(f);
  clab_pointset_free(a);
}

TEST(CApi, EstimateExactCase) {
  clab_estimate_options opts;
  clab_estimate_options_init(&opts);
  opts.max_side = 8;
  ResultGuard g;
  ASSERT_EQ(clab_estimate_l(1, 3, "1", "1", &opts, &g.r), CLAB_OK);
  EXPECT_STREQ(clab_result_get(g.r, "L_lower"), "4");
  EXPECT_STREQ(clab_result_get(g.r, "exact"), "yes");
  ResultGuard bad;
  EXPECT_EQ(clab_estimate_l(1, 3, "3/2", "1", &opts, &bad.r), CLAB_ERR_INFEASIBLE);
}
