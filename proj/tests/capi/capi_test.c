/* tests/capi/capi_test.c */

// Copyright 2026 The lfvctc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* Exercises the C interface from a C translation unit. */

#include <math.h>
#include <stdio.h>
#include <string.h>

#include "lfvctc/lfvctc.h"

static int failures = 0;

#define EXPECT(cond)                                              \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: expectation failed: %s\n", __FILE__, \
              __LINE__, #cond);                                   \
      ++failures;                                                 \
    }                                                             \
  } while (0)

static void test_config(void) {
  lfv_config* config = NULL;
  char* text = NULL;
  EXPECT(lfv_config_create(&config) == LFV_OK);
  EXPECT(lfv_config_set(config, "train.epochs", "3") == LFV_OK);
  EXPECT(lfv_config_format(config, &text) == LFV_OK);
  EXPECT(text != NULL && strstr(text, "train.epochs = 3\n") != NULL);
  lfv_string_free(text);

  EXPECT(lfv_config_set(config, "no.such.key", "1") == LFV_ERR_CONFIG);
  EXPECT(strstr(lfv_last_error(), "no.such.key") != NULL);
  EXPECT(lfv_config_set(config, NULL, "1") == LFV_ERR_USAGE);
  lfv_config_destroy(config);

  config = NULL;
  EXPECT(lfv_config_load("/nonexistent/exp.cfg", &config) == LFV_ERR_IO);
  EXPECT(config == NULL);
  EXPECT(strstr(lfv_last_error(), "/nonexistent/exp.cfg") != NULL);

  EXPECT(lfv_config_parse("seeds = 7\n", &config) == LFV_OK);
  lfv_config_destroy(config);
  lfv_config_destroy(NULL);
}

static void test_arrays(void) {
  /* T = 1, V = 2, uniform: loss of label "a" is ln 2. */
  const double lp[2] = {log(0.5), log(0.5)};
  const int label[1] = {1};
  double loss = 0.0;
  EXPECT(lfv_ctc_loss(lp, 1, 2, label, 1, &loss) == LFV_OK);
  EXPECT(fabs(loss - log(2.0)) < 1e-12);

  const int twice[2] = {1, 1};
  EXPECT(lfv_ctc_loss(lp, 1, 2, twice, 2, &loss) == LFV_ERR_INFEASIBLE);

  /* argmax path a a - b */
  const double grid[12] = {-3, -0.1, -3, -3, -0.1, -3, -0.1, -3, -3, -3, -3, -0.1};
  int tokens[4];
  size_t len = 0;
  EXPECT(lfv_greedy_decode(grid, 4, 3, tokens, 4, &len) == LFV_OK);
  EXPECT(len == 2 && tokens[0] == 1 && tokens[1] == 2);
  EXPECT(lfv_greedy_decode(grid, 4, 3, tokens, 1, &len) == LFV_ERR_USAGE);

  const char* ref[6] = {"k", "i", "t", "t", "e", "n"};
  const char* hyp[7] = {"s", "i", "t", "t", "i", "n", "g"};
  lfv_score score;
  EXPECT(lfv_edit_distance(ref, 6, hyp, 7, &score) == LFV_OK);
  EXPECT(score.substitutions + score.insertions + score.deletions == 3);
  EXPECT(score.reference_length == 6);
}

static void test_status(void) {
  EXPECT(strcmp(lfv_status_name(LFV_OK), "ok") == 0);
  EXPECT(strlen(lfv_version()) > 0);
  lfv_model* model = NULL;
  EXPECT(lfv_model_load("/nonexistent/model.ckpt", &model) == LFV_ERR_IO);
  EXPECT(model == NULL);
  lfv_model_destroy(NULL);
  lfv_extractor_destroy(NULL);
}

int main(void) {
  test_config();
  test_arrays();
  test_status();
  if (failures == 0) printf("capi_test: all checks passed\n");
  return failures == 0 ? 0 : 1;
}
