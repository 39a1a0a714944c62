/*
 * Copyright 2026 The subsel Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* Compiles the public header as C and drives a tiny selection. */
#include <stdio.h>

#include "subsel/subsel.h"

int main(void) {
  subsel_synthetic_spec spec;
  subsel_graph_options go;
  subsel_select_options so;
  subsel_dataset_t* d = NULL;
  subsel_graph_t* g = NULL;
  subsel_selection_t* s = NULL;
  subsel_selection_info info;
  int rc = 1;

  subsel_synthetic_spec_init(&spec);
  spec.n = 40;
  subsel_graph_options_init(&go);
  go.k = 5;
  subsel_select_options_init(&so);
  if (subsel_dataset_generate(&spec, &d) == SUBSEL_OK &&
      subsel_graph_build(d, &go, &g) == SUBSEL_OK &&
      subsel_select(d, g, &so, &s) == SUBSEL_OK &&
      subsel_selection_info_get(s, &info) == SUBSEL_OK) {
    printf("selected %lld of 40 (subsel %s)\n", (long long)info.num_selected,
           subsel_version());
    rc = info.num_selected == 12 ? 0 : 1;
  } else {
    fprintf(stderr, "error: %s\n", subsel_last_error());
  }
  subsel_selection_free(s);
  subsel_graph_free(g);
  subsel_dataset_free(d);
  return rc;
}
