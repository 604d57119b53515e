/* Copyright 2026 The swarmsim Authors
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

#pragma once

namespace swarmsim {

// Runs fn(i) for i in [0, n). The parallel path requires that fn(i) writes
// only to index-i state; under that contract results are bitwise identical
// to the serial path, which is kept as the reference for testing.
template <typename Fn>
void for_each_index(int n, bool parallel, Fn&& fn) {
#ifdef _OPENMP
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
      fn(i);
    }
    return;
  }
#else
  (void)parallel;
#endif
  for (int i = 0; i < n; ++i) {
    fn(i);
  }
}

}  // namespace swarmsim
