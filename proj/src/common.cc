// Copyright 2026 The rgs Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rgs/common.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#ifdef RGS_HAVE_OPENMP
#include <omp.h>
#endif

namespace rgs {

bool OpenMpAvailable() {
#ifdef RGS_HAVE_OPENMP
  return true;
#else
  return false;
#endif
}

int MaxThreads() {
#ifdef RGS_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

double Dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

double Norm(const Vec& a) { return std::sqrt(Dot(a, a)); }

double SupDistance(const Vec& a, const Vec& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::fabs(a[k] - b[k]));
  return d;
}

std::string FormatDouble(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace rgs
