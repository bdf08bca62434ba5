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

#ifndef RGS_COMMON_H_
#define RGS_COMMON_H_

#include <cstddef>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace rgs {

using Vec = std::vector<double>;

// Bad input: malformed documents, dimension mismatches, invalid parameters.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An LP stalled or produced certificates outside tolerance.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The requested object does not exist (empty interior, empty set, ...).
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Selects the OpenMP kernels or the serial reference path. Both produce
// identical results; the serial path is kept for testing and benchmarking.
enum class Exec { kSerial, kParallel };

bool OpenMpAvailable();
int MaxThreads();

// Runs body(k) for k in [0, count). Exceptions thrown inside the parallel
// region are captured and the first one (lowest index) is rethrown.
template <typename Body>
void ParallelFor(std::size_t count, Exec exec, Body&& body) {
  std::exception_ptr first;
  std::size_t first_index = count;
  std::mutex mu;
  auto guarded = [&](std::size_t k) {
    try {
      body(k);
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu);
      if (k < first_index) {
        first_index = k;
        first = std::current_exception();
      }
    }
  };
#ifdef RGS_HAVE_OPENMP
  if (exec == Exec::kParallel) {
    const long n = static_cast<long>(count);
#pragma omp parallel for schedule(dynamic, 1)
    for (long k = 0; k < n; ++k) guarded(static_cast<std::size_t>(k));
    if (first) std::rethrow_exception(first);
    return;
  }
#endif
  for (std::size_t k = 0; k < count; ++k) guarded(k);
  if (first) std::rethrow_exception(first);
}

double Dot(const Vec& a, const Vec& b);
double Norm(const Vec& a);
double SupDistance(const Vec& a, const Vec& b);

// "%.17g" rendering used by every CSV writer.
std::string FormatDouble(double x);

}  // namespace rgs

#endif  // RGS_COMMON_H_
