/* Copyright 2026 The nsbf-dirac Authors
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

#ifndef NSBF_PARALLEL_HPP
#define NSBF_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace nsbf {

/// Worker count from NSBF_DIRAC_THREADS, else the hardware concurrency (at least 1).
std::size_t worker_count();

/// Calls body(i) for i in [0, count) on up to worker_count() threads.
/// The first exception thrown by any call is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

} // namespace nsbf

#endif
