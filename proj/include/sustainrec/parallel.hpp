/**
 *  Licensed under the Apache License, Version 2.0 (the "License");
 *  you may not use this file except in compliance with the License.
 *  You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 *  Unless required by applicable law or agreed to in writing,
 *  software distributed under the License is distributed on an "AS
 *  IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either
 *  express or implied.  See the License for the specific language
 *  governing permissions and limitations under the License.
 */

#ifndef SUSTAINREC_PARALLEL_HPP
#define SUSTAINREC_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace sustainrec {

/// Runs body(i) for every i in [0, count) on up to `threads` workers.
/// Iterations must be independent; output is then identical for any
/// worker count. threads <= 1 runs inline.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace sustainrec

#endif  // SUSTAINREC_PARALLEL_HPP
