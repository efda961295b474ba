/*	netdecoy
 *
 *	Copyright (c) 2026: The netdecoy authors
 *
 *	Licensed under the Apache License, Version 2.0 (the "License");
 *	you may not use this file except in compliance with the License.
 *	You may obtain a copy of the License at
 *
 *		http://www.apache.org/licenses/LICENSE-2.0
 *
 *	Unless required by applicable law or agreed to in writing, software
 *	distributed under the License is distributed on an "AS IS" BASIS,
 *	WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 *	See the License for the specific language governing permissions and
 *	limitations under the License.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace netdecoy {

struct SeriesSummary {
	size_t n = 0;
	double mean = 0.0;
	double p50 = 0.0;
	double p99 = 0.0;
	double ci99_low = 0.0;
	double ci99_high = 0.0;
};

/// Nearest-rank percentile on a sorted copy: element at ceil(q*n).
inline double percentile(std::vector<double> sorted_copy, double q) {
	if (sorted_copy.empty()) return 0.0;
	std::sort(sorted_copy.begin(), sorted_copy.end());
	size_t rank = static_cast<size_t>(std::ceil(q * static_cast<double>(sorted_copy.size())));
	if (rank == 0) rank = 1;
	if (rank > sorted_copy.size()) rank = sorted_copy.size();
	return sorted_copy[rank - 1];
}

/// Mean, percentiles, and a normal-approximation 99% confidence interval
/// for the mean. A single sample degenerates to ci_low == ci_high == value.
inline SeriesSummary summarize(const std::vector<double>& xs) {
	SeriesSummary s;
	s.n = xs.size();
	if (xs.empty()) return s;
	double sum = 0.0;
	for (double x : xs) sum += x;
	s.mean = sum / static_cast<double>(xs.size());
	s.p50 = percentile(xs, 0.50);
	s.p99 = percentile(xs, 0.99);
	if (xs.size() < 2) {
		s.ci99_low = s.ci99_high = s.mean;
		return s;
	}
	double ss = 0.0;
	for (double x : xs) ss += (x - s.mean) * (x - s.mean);
	double sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
	// z for a two-sided 99% interval
	const double z = 2.5758293035489004;
	double half = z * sd / std::sqrt(static_cast<double>(xs.size()));
	s.ci99_low = s.mean - half;
	s.ci99_high = s.mean + half;
	return s;
}

} // namespace netdecoy
