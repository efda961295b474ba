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
#include <vector>

#include "netdecoy/util/result.hpp"

namespace netdecoy::fingerprint {

enum class KsError {
	EmptySample,
};

/// Two-sample Kolmogorov-Smirnov statistic: the largest vertical gap
/// between the two empirical CDFs.
inline Result<double, KsError> ks_statistic(std::vector<double> a, std::vector<double> b) {
	if (a.empty() || b.empty()) return KsError::EmptySample;
	std::sort(a.begin(), a.end());
	std::sort(b.begin(), b.end());
	const double na = static_cast<double>(a.size());
	const double nb = static_cast<double>(b.size());
	size_t ia = 0, ib = 0;
	double d = 0.0;
	while (ia < a.size() && ib < b.size()) {
		double x = std::min(a[ia], b[ib]);
		while (ia < a.size() && a[ia] <= x) ++ia;
		while (ib < b.size() && b[ib] <= x) ++ib;
		d = std::max(d, std::fabs(static_cast<double>(ia) / na - static_cast<double>(ib) / nb));
	}
	return d;
}

} // namespace netdecoy::fingerprint
