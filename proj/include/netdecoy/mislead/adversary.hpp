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

#include <cstddef>
#include <vector>

#include "netdecoy/process/state.hpp"

namespace netdecoy::mislead {

/// Least-effort damage model: a variable is attractive in proportion to
/// how close it already sits to its safety limit. Affine in the view, so
/// steering it reduces to a linear program.
struct AdversaryModel {
	/// a_i(v) = (v_i - l_i) / (s_i - l_i); 0 at the lower bound, 1 at the
	/// safety limit. The denominator is clamped away from zero so learned
	/// bounds that collapse onto the safety limit stay finite.
	double attractiveness(const std::vector<double>& view, size_t i,
	                      const process::Bounds& b) const {
		double span = b.safety_limit[i] - b.lower[i];
		if (span < 1e-9) span = 1e-9;
		return (view[i] - b.lower[i]) / span;
	}

	size_t argmax(const std::vector<double>& view, const process::Bounds& b) const {
		size_t best = 0;
		double best_a = attractiveness(view, 0, b);
		for (size_t i = 1; i < view.size(); ++i) {
			double a = attractiveness(view, i, b);
			if (a > best_a) { // strict: ties keep the lowest index
				best_a = a;
				best = i;
			}
		}
		return best;
	}
};

/// What the adversary does with a believed view of the plant: command the
/// most attractive variable to its safety limit.
inline process::ControlCommand decide(const AdversaryModel& adv, const std::vector<double>& view,
                                      const process::Bounds& bounds, uint16_t issuer = 0) {
	size_t target = adv.argmax(view, bounds);
	return process::ControlCommand{target, bounds.safety_limit[target], issuer};
}

} // namespace netdecoy::mislead
