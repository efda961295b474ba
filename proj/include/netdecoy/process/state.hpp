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
#include <cstdint>
#include <optional>
#include <vector>

#include "netdecoy/process/law.hpp"
#include "netdecoy/util/rng.hpp"

namespace netdecoy::process {

struct ProcessState {
	std::vector<double> x;
	double t = 0.0;
};

struct ControlCommand {
	size_t target_index = 0;
	double setpoint = 0.0;
	uint16_t issuer = 0;
};

enum class StateError {
	UnknownIndex,
};

namespace detail {

constexpr double kBoundSlack = 1e-12;

inline bool within_bounds(const std::vector<double>& x, const Bounds& b, double slack) {
	for (size_t i = 0; i < x.size(); ++i)
		if (x[i] < b.lower[i] - slack || x[i] > b.upper[i] + slack) return false;
	return true;
}

inline void clip(std::vector<double>& x, const Bounds& b) {
	for (size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], b.lower[i], b.upper[i]);
}

} // namespace detail

/// Deterministic starting point: box midpoint projected onto the law,
/// falling back to a polytope vertex when the midpoint projects outside
/// the box.
inline std::optional<ProcessState> initial_state(const ProcessLaw& law, const Bounds& b) {
	const size_t n = law.n_vars();
	std::vector<double> mid(n);
	for (size_t i = 0; i < n; ++i) mid[i] = 0.5 * (b.lower[i] + b.upper[i]);
	auto proj = project_affine(law.c, law.d, mid);
	if (proj && detail::within_bounds(*proj, b, detail::kBoundSlack)) {
		detail::clip(*proj, b);
		return ProcessState{std::move(*proj), 0.0};
	}
	lp::LinearProgram feas;
	feas.c.assign(n, 0.0);
	feas.lo = b.lower;
	feas.hi = b.upper;
	for (size_t r = 0; r < law.c.rows; ++r) {
		std::vector<double> row(n);
		for (size_t c = 0; c < n; ++c) row[c] = law.c.at(r, c);
		feas.a_eq.push_back(std::move(row));
		feas.b_eq.push_back(law.d[r]);
	}
	auto sol = lp::solve(feas);
	if (sol.status != lp::LpStatus::Optimal) return std::nullopt;
	return ProcessState{std::move(sol.x), 0.0};
}

/// One random-walk step: perturb, clip to the box, project back onto the
/// law. A projection that exits the box is retried with a fresh
/// perturbation; after 20 misses the state holds still.
inline ProcessState step(const ProcessState& state, const ProcessLaw& law, const Bounds& bounds,
                         Rng& rng, double sigma) {
	const size_t n = state.x.size();
	for (int attempt = 0; attempt < 20; ++attempt) {
		std::vector<double> cand(n);
		for (size_t i = 0; i < n; ++i) cand[i] = state.x[i] + sigma * rng.gaussian();
		detail::clip(cand, bounds);
		auto proj = project_affine(law.c, law.d, cand);
		if (!proj || !detail::within_bounds(*proj, bounds, detail::kBoundSlack)) continue;
		detail::clip(*proj, bounds);
		return ProcessState{std::move(*proj), state.t};
	}
	return state;
}

/// Pins x[target] at the clipped setpoint and projects the remaining
/// components back onto the law. applied=false (state unchanged) when no
/// in-bounds completion exists.
inline Result<std::pair<ProcessState, bool>, StateError> apply_command(const ProcessState& state,
                                                                       const ControlCommand& cmd,
                                                                       const ProcessLaw& law,
                                                                       const Bounds& bounds) {
	const size_t n = state.x.size();
	if (cmd.target_index >= n) return StateError::UnknownIndex;
	const size_t tgt = cmd.target_index;
	double pinned = std::clamp(cmd.setpoint, bounds.lower[tgt], bounds.upper[tgt]);

	// law restricted to the free components; the pinned column moves to
	// the right-hand side
	Matrix cf(law.c.rows, n > 0 ? n - 1 : 0);
	std::vector<double> df(law.c.rows);
	for (size_t r = 0; r < law.c.rows; ++r) {
		size_t cc = 0;
		for (size_t c = 0; c < n; ++c) {
			if (c == tgt) continue;
			cf.at(r, cc++) = law.c.at(r, c);
		}
		df[r] = law.d[r] - law.c.at(r, tgt) * pinned;
	}
	std::vector<double> vf;
	vf.reserve(n - 1);
	for (size_t c = 0; c < n; ++c)
		if (c != tgt) vf.push_back(state.x[c]);

	auto proj = project_affine(cf, df, vf);
	if (!proj) return std::make_pair(state, false);

	std::vector<double> next(n);
	size_t cc = 0;
	for (size_t c = 0; c < n; ++c) next[c] = (c == tgt) ? pinned : (*proj)[cc++];
	if (!detail::within_bounds(next, bounds, detail::kBoundSlack))
		return std::make_pair(state, false);
	detail::clip(next, bounds);
	return std::make_pair(ProcessState{std::move(next), state.t}, true);
}

/// Integer counts as a field device would report them.
inline Result<std::vector<int32_t>, StateError> observe(const ProcessState& state,
                                                        const std::vector<size_t>& indices,
                                                        const ProcessLaw& law) {
	std::vector<int32_t> out;
	out.reserve(indices.size());
	for (size_t idx : indices) {
		if (idx >= law.n_real) return StateError::UnknownIndex;
		out.push_back(static_cast<int32_t>(std::llround(state.x[idx] / law.scaling)));
	}
	return out;
}

} // namespace netdecoy::process
