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
#include <limits>
#include <vector>

#include "netdecoy/lp/simplex.hpp"
#include "netdecoy/mislead/adversary.hpp"
#include "netdecoy/process/law.hpp"
#include "netdecoy/util/result.hpp"

namespace netdecoy::mislead {

/// A fabricated plant view for one quarantined node. When feasible, an
/// adversary that believes y and plays argmax-attractiveness will command
/// the phantom variable `target` with margin `margin` over every real
/// variable.
struct PhantomPlan {
	std::vector<double> y;
	size_t target = 0;
	double margin = 0.0;
	bool feasible = false;
	double created_at = 0.0;
	size_t lp_iterations = 0;
};

enum class PlanError {
	DegenerateLaw,
	BadPhantomSet,
	TooLarge,
};

inline const char* to_string(PlanError e) {
	switch (e) {
	case PlanError::DegenerateLaw: return "DegenerateLaw";
	case PlanError::BadPhantomSet: return "BadPhantomSet";
	case PlanError::TooLarge: return "TooLarge";
	}
	return "?";
}

namespace detail {

/// d̂: what the law's right-hand side looks like given the observation,
/// with unobserved phantom entries taken at their box midpoints.
inline std::vector<double> pad_observation(const std::vector<double>& x_obs,
                                           const process::ProcessLaw& law,
                                           const process::Bounds& b) {
	std::vector<double> full(law.n_vars());
	for (size_t i = 0; i < full.size(); ++i) {
		if (i < x_obs.size() && i < law.n_real)
			full[i] = x_obs[i];
		else
			full[i] = 0.5 * (b.lower[i] + b.upper[i]);
	}
	return full;
}

/// Re-derives target and margin from the vector itself, exactly as
/// decide() would see it. Keeps the plan honest against LP slack.
inline void grade_plan(PhantomPlan& plan, const process::ProcessLaw& law,
                       const process::Bounds& b, const std::vector<size_t>& phantoms,
                       const AdversaryModel& adv) {
	plan.target = adv.argmax(plan.y, b);
	if (law.n_real == 0) {
		plan.target = phantoms.front();
		plan.margin = std::numeric_limits<double>::infinity();
		plan.feasible = true;
		return;
	}
	double best_real = -std::numeric_limits<double>::infinity();
	for (size_t j = 0; j < law.n_real; ++j)
		best_real = std::max(best_real, adv.attractiveness(plan.y, j, b));
	plan.margin = adv.attractiveness(plan.y, plan.target, b) - best_real;
	bool in_set = std::find(phantoms.begin(), phantoms.end(), plan.target) != phantoms.end();
	plan.feasible = in_set && plan.margin > 0.0;
}

} // namespace detail

/// Fabricates the most misleading law-consistent view: per candidate
/// phantom p, maximize δ subject to
///   a_p(y) − a_j(y) ≥ δ for every real j,
///   C·y = C·(padded observation),
///   l ≤ y ≤ u,
/// then keep the candidate whose recomputed margin is largest. Falls back
/// to the padded observation (feasible = false) when no candidate wins.
inline Result<PhantomPlan, PlanError> plan_phantom(const std::vector<double>& x_obs,
                                                   const process::ProcessLaw& law,
                                                   const process::Bounds& bounds,
                                                   const std::vector<size_t>& phantoms,
                                                   const AdversaryModel& adv) {
	const size_t n = law.n_vars();
	if (phantoms.empty()) return PlanError::BadPhantomSet;
	for (size_t p : phantoms)
		if (p < law.n_real || p >= n) return PlanError::BadPhantomSet;
	if (law.c.rows > 0 && rank(law.c) < law.c.rows) return PlanError::DegenerateLaw;

	std::vector<double> padded = detail::pad_observation(x_obs, law, bounds);
	std::vector<double> d_hat = mat_vec(law.c, padded);

	PhantomPlan fallback;
	fallback.y = padded;
	detail::grade_plan(fallback, law, bounds, phantoms, adv);

	if (law.n_real == 0) {
		// no real competitors; the padded midpoint satisfies C·y = d̂ by
		// construction, so it is already a feasible misleading view
		return fallback;
	}

	auto alpha = [&](size_t i) {
		double span = bounds.safety_limit[i] - bounds.lower[i];
		return 1.0 / (span < 1e-9 ? 1e-9 : span);
	};

	PhantomPlan best = fallback;
	best.feasible = false;
	size_t total_iterations = 0;
	for (size_t p : phantoms) {
		lp::LinearProgram prog;
		prog.c.assign(n + 1, 0.0);
		prog.c[n] = 1.0; // maximize the margin variable
		prog.lo = bounds.lower;
		prog.hi = bounds.upper;
		prog.lo.push_back(-2.0); // attractiveness differences live in [-1, 1]
		prog.hi.push_back(2.0);
		for (size_t r = 0; r < law.c.rows; ++r) {
			std::vector<double> row(n + 1, 0.0);
			for (size_t c = 0; c < n; ++c) row[c] = law.c.at(r, c);
			prog.a_eq.push_back(std::move(row));
			prog.b_eq.push_back(d_hat[r]);
		}
		for (size_t j = 0; j < law.n_real; ++j) {
			// a_p(y) − a_j(y) ≥ δ  ⇔  −α_p y_p + α_j y_j + δ ≤ α_j l_j − α_p l_p
			std::vector<double> row(n + 1, 0.0);
			row[p] -= alpha(p);
			row[j] += alpha(j);
			row[n] = 1.0;
			prog.a_ub.push_back(std::move(row));
			prog.b_ub.push_back(alpha(j) * bounds.lower[j] - alpha(p) * bounds.lower[p]);
		}
		auto sol = lp::solve(prog);
		total_iterations += sol.iterations;
		if (sol.status != lp::LpStatus::Optimal) continue;
		PhantomPlan cand;
		cand.y.assign(sol.x.begin(), sol.x.begin() + static_cast<long>(n));
		detail::grade_plan(cand, law, bounds, phantoms, adv);
		if (cand.feasible && (!best.feasible || cand.margin > best.margin)) best = cand;
	}
	best.lp_iterations = total_iterations;
	return best;
}

/// Exhaustive check of plan_phantom on small instances: walk a regular
/// grid over the box, keep points that satisfy the law to within half a
/// grid cell per row, and grade each exactly as plan_phantom does.
inline Result<PhantomPlan, PlanError> brute_force_plan(const std::vector<double>& x_obs,
                                                       const process::ProcessLaw& law,
                                                       const process::Bounds& bounds,
                                                       const std::vector<size_t>& phantoms,
                                                       const AdversaryModel& adv, size_t grid_n) {
	const size_t n = law.n_vars();
	if (n > 4 || grid_n > 101 || grid_n < 2) return PlanError::TooLarge;
	if (phantoms.empty()) return PlanError::BadPhantomSet;
	for (size_t p : phantoms)
		if (p < law.n_real || p >= n) return PlanError::BadPhantomSet;

	std::vector<double> padded = detail::pad_observation(x_obs, law, bounds);
	std::vector<double> d_hat = mat_vec(law.c, padded);

	std::vector<double> spacing(n);
	for (size_t i = 0; i < n; ++i)
		spacing[i] = (bounds.upper[i] - bounds.lower[i]) / static_cast<double>(grid_n - 1);
	std::vector<double> row_tol(law.c.rows, 0.0);
	for (size_t r = 0; r < law.c.rows; ++r)
		for (size_t c = 0; c < n; ++c)
			row_tol[r] += std::fabs(law.c.at(r, c)) * spacing[c] * 0.5;

	PhantomPlan best;
	best.y = padded;
	best.feasible = false;
	best.margin = -std::numeric_limits<double>::infinity();
	bool any = false;

	std::vector<size_t> idx(n, 0);
	std::vector<double> y(n);
	for (;;) {
		for (size_t i = 0; i < n; ++i) y[i] = bounds.lower[i] + spacing[i] * static_cast<double>(idx[i]);
		bool lawful = true;
		for (size_t r = 0; r < law.c.rows && lawful; ++r) {
			double acc = -d_hat[r];
			for (size_t c = 0; c < n; ++c) acc += law.c.at(r, c) * y[c];
			lawful = std::fabs(acc) <= row_tol[r] + 1e-12;
		}
		if (lawful) {
			PhantomPlan cand;
			cand.y = y;
			detail::grade_plan(cand, law, bounds, phantoms, adv);
			if (!any || cand.margin > best.margin) {
				best = cand;
				any = true;
			}
		}
		size_t k = 0;
		while (k < n && ++idx[k] == grid_n) idx[k++] = 0;
		if (k == n) break;
	}
	if (!any) best.feasible = false;
	return best;
}

} // namespace netdecoy::mislead
