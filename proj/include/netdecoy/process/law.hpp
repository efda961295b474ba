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
#include <string>
#include <vector>

#include "netdecoy/lp/simplex.hpp"
#include "netdecoy/util/linalg.hpp"
#include "netdecoy/util/result.hpp"

namespace netdecoy::process {

/// Conservation law C·v = d over the full variable vector. The first
/// n_real components are backed by physical points; the rest exist only
/// in spoofed views handed to quarantined nodes.
struct ProcessLaw {
	size_t n_real = 0;
	size_t n_phantom = 0;
	Matrix c;               // k rows, n_real + n_phantom columns
	std::vector<double> d;  // k entries
	double scaling = 0.01;  // engineering units per integer count

	size_t n_vars() const { return n_real + n_phantom; }
	size_t n_constraints() const { return c.rows; }
};

struct Bounds {
	std::vector<double> lower;
	std::vector<double> upper;
	std::vector<double> safety_limit; // s_i >= upper_i; crossing it is damage
};

enum class LawError {
	BadDimensions,
	DependentRows,
	EmptyPolytope,
	BadBounds,
	BadScaling,
};

inline const char* to_string(LawError e) {
	switch (e) {
	case LawError::BadDimensions: return "BadDimensions";
	case LawError::DependentRows: return "DependentRows";
	case LawError::EmptyPolytope: return "EmptyPolytope";
	case LawError::BadBounds: return "BadBounds";
	case LawError::BadScaling: return "BadScaling";
	}
	return "?";
}

/// Loads reject anything the runtime would otherwise have to defend
/// against: wrong shapes, dependent constraint rows, bounds that cross,
/// or a law no point inside the box can satisfy.
inline Result<std::monostate, LawError> validate(const ProcessLaw& law, const Bounds& b) {
	const size_t n = law.n_vars();
	if (n == 0) return LawError::BadDimensions;
	if (law.c.rows != law.d.size()) return LawError::BadDimensions;
	if (law.c.rows > 0 && law.c.cols != n) return LawError::BadDimensions;
	if (law.c.rows >= n) return LawError::BadDimensions;
	if (b.lower.size() != n || b.upper.size() != n || b.safety_limit.size() != n)
		return LawError::BadDimensions;
	if (!(law.scaling > 0.0)) return LawError::BadScaling;
	for (size_t i = 0; i < n; ++i) {
		if (!(b.lower[i] < b.upper[i])) return LawError::BadBounds;
		if (b.safety_limit[i] < b.upper[i]) return LawError::BadBounds;
	}
	if (law.c.rows > 0 && rank(law.c) < law.c.rows) return LawError::DependentRows;

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
	if (lp::solve(feas).status != lp::LpStatus::Optimal) return LawError::EmptyPolytope;
	return std::monostate{};
}

} // namespace netdecoy::process
