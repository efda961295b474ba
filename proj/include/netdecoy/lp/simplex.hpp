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

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace netdecoy::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr size_t kMaxVariables = 64;

enum class LpStatus {
	Optimal,
	Infeasible,
	Unbounded,
	DimensionMismatch,
};

inline const char* to_string(LpStatus s) {
	switch (s) {
	case LpStatus::Optimal: return "Optimal";
	case LpStatus::Infeasible: return "Infeasible";
	case LpStatus::Unbounded: return "Unbounded";
	case LpStatus::DimensionMismatch: return "DimensionMismatch";
	}
	return "?";
}

/// maximize c·x  subject to  a_eq·x = b_eq,  a_ub·x ≤ b_ub,  lo ≤ x ≤ hi.
/// Box entries may be ±infinity.
struct LinearProgram {
	std::vector<double> c;
	std::vector<std::vector<double>> a_eq;
	std::vector<double> b_eq;
	std::vector<std::vector<double>> a_ub;
	std::vector<double> b_ub;
	std::vector<double> lo;
	std::vector<double> hi;
};

struct LpSolution {
	LpStatus status = LpStatus::Infeasible;
	std::vector<double> x; // structural values, meaningful when Optimal
	double objective = 0.0;
	size_t iterations = 0;
};

namespace detail {

// Structural variable i maps into nonnegative tableau columns as
// x_i = shift + z[col]            (sign +1: shifted by a finite lower bound)
// x_i = shift - z[col]            (sign -1: flipped around a finite upper bound)
// x_i = z[col] - z[neg]           (split: both bounds infinite)
struct VarMap {
	double shift = 0.0;
	double sign = 1.0;
	size_t col = 0;
	size_t neg = 0;
	bool split = false;
};

constexpr double kPivotEps = 1e-9;
constexpr double kFeasTol = 1e-7;

// Two-phase dense tableau; Bland's rule throughout, so no cycling.
class Tableau {
public:
	// rows: [z columns | slack columns | artificial columns | rhs]
	std::vector<std::vector<double>> rows;
	std::vector<size_t> basis;    // basic column per row
	std::vector<double> cost;     // reduced-cost row, length n_cols + 1
	size_t n_cols = 0;            // all columns except rhs
	size_t n_decision = 0;        // z + slack columns; artificials sit beyond
	size_t iterations = 0;

	double& rhs(size_t r) { return rows[r][n_cols]; }

	void pivot(size_t r, size_t j) {
		double p = rows[r][j];
		for (auto& v : rows[r]) v /= p;
		for (size_t i = 0; i < rows.size(); ++i) {
			if (i == r || std::fabs(rows[i][j]) < kPivotEps * 1e-3) continue;
			double f = rows[i][j];
			for (size_t k = 0; k <= n_cols; ++k) rows[i][k] -= f * rows[r][k];
			rows[i][j] = 0.0;
		}
		double f = cost[j];
		if (std::fabs(f) > 0) {
			for (size_t k = 0; k <= n_cols; ++k) cost[k] -= f * rows[r][k];
			cost[j] = 0.0;
		}
		basis[r] = j;
		++iterations;
	}

	// Minimizes the current cost row over columns [0, limit).
	// Returns Optimal or Unbounded.
	LpStatus run(size_t limit) {
		for (size_t guard = 0; guard < 200000; ++guard) {
			size_t enter = limit;
			for (size_t j = 0; j < limit; ++j) {
				if (cost[j] < -kPivotEps) { enter = j; break; } // Bland: lowest index
			}
			if (enter == limit) return LpStatus::Optimal;
			size_t leave = rows.size();
			double best = kInf;
			for (size_t r = 0; r < rows.size(); ++r) {
				if (rows[r][enter] <= kPivotEps) continue;
				double ratio = rhs(r) / rows[r][enter];
				if (ratio < best - kPivotEps ||
				    (ratio < best + kPivotEps && (leave == rows.size() || basis[r] < basis[leave]))) {
					best = ratio;
					leave = r;
				}
			}
			if (leave == rows.size()) return LpStatus::Unbounded;
			pivot(leave, enter);
		}
		return LpStatus::Infeasible; // numerical stall; unreachable under Bland
	}
};

} // namespace detail

inline LpSolution solve(const LinearProgram& p) {
	using namespace detail;
	LpSolution out;
	const size_t n = p.c.size();
	auto mismatch = [&] {
		out.status = LpStatus::DimensionMismatch;
		return out;
	};
	if (n == 0 || n > kMaxVariables) return mismatch();
	if (p.lo.size() != n || p.hi.size() != n) return mismatch();
	if (p.a_eq.size() != p.b_eq.size() || p.a_ub.size() != p.b_ub.size()) return mismatch();
	for (const auto& row : p.a_eq)
		if (row.size() != n) return mismatch();
	for (const auto& row : p.a_ub)
		if (row.size() != n) return mismatch();
	for (size_t i = 0; i < n; ++i) {
		if (p.lo[i] > p.hi[i]) {
			out.status = LpStatus::Infeasible;
			return out;
		}
	}

	// Nonnegative substitution per variable; finite spans become box rows.
	std::vector<VarMap> vmap(n);
	size_t n_z = 0;
	size_t n_box = 0;
	for (size_t i = 0; i < n; ++i) {
		VarMap& m = vmap[i];
		if (p.lo[i] > -kInf) {
			m.shift = p.lo[i];
			m.sign = 1.0;
			m.col = n_z++;
			if (p.hi[i] < kInf) ++n_box;
		} else if (p.hi[i] < kInf) {
			m.shift = p.hi[i];
			m.sign = -1.0;
			m.col = n_z++;
		} else {
			m.split = true;
			m.col = n_z++;
			m.neg = n_z++;
		}
	}

	const size_t n_ub = p.a_ub.size();
	const size_t n_rows = p.a_eq.size() + n_ub + n_box;
	const size_t n_slack = n_ub + n_box;

	Tableau t;
	t.n_decision = n_z + n_slack;
	t.rows.assign(n_rows, {});
	t.basis.assign(n_rows, 0);

	// [z | slack | artificials...] built row by row; artificial count is
	// known only after rhs signs are fixed, so assemble in two passes.
	std::vector<std::vector<double>> body(n_rows, std::vector<double>(t.n_decision, 0.0));
	std::vector<double> rhs(n_rows, 0.0);
	std::vector<bool> has_pos_slack(n_rows, false);
	size_t row = 0;
	auto fill_structural = [&](const std::vector<double>& a, double b, size_t r) {
		double acc = b;
		for (size_t i = 0; i < n; ++i) {
			if (a[i] == 0.0) continue;
			acc -= a[i] * vmap[i].shift;
			body[r][vmap[i].col] += a[i] * vmap[i].sign;
			if (vmap[i].split) body[r][vmap[i].neg] -= a[i];
		}
		rhs[r] = acc;
	};
	for (size_t e = 0; e < p.a_eq.size(); ++e, ++row) fill_structural(p.a_eq[e], p.b_eq[e], row);
	size_t slack = n_z;
	for (size_t u = 0; u < n_ub; ++u, ++row) {
		fill_structural(p.a_ub[u], p.b_ub[u], row);
		body[row][slack] = 1.0;
		has_pos_slack[row] = true;
		++slack;
	}
	for (size_t i = 0; i < n; ++i) {
		if (!(p.lo[i] > -kInf && p.hi[i] < kInf)) continue;
		body[row][vmap[i].col] = 1.0;
		body[row][slack] = 1.0;
		rhs[row] = p.hi[i] - p.lo[i];
		has_pos_slack[row] = true;
		++slack;
		++row;
	}

	// Negative rhs rows are negated (their slack then no longer serves as
	// an initial basic column); those plus equality rows take artificials.
	size_t n_art = 0;
	for (size_t r = 0; r < n_rows; ++r) {
		if (rhs[r] < 0) {
			for (auto& v : body[r]) v = -v;
			rhs[r] = -rhs[r];
			has_pos_slack[r] = false;
		}
		if (!has_pos_slack[r]) ++n_art;
	}
	t.n_cols = t.n_decision + n_art;
	size_t art = t.n_decision;
	for (size_t r = 0; r < n_rows; ++r) {
		t.rows[r].assign(t.n_cols + 1, 0.0);
		std::copy(body[r].begin(), body[r].end(), t.rows[r].begin());
		t.rows[r][t.n_cols] = rhs[r];
		if (has_pos_slack[r]) {
			size_t s = 0;
			for (size_t j = n_z; j < t.n_decision; ++j)
				if (body[r][j] == 1.0) { s = j; break; }
			t.basis[r] = s;
		} else {
			t.rows[r][art] = 1.0;
			t.basis[r] = art;
			++art;
		}
	}

	// Phase 1: minimize the artificial sum.
	t.cost.assign(t.n_cols + 1, 0.0);
	for (size_t j = t.n_decision; j < t.n_cols; ++j) t.cost[j] = 1.0;
	for (size_t r = 0; r < n_rows; ++r) {
		if (t.basis[r] < t.n_decision) continue;
		for (size_t k = 0; k <= t.n_cols; ++k) t.cost[k] -= t.rows[r][k];
	}
	if (n_art > 0) {
		LpStatus s = t.run(t.n_cols);
		if (s != LpStatus::Optimal || -t.cost[t.n_cols] > kFeasTol) {
			out.status = LpStatus::Infeasible;
			out.iterations = t.iterations;
			return out;
		}
		// Basic artificials sit at zero; pivot them onto real columns or
		// drop the (redundant) row.
		for (size_t r = 0; r < t.rows.size();) {
			if (t.basis[r] < t.n_decision) { ++r; continue; }
			size_t j = t.n_decision;
			for (size_t k = 0; k < t.n_decision; ++k)
				if (std::fabs(t.rows[r][k]) > kPivotEps) { j = k; break; }
			if (j < t.n_decision) {
				t.pivot(r, j);
				++r;
			} else {
				t.rows.erase(t.rows.begin() + static_cast<long>(r));
				t.basis.erase(t.basis.begin() + static_cast<long>(r));
			}
		}
	}

	// Phase 2: maximize c·x = c·shift + g·z, i.e. minimize (-g)·z.
	std::fill(t.cost.begin(), t.cost.end(), 0.0);
	for (size_t i = 0; i < n; ++i) {
		if (p.c[i] == 0.0) continue;
		t.cost[vmap[i].col] -= p.c[i] * vmap[i].sign;
		if (vmap[i].split) t.cost[vmap[i].neg] += p.c[i];
	}
	for (size_t j = t.n_decision; j < t.n_cols; ++j) t.cost[j] = 0.0; // barred
	for (size_t r = 0; r < t.rows.size(); ++r) {
		double f = t.cost[t.basis[r]];
		if (f == 0.0) continue;
		for (size_t k = 0; k <= t.n_cols; ++k) t.cost[k] -= f * t.rows[r][k];
	}
	LpStatus s = t.run(t.n_decision);
	out.iterations = t.iterations;
	if (s != LpStatus::Optimal) {
		out.status = s;
		return out;
	}

	std::vector<double> z(t.n_decision, 0.0);
	for (size_t r = 0; r < t.rows.size(); ++r)
		if (t.basis[r] < t.n_decision) z[t.basis[r]] = t.rows[r][t.n_cols];
	out.x.resize(n);
	out.objective = 0.0;
	for (size_t i = 0; i < n; ++i) {
		const VarMap& m = vmap[i];
		out.x[i] = m.split ? z[m.col] - z[m.neg] : m.shift + m.sign * z[m.col];
		out.objective += p.c[i] * out.x[i];
	}
	out.status = LpStatus::Optimal;
	return out;
}

} // namespace netdecoy::lp
