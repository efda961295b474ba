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
#include <optional>
#include <vector>

namespace netdecoy {

struct Matrix {
	size_t rows = 0;
	size_t cols = 0;
	std::vector<double> a; // row-major

	Matrix() = default;
	Matrix(size_t r, size_t c) : rows(r), cols(c), a(r * c, 0.0) {}
	Matrix(size_t r, size_t c, std::vector<double> data) : rows(r), cols(c), a(std::move(data)) {}

	double& at(size_t r, size_t c) { return a[r * cols + c]; }
	double at(size_t r, size_t c) const { return a[r * cols + c]; }
};

inline std::vector<double> mat_vec(const Matrix& m, const std::vector<double>& v) {
	std::vector<double> out(m.rows, 0.0);
	for (size_t r = 0; r < m.rows; ++r)
		for (size_t c = 0; c < m.cols; ++c) out[r] += m.at(r, c) * v[c];
	return out;
}

inline std::vector<double> matT_vec(const Matrix& m, const std::vector<double>& v) {
	std::vector<double> out(m.cols, 0.0);
	for (size_t r = 0; r < m.rows; ++r)
		for (size_t c = 0; c < m.cols; ++c) out[c] += m.at(r, c) * v[r];
	return out;
}

inline Matrix gram(const Matrix& m) {
	Matrix g(m.rows, m.rows);
	for (size_t i = 0; i < m.rows; ++i)
		for (size_t j = 0; j <= i; ++j) {
			double s = 0;
			for (size_t c = 0; c < m.cols; ++c) s += m.at(i, c) * m.at(j, c);
			g.at(i, j) = s;
			g.at(j, i) = s;
		}
	return g;
}

inline size_t rank(Matrix m, double tol = 1e-10) {
	size_t rk = 0;
	for (size_t c = 0; c < m.cols && rk < m.rows; ++c) {
		size_t piv = rk;
		for (size_t r = rk + 1; r < m.rows; ++r)
			if (std::fabs(m.at(r, c)) > std::fabs(m.at(piv, c))) piv = r;
		if (std::fabs(m.at(piv, c)) <= tol) continue;
		for (size_t k = 0; k < m.cols; ++k) std::swap(m.at(piv, k), m.at(rk, k));
		for (size_t r = rk + 1; r < m.rows; ++r) {
			double f = m.at(r, c) / m.at(rk, c);
			for (size_t k = c; k < m.cols; ++k) m.at(r, k) -= f * m.at(rk, k);
		}
		++rk;
	}
	return rk;
}

/// Gaussian elimination with partial pivoting. A consistent singular system
/// yields a particular solution (free variables at zero); an inconsistent
/// one yields nullopt.
inline std::optional<std::vector<double>> solve_linear(Matrix m, std::vector<double> b,
                                                       double tol = 1e-10) {
	const size_t n = m.rows;
	if (m.cols != n || b.size() != n) return std::nullopt;
	std::vector<size_t> pivot_col(n, n);
	size_t rk = 0;
	for (size_t c = 0; c < n && rk < n; ++c) {
		size_t piv = rk;
		for (size_t r = rk + 1; r < n; ++r)
			if (std::fabs(m.at(r, c)) > std::fabs(m.at(piv, c))) piv = r;
		if (std::fabs(m.at(piv, c)) <= tol) continue;
		for (size_t k = 0; k < n; ++k) std::swap(m.at(piv, k), m.at(rk, k));
		std::swap(b[piv], b[rk]);
		for (size_t r = 0; r < n; ++r) {
			if (r == rk) continue;
			double f = m.at(r, c) / m.at(rk, c);
			if (f == 0.0) continue;
			for (size_t k = c; k < n; ++k) m.at(r, k) -= f * m.at(rk, k);
			b[r] -= f * b[rk];
		}
		pivot_col[rk] = c;
		++rk;
	}
	for (size_t r = rk; r < n; ++r)
		if (std::fabs(b[r]) > tol) return std::nullopt;
	std::vector<double> x(n, 0.0);
	for (size_t r = 0; r < rk; ++r) x[pivot_col[r]] = b[r] / m.at(r, pivot_col[r]);
	return x;
}

/// Orthogonal projection of v onto the affine subspace {w : M·w = d}.
/// nullopt when the constraints are mutually inconsistent.
inline std::optional<std::vector<double>> project_affine(const Matrix& m,
                                                         const std::vector<double>& d,
                                                         const std::vector<double>& v) {
	if (m.rows == 0) return v;
	std::vector<double> resid = mat_vec(m, v);
	for (size_t r = 0; r < m.rows; ++r) resid[r] -= d[r];
	auto w = solve_linear(gram(m), resid);
	if (!w) return std::nullopt;
	std::vector<double> corr = matT_vec(m, *w);
	std::vector<double> out(v);
	for (size_t c = 0; c < m.cols; ++c) out[c] -= corr[c];
	return out;
}

inline double linf_residual(const Matrix& m, const std::vector<double>& d,
                            const std::vector<double>& v) {
	double worst = 0.0;
	std::vector<double> mv = mat_vec(m, v);
	for (size_t r = 0; r < m.rows; ++r) worst = std::max(worst, std::fabs(mv[r] - d[r]));
	return worst;
}

} // namespace netdecoy
