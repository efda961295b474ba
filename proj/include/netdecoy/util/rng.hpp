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
#include <cstdint>
#include <random>

namespace netdecoy {

/// Deterministic random source. The mappings from raw engine output to
/// doubles/ints are written out explicitly so identical seeds produce
/// identical streams regardless of standard-library distribution details.
class Rng {
public:
	explicit Rng(uint64_t seed) : engine_(seed), base_seed_(seed) {}

	/// Derive an independent stream for a named concern. Keeps draw order
	/// in one subsystem from perturbing another.
	Rng fork(uint64_t salt) const {
		return Rng(seed_mix(base_seed_, salt));
	}

	uint64_t next_u64() { return engine_(); }

	/// Uniform double in [0, 1).
	double uniform01() {
		return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
	}

	/// Uniform double in [lo, hi).
	double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

	/// Uniform integer in [0, n). n must be > 0.
	uint64_t below(uint64_t n) {
		// multiply-shift; bias is negligible for the small n used here
		return static_cast<uint64_t>((static_cast<__uint128_t>(engine_()) * n) >> 64);
	}

	/// Standard normal via Box-Muller (one value per call, no cached state).
	double gaussian() {
		double u1 = uniform01();
		double u2 = uniform01();
		while (u1 <= 0.0) u1 = uniform01();
		return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
	}

private:
	static uint64_t seed_mix(uint64_t a, uint64_t b) {
		// splitmix64 finalizer over the combined value
		uint64_t z = a + 0x9E3779B97F4A7C15ULL * (b + 1);
		z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
		z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
		return z ^ (z >> 31);
	}

	std::mt19937_64 engine_;
	uint64_t base_seed_ = 0;
};

} // namespace netdecoy
