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
#include <optional>
#include <vector>

#include "netdecoy/dnp3/app.hpp"
#include "netdecoy/fingerprint/profile.hpp"
#include "netdecoy/mislead/plan.hpp"
#include "netdecoy/process/law.hpp"
#include "netdecoy/process/state.hpp"
#include "netdecoy/util/linalg.hpp"
#include "netdecoy/util/rng.hpp"

namespace netdecoy::ctrl {

/// Everything the spoof path reads. All pointers are immutable snapshots,
/// so the same snapshot can serve many worker threads; the only mutable
/// input is each worker's own Rng.
struct SpoofSnapshot {
	const process::ProcessLaw* law = nullptr;
	const process::Bounds* bounds = nullptr;
	const mislead::PhantomPlan* plan = nullptr;
	const fingerprint::NodeProfile* profile = nullptr; // peer being impersonated
	std::vector<double> jitter_range; // per variable, engineering units
};

struct SpoofReply {
	dnp3::AppFragment fragment;
	double delay = 0.0;
	bool is_ack = false; // command acknowledgment rather than measurements
};

/// Per-response view: plan.y nudged within the per-variable jitter range,
/// put back on the law's hyperplane so the fabricated values still sum
/// where they should. Falls back to the plain plan when the nudge leaves
/// the box.
inline std::vector<double> jittered_view(const SpoofSnapshot& snap, Rng& rng) {
	const auto& y = snap.plan->y;
	std::vector<double> v = y;
	for (size_t i = 0; i < v.size(); ++i) {
		double r = i < snap.jitter_range.size() ? snap.jitter_range[i] : 0.0;
		v[i] += rng.uniform(-r, r);
	}
	if (snap.law->c.rows > 0) {
		std::vector<double> rhs = mat_vec(snap.law->c, y);
		auto proj = project_affine(snap.law->c, rhs, v);
		if (!proj) return y;
		v = *proj;
	}
	if (!process::detail::within_bounds(v, *snap.bounds, 1e-9)) return y;
	return v;
}

/// The whole spoof pipeline as a pure function: classify the request,
/// fabricate the payload, sample a believable delay. Returns nothing for
/// frames that are not requests (we never answer a RESPONSE).
inline std::optional<SpoofReply> make_spoof_reply(const SpoofSnapshot& snap,
                                                  const dnp3::AppFragment& request, Rng& rng) {
	if (!dnp3::is_request(request.function)) return std::nullopt;
	SpoofReply out;
	out.delay = snap.profile->sample_response_delay(static_cast<uint8_t>(request.function), rng);
	switch (request.function) {
	case dnp3::FunctionCode::Read: {
		// The honeypot advertises the full point map, phantoms included;
		// a poll sees every variable the plan fabricates.
		std::vector<double> v = jittered_view(snap, rng);
		std::vector<int32_t> counts(v.size());
		for (size_t i = 0; i < v.size(); ++i)
			counts[i] = static_cast<int32_t>(std::llround(v[i] / snap.law->scaling));
		out.fragment = dnp3::encode_analog_response(counts, request.transport_seq);
		out.fragment.app_seq = request.app_seq;
		out.is_ack = false;
		return out;
	}
	case dnp3::FunctionCode::Operate:
	case dnp3::FunctionCode::Write: {
		out.fragment = dnp3::make_operate_ack(request);
		out.is_ack = true;
		return out;
	}
	default:
		return std::nullopt;
	}
}

} // namespace netdecoy::ctrl
