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

#include <map>

#include "netdecoy/dnp3/link.hpp"
#include "netdecoy/fingerprint/profile.hpp"
#include "netdecoy/netsim/sim.hpp"
#include "netdecoy/util/rng.hpp"

namespace netdecoy::fingerprint {

/// Per-node profiles learned from tapped traffic. Every wire frame feeds
/// the sender's profile as Sent and the receiver's as Received, which is
/// what the latency pairing needs. Phantom-provenance frames are skipped:
/// learning from our own spoofed traffic would be circular.
class ProfileStore {
public:
	explicit ProfileStore(uint64_t seed) : rng_(Rng(seed).fork(0x9f0f)) {}

	void ingest(const netsim::Envelope& env, double t) {
		if (env.prov == netsim::Provenance::Phantom) return;
		auto frame = dnp3::decode_link_frame(env.frame);
		if (!frame.ok()) return;
		auto r1 = at_or_create(env.src).observe(frame.value(), Direction::Sent, t, rng_);
		auto r2 = at_or_create(env.dst).observe(frame.value(), Direction::Received, t, rng_);
		(void)r1;
		(void)r2; // unparseable frames still count toward frame stats
	}

	NodeProfile& at_or_create(uint16_t node) {
		auto it = profiles_.find(node);
		if (it == profiles_.end()) {
			it = profiles_.emplace(node, NodeProfile{}).first;
			it->second.node_id = node;
		}
		return it->second;
	}

	bool has(uint16_t node) const { return profiles_.count(node) != 0; }

	/// Profile for a node, or the empty default when it was never seen.
	/// The default's latency reservoirs are empty, so delay sampling uses
	/// the cold-start fallback.
	const NodeProfile& lookup(uint16_t node) const {
		auto it = profiles_.find(node);
		return it == profiles_.end() ? default_ : it->second;
	}

	const std::map<uint16_t, NodeProfile>& all() const { return profiles_; }

	/// Union of observed value bounds at one point index, across nodes.
	std::optional<ValueBounds> folded_bounds(size_t point_index) const {
		ValueBounds out;
		size_t samples = 0;
		for (const auto& [id, prof] : profiles_) {
			if (point_index >= prof.value_bounds.size()) continue;
			const ValueBounds& vb = prof.value_bounds[point_index];
			if (vb.count == 0) continue;
			out.fold(vb.lo);
			out.fold(vb.hi);
			samples += vb.count;
		}
		if (out.count == 0) return std::nullopt;
		out.count = samples;
		return out;
	}

private:
	Rng rng_;
	std::map<uint16_t, NodeProfile> profiles_;
	NodeProfile default_;
};

} // namespace netdecoy::fingerprint
