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

#include <cstdint>
#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "netdecoy/dnp3/transport.hpp"
#include "netdecoy/util/rng.hpp"

namespace netdecoy::fingerprint {

/// Bounded uniform sample of a stream (algorithm R). Every element seen
/// so far had equal probability of being retained.
struct Reservoir {
	size_t capacity = 4096;
	size_t seen = 0;
	std::vector<double> items;

	void add(double v, Rng& rng) {
		++seen;
		if (items.size() < capacity) {
			items.push_back(v);
			return;
		}
		uint64_t j = rng.below(seen);
		if (j < capacity) items[j] = v;
	}

	bool empty() const { return items.empty(); }

	double sample(Rng& rng) const { return items[rng.below(items.size())]; }
};

struct ValueBounds {
	double lo = 0.0;
	double hi = 0.0;
	size_t count = 0;

	void fold(double v) {
		if (count == 0) {
			lo = hi = v;
		} else {
			lo = std::min(lo, v);
			hi = std::max(hi, v);
		}
		++count;
	}
};

enum class Direction { Sent, Received };

enum class ProfileError {
	UnparseableFrame,
};

/// Everything the controller knows about one node's traffic, learned
/// passively at the tap. Spoofed replies are shaped from these
/// structures and nothing else.
class NodeProfile {
public:
	uint16_t node_id = 0;
	// frame-level, sender side; keyed by raw function octet (0 = unknown)
	std::map<uint8_t, std::map<size_t, size_t>> length_hist;
	std::map<uint8_t, size_t> class_mix;
	// fragment-level
	std::map<uint8_t, Reservoir> latency; // response delay by request class
	std::vector<ValueBounds> value_bounds; // by point index within this node
	double last_seen = 0.0;
	size_t frames_observed = 0;
	size_t fragments_decoded = 0;

	/// Folds one link frame through the profile. Frame stats update on
	/// transport-parseable frames; latency, class mix of fragments, and
	/// value bounds update only when a whole fragment decodes.
	Result<std::monostate, ProfileError> observe(const dnp3::LinkFrame& frame, Direction dir,
	                                             double timestamp, Rng& rng) {
		if (frame.user_data.empty()) return ProfileError::UnparseableFrame;
		last_seen = timestamp;
		uint8_t transport = frame.user_data[0];
		bool fir = (transport & 0x40) != 0;
		bool fin = (transport & 0x80) != 0;

		StreamKey key{frame.src, frame.dest};
		Stream& stream = streams_[key];
		if (fir) {
			stream.app_bytes.clear();
			// the app header rides in the first frame: function octet
			// follows [transport][app_control]
			stream.klass = frame.user_data.size() >= 3 ? frame.user_data[2] : 0;
			stream.first_seq = transport & 0x3F;
			stream.first_t = timestamp;
			stream.active = true;
			stream.expected_seq = transport & 0x3F;
		} else if (!stream.active || (transport & 0x3F) != ((stream.expected_seq + 1) & 0x3F)) {
			stream.active = false;
			record_frame(dir, 0, frame);
			return ProfileError::UnparseableFrame;
		}
		if (!fir) stream.expected_seq = (stream.expected_seq + 1) & 0x3F;
		record_frame(dir, stream.klass, frame);
		stream.app_bytes.insert(stream.app_bytes.end(), frame.user_data.begin() + 1,
		                        frame.user_data.end());
		if (!fin) return std::monostate{};

		stream.active = false;
		auto frag = dnp3::decode_fragment(stream.app_bytes);
		if (!frag.ok()) return ProfileError::UnparseableFrame;
		frag.value().transport_seq = stream.first_seq;
		on_fragment(frag.value(), frame, dir, stream.first_t, timestamp, rng);
		return std::monostate{};
	}

	/// Believable reply latency for a request class: a uniform draw from
	/// the learned reservoir, jittered 5% either way. Cold start falls
	/// back to 10 ms before jitter.
	double sample_response_delay(uint8_t request_class, Rng& rng) const {
		double base = 0.010;
		auto it = latency.find(request_class);
		if (it != latency.end() && !it->second.empty()) base = it->second.sample(rng);
		return base * (1.0 + rng.uniform(-0.05, 0.05));
	}

	size_t frames_in_histograms() const {
		size_t total = 0;
		for (const auto& [klass, hist] : length_hist)
			for (const auto& [len, count] : hist) total += count;
		return total;
	}

private:
	using StreamKey = std::pair<uint16_t, uint16_t>; // (src, dst)

	struct Stream {
		bool active = false;
		uint8_t klass = 0;
		uint8_t first_seq = 0;
		uint8_t expected_seq = 0;
		double first_t = 0.0;
		Bytes app_bytes;
	};

	struct PendingRequest {
		double completed_at = 0.0;
		uint8_t klass = 0;
	};

	std::map<StreamKey, Stream> streams_;
	std::map<std::tuple<uint16_t, uint16_t, uint8_t>, PendingRequest> pending_;

	void record_frame(Direction dir, uint8_t klass, const dnp3::LinkFrame& frame) {
		++frames_observed;
		if (dir != Direction::Sent) return;
		size_t wire = dnp3::encoded_link_size(frame.user_data.size());
		++length_hist[klass][wire];
		++class_mix[klass];
	}

	void on_fragment(const dnp3::AppFragment& frag, const dnp3::LinkFrame& last_frame,
	                 Direction dir, double first_t, double fin_t, Rng& rng) {
		++fragments_decoded;
		using dnp3::FunctionCode;
		if (frag.function != FunctionCode::Response) {
			// a request addressed to this node opens a latency window,
			// closed by the matching response keyed (dst, src, seq)
			if (dir == Direction::Received) {
				pending_[{last_frame.src, last_frame.dest, frag.transport_seq}] =
				    PendingRequest{fin_t, static_cast<uint8_t>(frag.function)};
			}
			return;
		}
		if (dir == Direction::Sent) {
			auto it = pending_.find({last_frame.dest, last_frame.src, frag.transport_seq});
			if (it != pending_.end()) {
				latency[it->second.klass].add(first_t - it->second.completed_at, rng);
				pending_.erase(it);
			}
			for (const auto& block : frag.objects) {
				const auto* pts = block.analog();
				if (!pts) continue;
				if (value_bounds.size() < pts->size()) value_bounds.resize(pts->size());
				for (size_t i = 0; i < pts->size(); ++i)
					value_bounds[i].fold(static_cast<double>((*pts)[i].value));
			}
		}
	}
};

} // namespace netdecoy::fingerprint
