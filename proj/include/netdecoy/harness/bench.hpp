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

#include <chrono>
#include <thread>

#include "netdecoy/controller/spoof.hpp"
#include "netdecoy/util/stats.hpp"

namespace netdecoy::harness {

struct BenchConfig {
	size_t n_points = 200;
	double duration = 3.0; // seconds per worker
	size_t workers = 1;
	uint64_t seed = 1;
};

struct BenchResult {
	size_t n_points = 0;
	size_t fragment_octets = 0; // application fragment
	size_t packet_octets = 0;   // on the wire, link framing included
	size_t workers = 0;
	uint64_t packets = 0;
	double duration = 0.0;
	double pps = 0.0;
	double mean_ms = 0.0;
	double p50_ms = 0.0;
	double p99_ms = 0.0;
	double derived_mbps = 0.0;    // pps x packet octets; comparison only
	size_t measured_wire_octets = 0;  // actually encoded, for cross-checking
	std::vector<double> latencies_ms; // per-response generation latency
};

/// Codec arithmetic for an n-point analog report: app header, one block
/// header, five octets per point.
inline size_t response_fragment_octets(size_t n_points) {
	return dnp3::kAppHeaderSize + dnp3::kBlockHeaderSize + n_points * dnp3::kAnalogPointSize;
}

inline size_t response_wire_octets(size_t n_points) {
	return dnp3::encoded_wire_size(response_fragment_octets(n_points));
}

namespace detail {

/// Immutable inputs shared by every bench worker: the spoof path reads,
/// never writes, so workers need nothing but their own generators.
struct BenchWorld {
	process::ProcessLaw law;
	process::Bounds bounds;
	mislead::PhantomPlan plan;
	fingerprint::NodeProfile profile;
	std::vector<double> jitter_range;
	Bytes request_wire;

	explicit BenchWorld(size_t n_points, uint64_t seed) {
		law.n_real = n_points - 1;
		law.n_phantom = 1;
		law.scaling = 0.001;
		law.c = Matrix(1, n_points);
		for (size_t i = 0; i < n_points; ++i) law.c.at(0, i) = 1.0;

		bounds.lower.assign(n_points, 0.0);
		bounds.upper.assign(n_points, 1.0);
		bounds.safety_limit.assign(n_points, 1.2);

		// a lawful plan pointing at the phantom, built directly; the
		// bench measures plan lookup, not plan solving
		plan.y.assign(n_points, 0.5);
		plan.y[n_points - 1] = 0.9;
		plan.target = n_points - 1;
		plan.feasible = true;
		plan.margin = 0.4 / 1.2;
		law.d = {0.5 * static_cast<double>(n_points - 1) + 0.9};

		Rng rng = Rng(seed).fork(0xBE7C);
		profile.node_id = 2;
		auto& reservoir =
		    profile.latency[static_cast<uint8_t>(dnp3::FunctionCode::Read)];
		for (int i = 0; i < 1000; ++i) reservoir.add(rng.uniform(0.006, 0.010), rng);

		jitter_range.assign(n_points, 0.01);

		auto req = dnp3::encode_read_request(static_cast<uint16_t>(n_points), 5);
		auto frames = dnp3::segment_fragment(req, 2, 1);
		request_wire = dnp3::encode_link_frame(frames.value()[0]).take();
	}

	ctrl::SpoofSnapshot snapshot() const {
		ctrl::SpoofSnapshot s;
		s.law = &law;
		s.bounds = &bounds;
		s.plan = &plan;
		s.profile = &profile;
		s.jitter_range = jitter_range;
		return s;
	}
};

struct WorkerOut {
	uint64_t packets = 0;
	size_t wire_octets = 0;
	std::vector<double> lat_ms;
};

/// One worker: decode request, reassemble, fabricate a reply off the
/// plan, sample a delay, segment and encode back to wire form.
inline void bench_worker(const BenchWorld& world, double duration, Rng rng, WorkerOut& out) {
	using clock = std::chrono::steady_clock;
	ctrl::SpoofSnapshot snap = world.snapshot();
	std::vector<dnp3::LinkFrame> frames;
	auto deadline = clock::now() + std::chrono::duration<double>(duration);
	out.lat_ms.reserve(1 << 16);
	for (;;) {
		auto t0 = clock::now();
		if (t0 >= deadline) break;

		auto frame = dnp3::decode_link_frame(world.request_wire);
		if (!frame.ok()) break;
		frames.clear();
		frames.push_back(frame.take());
		auto request = dnp3::reassemble_fragment(frames);
		if (!request.ok()) break;
		auto reply = ctrl::make_spoof_reply(snap, request.value(), rng);
		if (!reply) break;
		auto out_frames = dnp3::segment_fragment(reply->fragment, 1, 2);
		if (!out_frames.ok()) break;
		size_t octets = 0;
		for (const auto& f : out_frames.value()) {
			auto wire = dnp3::encode_link_frame(f);
			if (!wire.ok()) break;
			octets += wire.value().size();
		}

		auto t1 = clock::now();
		out.wire_octets = octets;
		out.lat_ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
		++out.packets;
	}
}

} // namespace detail

/// Wall-clock throughput of the pure spoof path. Results depend on the
/// machine and are exempt from the determinism contract.
inline BenchResult bench_spoof(const BenchConfig& cfg) {
	detail::BenchWorld world(cfg.n_points, cfg.seed);

	size_t n_workers = cfg.workers == 0 ? 1 : cfg.workers;
	std::vector<detail::WorkerOut> outs(n_workers);
	if (n_workers == 1) {
		detail::bench_worker(world, cfg.duration, Rng(cfg.seed).fork(0xB000), outs[0]);
	} else {
		std::vector<std::thread> threads;
		threads.reserve(n_workers);
		for (size_t w = 0; w < n_workers; ++w)
			threads.emplace_back([&world, &cfg, &outs, w] {
				detail::bench_worker(world, cfg.duration,
				                     Rng(cfg.seed).fork(0xB000 + static_cast<uint64_t>(w)),
				                     outs[w]);
			});
		for (auto& t : threads) t.join();
	}

	BenchResult r;
	r.n_points = cfg.n_points;
	r.fragment_octets = response_fragment_octets(cfg.n_points);
	r.packet_octets = response_wire_octets(cfg.n_points);
	r.workers = n_workers;
	r.duration = cfg.duration;
	for (auto& o : outs) {
		r.packets += o.packets;
		if (o.wire_octets > 0) r.measured_wire_octets = o.wire_octets;
		r.latencies_ms.insert(r.latencies_ms.end(), o.lat_ms.begin(), o.lat_ms.end());
	}
	if (cfg.duration > 0.0) r.pps = static_cast<double>(r.packets) / cfg.duration;
	if (!r.latencies_ms.empty()) {
		auto s = summarize(r.latencies_ms);
		r.mean_ms = s.mean;
		r.p50_ms = s.p50;
		r.p99_ms = s.p99;
	}
	r.derived_mbps = r.pps * static_cast<double>(r.packet_octets) * 8.0 / 1e6;
	return r;
}

} // namespace netdecoy::harness
