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
#include <catch2/catch_amalgamated.hpp>

#include <numeric>

#include "netdecoy/fingerprint/ks.hpp"
#include "netdecoy/fingerprint/profile.hpp"

using namespace netdecoy;
using namespace netdecoy::fingerprint;

namespace {

constexpr uint16_t kMaster = 1;
constexpr uint16_t kOutstation = 2;

// Runs one poll cycle through the outstation's profile: request received
// at t_req, response (echoing the request's sequence) sent at t_resp.
void poll_cycle(NodeProfile& prof, Rng& rng, uint8_t seq, const std::vector<int32_t>& values,
                double t_req, double t_resp) {
	auto req = dnp3::encode_read_request(static_cast<uint16_t>(values.size()), seq);
	auto req_frames = dnp3::segment_fragment(req, kOutstation, kMaster).take();
	for (const auto& f : req_frames) REQUIRE(prof.observe(f, Direction::Received, t_req, rng).ok());

	auto resp = dnp3::encode_analog_response(values, seq);
	auto resp_frames = dnp3::segment_fragment(resp, kMaster, kOutstation).take();
	for (const auto& f : resp_frames) REQUIRE(prof.observe(f, Direction::Sent, t_resp, rng).ok());
}

} // namespace

TEST_CASE("ks statistic") {
	SECTION("identical samples") {
		auto r = ks_statistic({1, 2, 3}, {1, 2, 3});
		REQUIRE(r.ok());
		CHECK(r.value() == 0.0);
	}
	SECTION("disjoint supports") {
		auto r = ks_statistic({1, 2}, {10, 11});
		REQUIRE(r.ok());
		CHECK(r.value() == 1.0);
	}
	SECTION("half-overlapping supports") {
		auto r = ks_statistic({1, 2, 3, 4}, {3, 4, 5, 6});
		REQUIRE(r.ok());
		CHECK(r.value() == Catch::Approx(0.5));
	}
	SECTION("empty sample is an error") {
		auto r = ks_statistic({}, {1.0});
		REQUIRE(!r.ok());
		CHECK(r.error() == KsError::EmptySample);
	}
}

TEST_CASE("reservoir keeps a bounded uniform subsample") {
	Rng rng(0xABCD);
	Reservoir res;
	res.capacity = 100;
	for (int i = 0; i < 10000; ++i) res.add(static_cast<double>(i), rng);
	CHECK(res.items.size() == 100);
	CHECK(res.seen == 10000);
	// a uniform subsample of 0..9999 has mean near 5000
	double mean = std::accumulate(res.items.begin(), res.items.end(), 0.0) / 100.0;
	CHECK(mean > 3500.0);
	CHECK(mean < 6500.0);
}

TEST_CASE("value bounds track observed extremes") {
	Rng rng(5);
	NodeProfile prof;
	prof.node_id = kOutstation;

	{
		NodeProfile fresh;
		fresh.node_id = kOutstation;
		poll_cycle(fresh, rng, 0, {42, 42}, 0.0, 0.005);
		REQUIRE(fresh.value_bounds.size() == 2);
		CHECK(fresh.value_bounds[0].lo == 42.0);
		CHECK(fresh.value_bounds[0].hi == 42.0);
	}

	poll_cycle(prof, rng, 1, {1, 42}, 1.0, 1.005);
	poll_cycle(prof, rng, 2, {5, 42}, 2.0, 2.005);
	poll_cycle(prof, rng, 3, {3, 42}, 3.0, 3.005);
	CHECK(prof.value_bounds[0].lo == 1.0);
	CHECK(prof.value_bounds[0].hi == 5.0);
	CHECK(prof.value_bounds[1].lo == 42.0);
	CHECK(prof.value_bounds[1].hi == 42.0);
	CHECK(prof.value_bounds[0].count == 3);

	SECTION("bounds only widen") {
		double lo = prof.value_bounds[0].lo;
		double hi = prof.value_bounds[0].hi;
		Rng vals(77);
		for (int i = 0; i < 200; ++i) {
			int32_t v = static_cast<int32_t>(vals.below(1000)) - 500;
			poll_cycle(prof, rng, static_cast<uint8_t>(i & 0x3F), {v, 42}, 10.0 + i, 10.005 + i);
			REQUIRE(prof.value_bounds[0].lo <= lo);
			REQUIRE(prof.value_bounds[0].hi >= hi);
			lo = prof.value_bounds[0].lo;
			hi = prof.value_bounds[0].hi;
		}
	}
}

TEST_CASE("histogram totals match observed frame count") {
	Rng rng(6);
	NodeProfile prof;
	prof.node_id = kOutstation;
	size_t sent_frames = 0;
	for (int i = 0; i < 50; ++i) {
		// 201 points forces a five-frame response
		std::vector<int32_t> values(i % 2 == 0 ? 201 : 3, i);
		auto resp = dnp3::encode_analog_response(values, static_cast<uint8_t>(i & 0x3F));
		auto frames = dnp3::segment_fragment(resp, kMaster, kOutstation).take();
		sent_frames += frames.size();
		for (const auto& f : frames)
			REQUIRE(prof.observe(f, Direction::Sent, 0.1 * i, rng).ok());
	}
	CHECK(prof.frames_in_histograms() == sent_frames);
	size_t mix_total = 0;
	for (const auto& [klass, count] : prof.class_mix) mix_total += count;
	CHECK(mix_total == sent_frames);
}

TEST_CASE("latency reservoir learns the delay distribution") {
	Rng rng(0x1337);
	Rng delays(0xD31A);
	NodeProfile prof;
	prof.node_id = kOutstation;
	for (int i = 0; i < 10000; ++i) {
		double t = static_cast<double>(i);
		double delay = delays.uniform(0.005, 0.015);
		poll_cycle(prof, rng, static_cast<uint8_t>(i & 0x3F), {7}, t, t + delay);
	}
	const auto& res = prof.latency.at(static_cast<uint8_t>(dnp3::FunctionCode::Read));
	CHECK(res.seen == 10000);
	CHECK(res.items.size() == res.capacity);

	Rng sampler(0x5A5A);
	std::vector<double> sampled;
	sampled.reserve(10000);
	for (int i = 0; i < 10000; ++i)
		sampled.push_back(
		    prof.sample_response_delay(static_cast<uint8_t>(dnp3::FunctionCode::Read), sampler));
	double mean = std::accumulate(sampled.begin(), sampled.end(), 0.0) / 10000.0;
	CHECK(std::fabs(mean - 0.010) < 0.0005);

	SECTION("sampled delays stay close to the learned reservoir") {
		std::vector<double> first_thousand(sampled.begin(), sampled.begin() + 1000);
		auto ks = ks_statistic(first_thousand, res.items);
		REQUIRE(ks.ok());
		CHECK(ks.value() <= 0.1);
	}
}

TEST_CASE("delay sampling bounds") {
	Rng rng(2);
	NodeProfile prof;

	SECTION("cold start falls back to ten milliseconds") {
		for (int i = 0; i < 1000; ++i) {
			double d = prof.sample_response_delay(0x01, rng);
			REQUIRE(d >= 0.0095);
			REQUIRE(d <= 0.0105);
		}
	}
	SECTION("single-element reservoir jitters five percent around it") {
		prof.latency[0x01].add(0.010, rng);
		for (int i = 0; i < 1000; ++i) {
			double d = prof.sample_response_delay(0x01, rng);
			REQUIRE(d >= 0.0095);
			REQUIRE(d <= 0.0105);
		}
	}
}

TEST_CASE("unparseable frames leave fragment state untouched") {
	Rng rng(9);
	NodeProfile prof;
	dnp3::LinkFrame empty;
	empty.src = kOutstation;
	empty.dest = kMaster;
	auto r = prof.observe(empty, Direction::Sent, 0.0, rng);
	REQUIRE(!r.ok());
	CHECK(r.error() == ProfileError::UnparseableFrame);
	CHECK(prof.fragments_decoded == 0);

	// a continuation frame with no stream context is dropped
	dnp3::LinkFrame orphan;
	orphan.src = kOutstation;
	orphan.dest = kMaster;
	orphan.user_data = {0x05, 0x00, 0x00}; // neither FIR nor FIN
	auto r2 = prof.observe(orphan, Direction::Sent, 0.0, rng);
	REQUIRE(!r2.ok());
	CHECK(prof.fragments_decoded == 0);
}
