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

#include <map>
#include <memory>
#include <vector>

#include "netdecoy/controller/controller.hpp"
#include "netdecoy/fingerprint/ks.hpp"

using namespace netdecoy;
using Catch::Matchers::WithinAbs;

namespace {

Bytes read_wire(uint16_t src, uint16_t dst, uint8_t seq, uint16_t n_points) {
	auto frames = dnp3::segment_fragment(dnp3::encode_read_request(n_points, seq), dst, src);
	REQUIRE(frames.ok());
	REQUIRE(frames.value().size() == 1);
	auto wire = dnp3::encode_link_frame(frames.value()[0]);
	REQUIRE(wire.ok());
	return wire.value();
}

std::vector<Bytes> operate_wires(uint16_t src, uint16_t dst, uint8_t seq,
                                 const std::vector<dnp3::OperatePoint>& points) {
	auto frames = dnp3::segment_fragment(dnp3::encode_operate(points, seq), dst, src);
	REQUIRE(frames.ok());
	std::vector<Bytes> out;
	for (const auto& f : frames.value()) {
		auto wire = dnp3::encode_link_frame(f);
		REQUIRE(wire.ok());
		out.push_back(wire.value());
	}
	return out;
}

Bytes response_wire(uint16_t src, uint16_t dst, uint8_t seq, const std::vector<int32_t>& values) {
	auto frames = dnp3::segment_fragment(dnp3::encode_analog_response(values, seq), dst, src);
	REQUIRE(frames.ok());
	REQUIRE(frames.value().size() == 1);
	auto wire = dnp3::encode_link_frame(frames.value()[0]);
	REQUIRE(wire.ok());
	return wire.value();
}

struct Delivery {
	double t = 0.0;
	netsim::Envelope env;
};

/// Two masters (1, 2), two outstations (3, 4), one conservation law over
/// two real variables and one phantom.
struct World {
	process::ProcessLaw law;
	process::Bounds bounds;
	std::vector<size_t> phantoms{2};
	EventLog log;
	fingerprint::ProfileStore store{11};
	std::unique_ptr<netsim::Simulator> sim;
	std::unique_ptr<ctrl::Controller> controller;
	process::ProcessState live;
	std::map<uint16_t, std::vector<Delivery>> inbox;

	explicit World(ctrl::ControllerConfig cfg = {}, double access = 0.0005, double core = 0.001) {
		law.n_real = 2;
		law.n_phantom = 1;
		law.c = Matrix{1, 3, {1.0, 1.0, 1.0}};
		law.d = {1.5};
		law.scaling = 0.001;
		bounds.lower = {0.0, 0.0, 0.0};
		bounds.upper = {1.0, 1.0, 1.0};
		bounds.safety_limit = {1.2, 1.2, 1.2};
		auto st = process::initial_state(law, bounds);
		REQUIRE(st.has_value());
		live = *st;

		sim = std::make_unique<netsim::Simulator>(
		    netsim::build_dumbbell(2, 2, access, core).value(), &log);
		controller = std::make_unique<ctrl::Controller>(*sim, store, &log, law, bounds, phantoms,
		                                                &live, 42, cfg);
		sim->set_controller_handler([this](netsim::Simulator& s, const netsim::Envelope& env,
		                                   size_t sw) { controller->on_redirected(s, env, sw); });
		for (uint16_t id : {1, 2, 3, 4})
			sim->set_node_handler(id, [this, id](netsim::Simulator& s, const netsim::Envelope& e) {
				inbox[id].push_back(Delivery{s.now(), e});
			});
	}

	/// Learn outstation 3's behavior from clean traffic: master 2 polls,
	/// node 3 answers around `mean_delay` with values near 500 counts.
	void pretrain(size_t cycles, double mean_delay, Rng& rng) {
		double t = 0.0;
		for (size_t i = 0; i < cycles; ++i) {
			auto seq = static_cast<uint8_t>(i & 0x3F);
			netsim::Envelope req;
			req.src = 2;
			req.dst = 3;
			req.frame = read_wire(2, 3, seq, 2);
			store.ingest(req, t);
			double delay = rng.uniform(mean_delay * 0.5, mean_delay * 1.5);
			netsim::Envelope resp;
			resp.src = 3;
			resp.dst = 2;
			int32_t v0 = static_cast<int32_t>(480 + rng.below(40));
			resp.frame = response_wire(3, 2, seq, {v0, 1000 - v0});
			store.ingest(resp, t + delay);
			t += mean_delay * 4;
		}
	}

	/// One decoded application fragment per delivery burst at a node.
	dnp3::AppFragment reassembled(uint16_t node, size_t first, size_t count) const {
		std::vector<dnp3::LinkFrame> frames;
		for (size_t i = first; i < first + count; ++i) {
			auto f = dnp3::decode_link_frame(inbox.at(node)[i].env.frame);
			REQUIRE(f.ok());
			frames.push_back(f.take());
		}
		auto frag = dnp3::reassemble_fragment(frames);
		REQUIRE(frag.ok());
		return frag.take();
	}
};

} // namespace

TEST_CASE("alert quarantines: polls redirected, peer starved, spoof answers") {
	World w;
	auto rec = w.controller->on_alert(1);
	REQUIRE(rec.ok());
	CHECK(rec.value()->status == ctrl::QuarantineStatus::Active);
	CHECK(rec.value()->rules_installed.size() == 2);

	CHECK(w.controller->on_alert(1).error() == ctrl::CtrlError::AlreadyQuarantined);
	CHECK(w.controller->on_alert(99).error() == ctrl::CtrlError::UnknownNode);

	const size_t polls = 100;
	for (size_t i = 0; i < polls; ++i) {
		auto seq = static_cast<uint8_t>(i & 0x3F);
		double at = 0.1 * static_cast<double>(i);
		Bytes wire = read_wire(1, 3, seq, 2);
		w.sim->schedule(at, [wire, seq](netsim::Simulator& s) { s.inject(1, 3, wire); });
	}
	w.sim->run_until(60.0);

	CHECK(w.inbox[3].empty()); // outstation saw nothing
	CHECK(w.sim->counters().redirected == polls);
	REQUIRE(w.inbox[1].size() == polls); // exactly one response per request
	for (const auto& d : w.inbox[1]) CHECK(d.env.prov == netsim::Provenance::Phantom);
	size_t spoofs = 0, quarantines = 0;
	for (const auto& r : w.log.records()) {
		if (!r.contains("action")) continue;
		if (r["action"] == "spoof") spoofs++;
		if (r["action"] == "quarantine") quarantines++;
	}
	CHECK(spoofs == polls);
	CHECK(quarantines == 1);
	CHECK(w.controller->find(1)->session.responses_sent == polls);
	CHECK(w.controller->find(1)->session.requests_seen == polls);
}

TEST_CASE("spoofed read carries the phantom plan, jittered but lawful") {
	World w;
	REQUIRE(w.controller->on_alert(1).ok());
	const auto& plan = w.controller->find(1)->session.plan;
	REQUIRE(plan.feasible);
	CHECK(plan.target == 2);
	double d_hat = plan.y[0] + plan.y[1] + plan.y[2];

	for (int i = 0; i < 20; ++i) {
		Bytes wire = read_wire(1, 3, static_cast<uint8_t>(i), 2);
		w.sim->schedule(0.1 * i, [wire](netsim::Simulator& s) { s.inject(1, 3, wire); });
	}
	w.sim->run_until(30.0);
	REQUIRE(w.inbox[1].size() == 20);

	for (size_t i = 0; i < w.inbox[1].size(); ++i) {
		auto frag = w.reassembled(1, i, 1);
		CHECK(frag.function == dnp3::FunctionCode::Response);
		REQUIRE(frag.objects.size() == 1);
		const auto* pts = frag.objects[0].analog();
		REQUIRE(pts != nullptr);
		// The honeypot exposes every variable, the phantom included.
		REQUIRE(pts->size() == 3);
		double sum = 0.0;
		for (size_t k = 0; k < 3; ++k) {
			double v = static_cast<double>((*pts)[k].value) * w.law.scaling;
			sum += v;
			// jitter is a percent of range plus projection shift; far
			// below the distance to live x and well inside the box
			CHECK_THAT(v, WithinAbs(plan.y[k], 0.05));
			CHECK(v >= w.bounds.lower[k] - 1e-6);
			CHECK(v <= w.bounds.upper[k] + 1e-6);
		}
		CHECK_THAT(sum, WithinAbs(d_hat, 0.002)); // law survives jitter + rounding
	}

	SECTION("a believing argmax adversary picks the phantom") {
		auto frag = w.reassembled(1, 0, 1);
		std::vector<double> view;
		for (const auto& p : *frag.objects[0].analog())
			view.push_back(static_cast<double>(p.value) * w.law.scaling);
		mislead::AdversaryModel adv;
		auto cmd = mislead::decide(adv, view, w.bounds, 1);
		CHECK(cmd.target_index == 2);
	}
}

TEST_CASE("operate during quarantine: acked, profiled on the shadow, live untouched") {
	World w;
	std::vector<double> live_before = w.live.x;
	REQUIRE(w.controller->on_alert(1).ok());
	process::ProcessState shadow_before = w.controller->find(1)->session.shadow;

	// The adversary commands the phantom variable to its safety limit.
	auto wires = operate_wires(1, 3, 5, {dnp3::OperatePoint{2, 1200}});
	REQUIRE(wires.size() == 1);
	w.sim->schedule(0.0, [wire = wires[0]](netsim::Simulator& s) { s.inject(1, 3, wire); });
	w.sim->run_until(5.0);

	REQUIRE(w.inbox[1].size() == 1);
	auto ack = w.reassembled(1, 0, 1);
	CHECK(ack.function == dnp3::FunctionCode::Response);
	REQUIRE(ack.objects.size() == 1);
	const auto* ops = ack.objects[0].operates();
	REQUIRE(ops != nullptr);
	REQUIRE(ops->size() == 1);
	CHECK((*ops)[0] == dnp3::OperatePoint{2, 1200});

	const auto* rec = w.controller->find(1);
	CHECK(rec->status == ctrl::QuarantineStatus::Confirmed); // phantom index commanded
	REQUIRE(rec->session.commands_received.size() == 1);
	CHECK(rec->session.commands_received[0].target_index == 2);
	CHECK_THAT(rec->session.commands_received[0].setpoint, WithinAbs(1.2, 1e-9));

	// ChangeProfile matches applying the same command to a fresh clone.
	process::ControlCommand cmd{2, 1.2, 1};
	auto direct = process::apply_command(shadow_before, cmd, w.law, w.bounds);
	REQUIRE(direct.ok());
	REQUIRE(rec->session.changes.effects.size() == 1);
	const auto& effect = rec->session.changes.effects[0];
	CHECK(effect.applied == direct.value().second);
	for (size_t i = 0; i < 3; ++i)
		CHECK_THAT(effect.delta[i], WithinAbs(direct.value().first.x[i] - shadow_before.x[i], 1e-12));

	CHECK(w.live.x == live_before); // honeypot never touches the plant

	bool confirmed_logged = false;
	for (const auto& r : w.log.records())
		if (r.contains("action") && r["action"] == "confirm") confirmed_logged = true;
	CHECK(confirmed_logged);
}

TEST_CASE("multi-frame operate reassembles and acks in kind") {
	World w;
	REQUIRE(w.controller->on_alert(1).ok());
	std::vector<dnp3::OperatePoint> points;
	for (uint16_t i = 0; i < 50; ++i)
		points.push_back(dnp3::OperatePoint{i, static_cast<int32_t>(100 + i)});
	auto wires = operate_wires(1, 3, 9, points);
	REQUIRE(wires.size() == 2); // 310-octet fragment rides two frames

	for (const auto& wire : wires)
		w.sim->schedule(0.0, [wire](netsim::Simulator& s) { s.inject(1, 3, wire); });
	w.sim->run_until(5.0);

	REQUIRE(w.inbox[1].size() == 2); // the ack echoes all 50 points back
	auto ack = w.reassembled(1, 0, 2);
	CHECK(ack.function == dnp3::FunctionCode::Response);
	REQUIRE(ack.objects.size() == 1);
	const auto* ops = ack.objects[0].operates();
	REQUIRE(ops != nullptr);
	CHECK(*ops == points);
	// every command was recorded, valid target or not
	CHECK(w.controller->find(1)->session.commands_received.size() == 50);
	// index 2 is the phantom, so the session confirms
	CHECK(w.controller->find(1)->status == ctrl::QuarantineStatus::Confirmed);
}

TEST_CASE("restore puts the tables back exactly and reports the changes") {
	World w;
	auto baseline0 = w.sim->topology().switches[0].table.rules();
	auto baseline1 = w.sim->topology().switches[1].table.rules();

	SECTION("zero-traffic quarantine restores clean") {
		REQUIRE(w.controller->on_alert(2).ok());
		CHECK(w.sim->topology().switches[0].table.rules().size() == baseline0.size() + 2);
		auto profile = w.controller->restore(2);
		REQUIRE(profile.ok());
		CHECK(profile.value().effects.empty());
		for (double d : profile.value().max_abs_delta) CHECK(d == 0.0);
		CHECK(w.sim->topology().switches[0].table.rules() == baseline0);
		CHECK(w.sim->topology().switches[1].table.rules() == baseline1);
		CHECK(w.controller->find(2)->status == ctrl::QuarantineStatus::Restored);

		// traffic flows again
		w.sim->schedule(0.0, [w2 = read_wire(2, 3, 1, 2)](netsim::Simulator& s) {
			s.inject(2, 3, w2);
		});
		w.sim->run_until(1.0);
		CHECK(w.inbox[3].size() == 1);

		// and the node can be quarantined afresh
		CHECK(w.controller->on_alert(2).ok());
	}

	SECTION("restore errors") {
		CHECK(w.controller->restore(2).error() == ctrl::CtrlError::NotQuarantined);
		REQUIRE(w.controller->on_alert(2).ok());
		REQUIRE(w.controller->restore(2).ok());
		CHECK(w.controller->restore(2).error() == ctrl::CtrlError::NotQuarantined);
	}

	SECTION("confirmed attackers are not released") {
		REQUIRE(w.controller->on_alert(1).ok());
		auto wires = operate_wires(1, 3, 3, {dnp3::OperatePoint{2, 900}});
		w.sim->schedule(0.0, [wire = wires[0]](netsim::Simulator& s) { s.inject(1, 3, wire); });
		w.sim->run_until(5.0);
		REQUIRE(w.controller->find(1)->status == ctrl::QuarantineStatus::Confirmed);
		CHECK(w.controller->restore(1).error() == ctrl::CtrlError::NotQuarantined);
		// rules stay: the node remains cut off
		CHECK(w.sim->topology().switches[0].table.rules().size() == baseline0.size() + 2);
	}
}

TEST_CASE("spoofed delays mimic the learned fingerprint") {
	World w;
	Rng train_rng(77);
	w.pretrain(1200, 0.010, train_rng);
	REQUIRE(w.controller->on_alert(1).ok());

	const size_t polls = 1000;
	for (size_t i = 0; i < polls; ++i) {
		Bytes wire = read_wire(1, 3, static_cast<uint8_t>(i & 0x3F), 2);
		w.sim->schedule(0.5 * static_cast<double>(i),
		                [wire](netsim::Simulator& s) { s.inject(1, 3, wire); });
	}
	w.sim->run_until(600.0);
	REQUIRE(w.inbox[1].size() == polls);

	const auto& session = w.controller->find(1)->session;
	REQUIRE(session.interactions.size() == polls);
	std::vector<double> spoof_delays;
	for (const auto& rec : session.interactions)
		spoof_delays.push_back(rec.t_response - rec.t_request);

	const auto& reservoir = w.store.at_or_create(3).latency;
	auto it = reservoir.find(static_cast<uint8_t>(dnp3::FunctionCode::Read));
	REQUIRE(it != reservoir.end());
	auto ks = fingerprint::ks_statistic(spoof_delays, it->second.items);
	REQUIRE(ks.ok());
	CHECK(ks.value() <= 0.1);

	// end-to-end timing: first response arrives one network round trip
	// plus the sampled delay after the poll left the master
	double access = 0.0005;
	double rtt_overhead = 2 * (access + access); // ingress hop + ctrl channel, both ways
	double measured = w.inbox[1][0].t - 0.0;
	CHECK_THAT(measured, WithinAbs(rtt_overhead + spoof_delays[0], 1e-9));
}

TEST_CASE("unknown peers get the class default delay profile") {
	World w;
	REQUIRE(w.controller->on_alert(1).ok());
	// node 4 was never observed; fallback delay is 10 ms within 5% jitter
	Bytes wire = read_wire(1, 4, 0, 2);
	w.sim->schedule(0.0, [wire](netsim::Simulator& s) { s.inject(1, 4, wire); });
	w.sim->run_until(5.0);
	REQUIRE(w.inbox[1].size() == 1);
	const auto& session = w.controller->find(1)->session;
	REQUIRE(session.interactions.size() == 1);
	double delay = session.interactions[0].t_response - session.interactions[0].t_request;
	CHECK(delay >= 0.0095);
	CHECK(delay <= 0.0105);
}

TEST_CASE("garbage from a quarantined node is logged, not answered") {
	World w;
	REQUIRE(w.controller->on_alert(1).ok());
	w.sim->schedule(0.0, [](netsim::Simulator& s) {
		s.inject(1, 3, Bytes{0xDE, 0xAD, 0xBE, 0xEF});
	});
	w.sim->run_until(5.0);
	CHECK(w.inbox[1].empty());
	CHECK(w.inbox[3].empty());
	CHECK(w.controller->find(1)->session.unparseable == 1);
	CHECK(w.controller->find(1)->session.responses_sent == 0);
}

TEST_CASE("plan refreshes on schedule and the view stays consistent") {
	ctrl::ControllerConfig cfg;
	cfg.plan_refresh_every = 10;
	World w(cfg);
	REQUIRE(w.controller->on_alert(1).ok());
	double created0 = w.controller->find(1)->session.plan.created_at;

	for (int i = 0; i < 25; ++i) {
		Bytes wire = read_wire(1, 3, static_cast<uint8_t>(i & 0x3F), 2);
		w.sim->schedule(0.2 * i, [wire](netsim::Simulator& s) { s.inject(1, 3, wire); });
	}
	w.sim->run_until(30.0);
	REQUIRE(w.inbox[1].size() == 25);
	const auto& session = w.controller->find(1)->session;
	CHECK(session.plan.created_at > created0);
	CHECK(session.plan.feasible);
	CHECK(session.plan.target == 2);
}
