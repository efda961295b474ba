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
#include <cmath>
#include <filesystem>
#include <set>
#include <unordered_set>

#include "netdecoy/controller/controller.hpp"
#include "netdecoy/fingerprint/ks.hpp"
#include "netdecoy/harness/metrics.hpp"
#include "netdecoy/harness/scenario.hpp"
#include "netdecoy/ids/ids.hpp"
#include "netdecoy/mislead/adversary.hpp"

namespace netdecoy::harness {

struct RunArtifacts {
	MetricsReport report;
	EventLog log;
	std::vector<TimingRow> timings; // wall clock; never enters the metrics files
};

namespace detail {

/// Extra sim time after traffic stops, so in-flight responses land.
inline constexpr double kDrainWindow = 1.0;

/// Wires one scenario together: masters on the left poll outstations on
/// the right, the tap feeds the fingerprint store and the detector, the
/// controller takes the alerts. Everything downstream of the seed is
/// deterministic; wall-clock readings go to timings only.
class Runner {
public:
	explicit Runner(const Scenario& sc, LogLevel level)
	    : sc_(sc),
	      log_(level),
	      sim_(netsim::build_dumbbell(sc.topo.n_left, sc.topo.n_right, sc.topo.access_latency,
	                                  sc.topo.core_latency, sc.topo.ctrl_latency)
	               .take(),
	           &log_),
	      store_(sc.seed),
	      live_(process::initial_state(sc.law, sc.bounds).value()),
	      ctrl_(sim_, store_, &log_, sc.law, sc.bounds, sc.phantoms, &live_, sc.seed),
	      ids_(sc.ids_cfg.scripted.empty()
	               ? [&] {
		                 ids::IdsConfig c = sc.ids_cfg;
		                 c.scripted = quarantine_schedule(sc);
		                 return c;
	                 }()
	               : sc.ids_cfg,
	           ids::NormalModel{}),
	      service_rng_(Rng(sc.seed).fork(0x5E2F)),
	      step_rng_(Rng(sc.seed).fork(0x57E9)) {}

	RunArtifacts run() {
		auto wall0 = std::chrono::steady_clock::now();
		setup();
		double horizon = sc_.duration + (sc_.duration > 0.0 ? kDrainWindow : 0.0);
		sim_.run_until(horizon);
		auto wall1 = std::chrono::steady_clock::now();

		RunArtifacts out;
		out.report = finalize();
		out.timings = std::move(timings_);
		out.timings.push_back(
		    {"run_total", std::chrono::duration<double, std::milli>(wall1 - wall0).count()});
		out.log = std::move(log_);
		return out;
	}

private:
	struct MasterState {
		uint16_t id = 0;
		uint16_t peer = 0;
		uint64_t seq = 0;
		std::map<uint8_t, double> pending; // transport seq -> poll send time
		size_t spoofed_seen = 0;
		bool adversary = false;
		bool operated = false;
		std::vector<double> view; // engineering units, from the last report
	};

	void setup() {
		const auto& topo = sim_.topology();
		for (uint16_t id : topo.left_nodes()) {
			MasterState m;
			m.id = id;
			m.peer = static_cast<uint16_t>(sc_.topo.n_left + 1 +
			                               (id - 1) % sc_.topo.n_right);
			masters_[id] = m;
			sim_.set_node_handler(id, [this, id](netsim::Simulator&, const netsim::Envelope& e) {
				note_leak(e);
				master_rx(id, e);
			});
		}
		for (uint16_t id : topo.right_nodes()) {
			sim_.set_node_handler(id, [this, id](netsim::Simulator&, const netsim::Envelope& e) {
				note_leak(e);
				outstation_rx(id, e);
			});
		}
		sim_.set_controller_handler(
		    [this](netsim::Simulator& s, const netsim::Envelope& e, size_t from_switch) {
			    ctrl_.on_redirected(s, e, from_switch);
		    });
		sim_.set_tap([this](const netsim::Envelope& e, double t) { tap(e, t); });

		if (sc_.duration <= 0.0) return;

		// poll chains, staggered so masters never share an instant
		size_t i = 0;
		for (auto& [id, m] : masters_) {
			double offset = sc_.poll_period * static_cast<double>(i) /
			                static_cast<double>(sc_.topo.n_left);
			sim_.schedule(offset, [this, id = m.id](netsim::Simulator&) { poll(id); });
			++i;
		}

		// the plant drifts on the same cadence the masters sample it
		sim_.schedule(sc_.poll_period, [this](netsim::Simulator&) { step_plant(); });

		if (sc_.training_window <= sc_.duration)
			sim_.schedule(sc_.training_window, [this](netsim::Simulator&) { arm_detector(); });

		for (const auto& s : ids_.config().scripted) {
			if (s.time > sc_.duration) continue;
			if (auto it = masters_.find(s.node); it != masters_.end())
				it->second.adversary = true;
			sim_.schedule(s.time, [this](netsim::Simulator& sim) {
				for (const auto& al : ids_.due_scripted(sim.now())) raise_alert(al.node);
			});
		}

		for (const auto& r : sc_.restores) {
			if (r.time > sc_.duration) continue;
			sim_.schedule(r.time, [this, node = r.node](netsim::Simulator& sim) {
				auto res = ctrl_.restore(node);
				if (!res.ok())
					log_.append({{"t", sim.now()},
					             {"action", "restore_skipped"},
					             {"node", node},
					             {"details", ctrl::to_string(res.error())}},
					            LogLevel::Warn);
			});
		}
	}

	void poll(uint16_t id) {
		if (sim_.now() >= sc_.duration) return;
		MasterState& m = masters_.at(id);
		uint8_t seq = static_cast<uint8_t>(m.seq % 64);
		++m.seq;
		auto frag = dnp3::encode_read_request(static_cast<uint16_t>(sc_.law.n_real), seq);
		m.pending[frag.transport_seq] = sim_.now();
		++polls_sent_;
		send(id, m.peer, frag);
		sim_.schedule(sim_.now() + sc_.poll_period,
		              [this, id](netsim::Simulator&) { poll(id); });
	}

	void step_plant() {
		if (sim_.now() >= sc_.duration) return;
		live_ = process::step(live_, sc_.law, sc_.bounds, step_rng_, sc_.sigma);
		live_.t = sim_.now();
		sim_.schedule(sim_.now() + sc_.poll_period, [this](netsim::Simulator&) { step_plant(); });
	}

	void arm_detector() {
		auto model = ids::train_normal(train_events_, {});
		model_streams_ = model.size();
		ids_.set_model(std::move(model));
		detector_armed_ = true;
	}

	void raise_alert(uint16_t node) {
		auto r = ctrl_.on_alert(node);
		(void)r; // AlreadyQuarantined and UnknownNode are tolerated
	}

	/// Every frame at its ingress switch: fingerprint store plus one
	/// traffic event for training or detection.
	void tap(const netsim::Envelope& env, double t) {
		store_.ingest(env, t);
		auto frame = dnp3::decode_link_frame(env.frame);
		if (!frame.ok() || frame.value().user_data.size() < 3) return;
		if ((frame.value().user_data[0] & 0x40) == 0) return; // count first frames only
		ids::TrafficEvent ev{env.src, frame.value().user_data[2], t};
		if (t < sc_.training_window) {
			train_events_.push_back(ev);
		} else if (detector_armed_) {
			if (auto alert = ids_.ingest(ev)) raise_alert(alert->node);
		}
	}

	/// All live traffic leaves through here so frames sent by a node the
	/// controller believes is cut off can be recognized on arrival.
	void send(uint16_t src, uint16_t dst, const dnp3::AppFragment& frag) {
		auto frames = dnp3::segment_fragment(frag, dst, src);
		if (!frames.ok()) return;
		bool quarantined = ctrl_.is_quarantined(src);
		for (const auto& f : frames.value()) {
			auto wire = dnp3::encode_link_frame(f);
			if (!wire.ok()) continue;
			uint64_t pid = sim_.inject(src, dst, wire.take());
			if (quarantined) sent_while_quarantined_.insert(pid);
		}
	}

	void note_leak(const netsim::Envelope& env) {
		if (sent_while_quarantined_.count(env.id) > 0) ++leaks_;
	}

	/// Per-source reassembly shared by both node roles.
	std::optional<dnp3::AppFragment> collect(const netsim::Envelope& env) {
		auto frame = dnp3::decode_link_frame(env.frame);
		if (!frame.ok() || frame.value().user_data.empty()) return std::nullopt;
		auto key = std::make_pair(frame.value().src, frame.value().dest);
		uint8_t transport = frame.value().user_data[0];
		if ((transport & 0x40) != 0) rx_[key].clear();
		rx_[key].push_back(frame.take());
		if ((transport & 0x80) == 0) return std::nullopt; // awaiting FIN
		auto frag = dnp3::reassemble_fragment(rx_[key]);
		rx_.erase(key);
		if (!frag.ok()) return std::nullopt;
		return frag.take();
	}

	void outstation_rx(uint16_t id, const netsim::Envelope& env) {
		auto frag = collect(env);
		if (!frag || !dnp3::is_request(frag->function)) return;
		uint16_t master = env.src;
		if (frag->function == dnp3::FunctionCode::Read) {
			size_t n = sc_.law.n_real;
			if (!frag->objects.empty() && frag->objects[0].count > 0)
				n = std::min<size_t>(frag->objects[0].count, sc_.law.n_real);
			std::vector<size_t> idx(n);
			for (size_t i = 0; i < n; ++i) idx[i] = i;
			auto values = process::observe(live_, idx, sc_.law);
			if (!values.ok()) return;
			auto reply = dnp3::encode_analog_response(values.take(), frag->transport_seq);
			reply.app_seq = frag->app_seq;
			double delay = service_rng_.uniform(sc_.service_min, sc_.service_max);
			service_applied_[{master, frag->transport_seq}] = delay;
			++responses_normal_;
			sim_.schedule(sim_.now() + delay, [this, id, master, reply](netsim::Simulator&) {
				send(id, master, reply);
			});
			return;
		}
		// commands reaching a live outstation take effect on the plant
		for (const auto& b : frag->objects) {
			const auto* ops = b.operates();
			if (ops == nullptr) continue;
			for (const auto& p : *ops) {
				process::ControlCommand cmd{p.index,
				                            static_cast<double>(p.setpoint) * sc_.law.scaling,
				                            master};
				auto next = process::apply_command(live_, cmd, sc_.law, sc_.bounds);
				if (next.ok() && next.value().second) live_ = next.take().first;
			}
		}
		auto ack = dnp3::make_operate_ack(*frag);
		double delay = service_rng_.uniform(sc_.service_min, sc_.service_max);
		sim_.schedule(sim_.now() + delay,
		              [this, id, master, ack](netsim::Simulator&) { send(id, master, ack); });
	}

	void master_rx(uint16_t id, const netsim::Envelope& env) {
		auto frag = collect(env);
		if (!frag || frag->function != dnp3::FunctionCode::Response) return;
		MasterState& m = masters_.at(id);
		if (frag->objects.empty()) return;
		const auto& block = frag->objects[0];
		if (block.group == dnp3::kGroupControl) return; // command ack; not a poll
		const auto* pts = block.analog();
		if (pts == nullptr) return;

		auto pend = m.pending.find(frag->transport_seq);
		if (pend == m.pending.end()) return;
		double t_sent = pend->second;
		m.pending.erase(pend);

		bool spoofed = env.prov == netsim::Provenance::Phantom;
		RttSample s;
		s.t = t_sent;
		s.node = id;
		s.peer = env.src;
		s.rtt = sim_.now() - t_sent;
		s.fixed_component = spoofed ? fixed_rtt_spoofed() : fixed_rtt_normal();
		s.spoofed = spoofed;
		if (spoofed) {
			// the applied spoof delay is paired up from the session's
			// interaction records once the run is over
			++m.spoofed_seen;
		} else {
			auto it = service_applied_.find({id, frag->transport_seq});
			if (it != service_applied_.end()) {
				s.delay_component = it->second;
				service_applied_.erase(it);
			} else {
				s.delay_component = s.rtt - s.fixed_component;
			}
		}
		rtt_.push_back(s);

		m.view.resize(pts->size());
		for (size_t i = 0; i < pts->size(); ++i)
			m.view[i] = static_cast<double>((*pts)[i].value) * sc_.law.scaling;

		if (m.adversary && !m.operated && m.spoofed_seen >= sc_.operate_after_polls &&
		    m.view.size() == sc_.law.n_vars()) {
			m.operated = true;
			auto cmd = mislead::decide(mislead::AdversaryModel{}, m.view, sc_.bounds, id);
			dnp3::OperatePoint p;
			p.index = static_cast<uint16_t>(cmd.target_index);
			p.setpoint = static_cast<int32_t>(std::llround(cmd.setpoint / sc_.law.scaling));
			uint8_t seq = static_cast<uint8_t>(m.seq % 64);
			++m.seq;
			send(id, m.peer, dnp3::encode_operate({p}, seq));
		}
	}

	double fixed_rtt_normal() const {
		return 2.0 * (2.0 * sc_.topo.access_latency + sc_.topo.core_latency);
	}
	double fixed_rtt_spoofed() const {
		return 2.0 * (sc_.topo.access_latency + sc_.topo.ctrl_latency);
	}

	MetricsReport finalize() {
		MetricsReport r;
		r.scenario = sc_.name;
		r.seed = sc_.seed;
		r.duration = sc_.duration;
		r.rtt = std::move(rtt_);

		// pair each spoofed RTT sample with the delay its session applied
		std::map<uint16_t, std::vector<double>> spoof_delays_by_node;
		for (const auto& [node, rec] : ctrl_.records()) {
			for (const auto& ia : rec.session.interactions) {
				double d = ia.t_response - ia.t_request;
				r.spoof_delays.push_back(d);
				if (!ia.acked) spoof_delays_by_node[node].push_back(d);
			}
		}
		std::map<uint16_t, size_t> cursor;
		for (auto& s : r.rtt) {
			if (!s.spoofed) continue;
			auto& ds = spoof_delays_by_node[s.node];
			size_t& k = cursor[s.node];
			s.delay_component = k < ds.size() ? ds[k++] : s.rtt - s.fixed_component;
		}

		for (const auto& [node, rec] : ctrl_.records()) {
			r.plan_iterations.push_back(static_cast<double>(rec.session.plan.lp_iterations));
			auto mit = masters_.find(node);
			if (mit == masters_.end()) continue;
			const auto& mine = spoof_delays_by_node[node];
			const auto& profile = store_.lookup(mit->second.peer);
			auto res = profile.latency.find(static_cast<uint8_t>(dnp3::FunctionCode::Read));
			if (mine.empty() || res == profile.latency.end() || res->second.items.empty())
				continue;
			auto ks = fingerprint::ks_statistic(mine, res->second.items);
			if (ks.ok())
				r.ks.push_back(KsEntry{node, mit->second.peer, ks.value(), mine.size(),
				                       res->second.items.size()});
		}

		const auto& c = sim_.counters();
		r.counters.injected = c.injected;
		r.counters.delivered = c.delivered;
		r.counters.dropped = c.dropped;
		r.counters.redirected = c.redirected;
		r.counters.polls_sent = polls_sent_;
		r.counters.responses_normal = responses_normal_;
		r.counters.quarantine_leaks = leaks_;
		r.counters.quarantined = ctrl_.records().size();
		r.counters.confirmed = ctrl_.confirmed_count();
		r.counters.training_events = train_events_.size();
		r.counters.model_streams = model_streams_;
		for (const auto& [node, rec] : ctrl_.records()) {
			r.counters.responses_spoofed += rec.session.responses_sent;
			r.counters.commands_captured += rec.session.commands_received.size();
			if (rec.status == ctrl::QuarantineStatus::Restored) ++r.counters.restored;
		}
		if (sc_.duration > 0.0)
			r.spoofed_per_second =
			    static_cast<double>(r.counters.responses_spoofed) / sc_.duration;

		// representative plan solve, timed outside the deterministic path
		if (!sc_.phantoms.empty() && sc_.law.n_vars() + 1 <= lp::kMaxVariables) {
			std::vector<double> obs(sc_.law.n_real);
			for (size_t i = 0; i < obs.size(); ++i)
				obs[i] = 0.5 * (sc_.bounds.lower[i] + sc_.bounds.upper[i]);
			auto w0 = std::chrono::steady_clock::now();
			auto plan = mislead::plan_phantom(obs, sc_.law, sc_.bounds, sc_.phantoms,
			                                  mislead::AdversaryModel{});
			auto w1 = std::chrono::steady_clock::now();
			(void)plan;
			timings_.push_back(
			    {"plan_solve", std::chrono::duration<double, std::milli>(w1 - w0).count()});
		}
		return r;
	}

	const Scenario& sc_;
	EventLog log_;
	netsim::Simulator sim_;
	fingerprint::ProfileStore store_;
	process::ProcessState live_;
	ctrl::Controller ctrl_;
	ids::Ids ids_;
	Rng service_rng_;
	Rng step_rng_;

	std::map<uint16_t, MasterState> masters_;
	std::map<std::pair<uint16_t, uint16_t>, std::vector<dnp3::LinkFrame>> rx_;
	std::map<std::pair<uint16_t, uint8_t>, double> service_applied_;
	std::unordered_set<uint64_t> sent_while_quarantined_;
	std::vector<ids::TrafficEvent> train_events_;
	std::vector<RttSample> rtt_;
	std::vector<TimingRow> timings_;
	uint64_t polls_sent_ = 0;
	uint64_t responses_normal_ = 0;
	uint64_t leaks_ = 0;
	size_t model_streams_ = 0;
	bool detector_armed_ = false;
};

} // namespace detail

/// Execute one scenario end to end. The scenario must already be
/// validated (load_scenario does this).
inline RunArtifacts run_scenario(const Scenario& sc, LogLevel level = LogLevel::Info) {
	detail::Runner runner(sc, level);
	return runner.run();
}

/// events.jsonl + metrics.json + metrics.csv are deterministic per seed;
/// timings.csv is wall clock and exempt.
inline Result<std::monostate, IoFailure> write_artifacts(const RunArtifacts& art,
                                                         const std::string& out_dir) {
	std::error_code ec;
	std::filesystem::create_directories(out_dir, ec);
	if (ec) return IoFailure{out_dir, "cannot create output directory: " + ec.message()};
	auto p = [&](const char* name) { return (std::filesystem::path(out_dir) / name).string(); };
	if (auto r = write_text_file(p("events.jsonl"), art.log.to_jsonl()); !r.ok())
		return r.error();
	if (auto r = write_text_file(p("metrics.json"), metrics_json(art.report)); !r.ok())
		return r.error();
	if (auto r = write_text_file(p("metrics.csv"), metrics_csv(art.report)); !r.ok())
		return r.error();
	if (auto r = write_text_file(p("timings.csv"), timings_csv(art.timings)); !r.ok())
		return r.error();
	return std::monostate{};
}

} // namespace netdecoy::harness
