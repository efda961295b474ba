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
#include <map>
#include <utility>
#include <vector>

#include "netdecoy/controller/spoof.hpp"
#include "netdecoy/dnp3/link.hpp"
#include "netdecoy/dnp3/transport.hpp"
#include "netdecoy/fingerprint/store.hpp"
#include "netdecoy/mislead/adversary.hpp"
#include "netdecoy/mislead/plan.hpp"
#include "netdecoy/netsim/sim.hpp"
#include "netdecoy/process/state.hpp"
#include "netdecoy/util/eventlog.hpp"

namespace netdecoy::ctrl {

enum class QuarantineStatus { Active, Restored, Confirmed };

inline const char* to_string(QuarantineStatus s) {
	switch (s) {
	case QuarantineStatus::Active: return "active";
	case QuarantineStatus::Restored: return "restored";
	case QuarantineStatus::Confirmed: return "confirmed";
	}
	return "?";
}

enum class CtrlError { AlreadyQuarantined, UnknownNode, NotQuarantined };

inline const char* to_string(CtrlError e) {
	switch (e) {
	case CtrlError::AlreadyQuarantined: return "AlreadyQuarantined";
	case CtrlError::UnknownNode: return "UnknownNode";
	case CtrlError::NotQuarantined: return "NotQuarantined";
	}
	return "?";
}

/// One command the quarantined node issued, with its consequences
/// estimated on the session's shadow state. The live plant never sees it.
struct CommandEffect {
	process::ControlCommand cmd;
	bool applied = false;          // shadow accepted the command
	std::vector<double> delta;     // shadow x after minus before
	double t = 0.0;
};

struct ChangeProfile {
	uint16_t node = 0;
	std::vector<CommandEffect> effects;
	std::vector<double> max_abs_delta; // per variable, across all commands
};

struct InteractionRecord {
	double t_request = 0.0;
	double t_response = 0.0;
	uint16_t peer = 0;
	uint8_t function = 0;
	size_t points = 0;
	bool acked = false;
};

struct SpoofSession {
	mislead::PhantomPlan plan;
	std::vector<double> range_at_plan; // per-variable observed range when planned
	size_t requests_seen = 0;
	size_t responses_sent = 0;
	size_t unparseable = 0;
	std::vector<InteractionRecord> interactions;
	std::vector<process::ControlCommand> commands_received;
	process::ProcessState shadow; // simulation copy; commands land here
	ChangeProfile changes;

	// Per-peer counters for controller-originated frames; solicited
	// replies echo the request's sequence numbers instead.
	struct PeerSeq {
		uint8_t transport = 0;
		uint8_t app = 0;
		void advance() {
			transport = (transport + 1) & 0x3F;
			app = (app + 1) & 0x0F;
		}
	};
	std::map<uint16_t, PeerSeq> peer_seq;

	// In-flight multi-frame requests, keyed by (src, dst).
	std::map<std::pair<uint16_t, uint16_t>, std::vector<dnp3::LinkFrame>> rx;
};

struct QuarantineRecord {
	uint16_t node = 0;
	double started_at = 0.0;
	std::vector<uint64_t> rules_installed; // cookies, one per rule kind
	SpoofSession session;
	QuarantineStatus status = QuarantineStatus::Active;
};

struct ControllerConfig {
	int redirect_priority = netsim::kDefaultRulePriority + 901;
	int drop_priority = netsim::kDefaultRulePriority + 900;
	size_t plan_refresh_every = 100;   // responses between forced replans
	double drift_fraction = 0.10;      // of box width; triggers a replan
	double jitter_fraction = 0.01;     // of observed range, per response
};

/// The in-network honeypot. Consumes alerts, cuts the suspect off with
/// flow rules, answers its polls with fabricated lawful values, profiles
/// whatever it commands, and can put the tables back exactly as found.
class Controller {
public:
	Controller(netsim::Simulator& sim, fingerprint::ProfileStore& store, EventLog* log,
	           process::ProcessLaw law, process::Bounds bounds, std::vector<size_t> phantoms,
	           const process::ProcessState* live, uint64_t seed, ControllerConfig cfg = {})
	    : sim_(sim),
	      store_(store),
	      log_(log),
	      law_(std::move(law)),
	      bounds_(std::move(bounds)),
	      phantoms_(std::move(phantoms)),
	      live_(live),
	      rng_(Rng(seed).fork(0xC011)),
	      cfg_(cfg) {}

	const std::map<uint16_t, QuarantineRecord>& records() const { return records_; }

	const QuarantineRecord* find(uint16_t node) const {
		auto it = records_.find(node);
		return it == records_.end() ? nullptr : &it->second;
	}

	bool is_quarantined(uint16_t node) const {
		const QuarantineRecord* r = find(node);
		return r != nullptr && r->status != QuarantineStatus::Restored;
	}

	size_t confirmed_count() const {
		size_t n = 0;
		for (const auto& [id, r] : records_)
			if (r.status == QuarantineStatus::Confirmed) ++n;
		return n;
	}

	Result<const QuarantineRecord*, CtrlError> on_alert(uint16_t node) {
		if (is_quarantined(node)) return CtrlError::AlreadyQuarantined;
		if (!sim_.topology().has_node(node)) return CtrlError::UnknownNode;

		double now = sim_.now();
		uint64_t redirect_cookie = next_cookie_++;
		uint64_t drop_cookie = next_cookie_++;
		for (size_t sw = 0; sw < sim_.topology().switches.size(); ++sw) {
			auto r1 = sim_.install_rule(
			    sw, {cfg_.redirect_priority, netsim::Match{node, {}},
			         netsim::Action{netsim::ActionKind::RedirectToController, 0}, redirect_cookie});
			auto r2 = sim_.install_rule(sw, {cfg_.drop_priority, netsim::Match{{}, node},
			                                 netsim::Action{netsim::ActionKind::Drop, 0}, drop_cookie});
			(void)r1;
			(void)r2; // fresh cookies on a non-quarantined node cannot collide
		}

		QuarantineRecord rec;
		rec.node = node;
		rec.started_at = now;
		rec.rules_installed = {redirect_cookie, drop_cookie};
		rec.status = QuarantineStatus::Active;
		rec.session.shadow = clone_live();
		rec.session.changes.node = node;
		rec.session.changes.max_abs_delta.assign(law_.n_vars(), 0.0);
		refresh_plan(rec.session, now);

		auto [it, inserted] = records_.insert_or_assign(node, std::move(rec));
		(void)inserted;
		log_action("quarantine", node,
		           {{"cookies", it->second.rules_installed},
		            {"plan_feasible", it->second.session.plan.feasible},
		            {"plan_target", it->second.session.plan.target},
		            {"plan_margin", it->second.session.plan.margin}});
		return &it->second;
	}

	/// Wired as the simulator's controller handler: each redirected link
	/// frame lands here. Responses go out as packet-out after a delay the
	/// peer's fingerprint makes believable.
	void on_redirected(netsim::Simulator& sim, const netsim::Envelope& env, size_t from_switch) {
		(void)from_switch;
		auto it = records_.find(env.src);
		if (it == records_.end() || it->second.status == QuarantineStatus::Restored) {
			log_action("spoof", env.src, {{"skipped", "not quarantined"}}, LogLevel::Warn);
			return;
		}
		SpoofSession& session = it->second.session;

		auto frame = dnp3::decode_link_frame(env.frame);
		if (!frame.ok()) {
			session.unparseable++;
			log_action("spoof", env.src, {{"skipped", "unparseable frame"}}, LogLevel::Warn);
			return;
		}
		auto key = std::make_pair(frame.value().src, frame.value().dest);
		auto& buffer = session.rx[key];
		if (!frame.value().user_data.empty() && (frame.value().user_data[0] & 0x40) != 0)
			buffer.clear(); // FIR restarts the fragment
		buffer.push_back(frame.take());
		if (buffer.empty() || (buffer.back().user_data.empty()) ||
		    (buffer.back().user_data[0] & 0x80) == 0)
			return; // wait for FIN

		auto reassembled = dnp3::reassemble_fragment(buffer);
		buffer.clear();
		if (!reassembled.ok()) {
			session.unparseable++;
			log_action("spoof", env.src,
			           {{"skipped", "unparseable fragment"},
			            {"reason", dnp3::to_string(reassembled.error())}},
			           LogLevel::Warn);
			return;
		}
		dnp3::AppFragment request = reassembled.take();
		if (!dnp3::is_request(request.function)) return; // never answer a response
		session.requests_seen++;

		uint16_t peer = env.dst;
		double now = sim.now();

		if (request.function == dnp3::FunctionCode::Read) maybe_refresh(session, now);
		if (request.function == dnp3::FunctionCode::Operate ||
		    request.function == dnp3::FunctionCode::Write)
			absorb_commands(it->second, request, now);

		SpoofSnapshot snap = snapshot_for(peer, session);
		auto reply = make_spoof_reply(snap, request, rng_);
		if (!reply) return;

		send_reply(sim, it->second, peer, env.src, *reply, request, now);
		if (request.function == dnp3::FunctionCode::Operate ||
		    request.function == dnp3::FunctionCode::Write)
			record_interaction(env.src);
	}

	Result<ChangeProfile, CtrlError> restore(uint16_t node) {
		auto it = records_.find(node);
		if (it == records_.end() || it->second.status != QuarantineStatus::Active)
			return CtrlError::NotQuarantined;
		for (uint64_t cookie : it->second.rules_installed) sim_.remove_by_cookie(cookie);
		it->second.status = QuarantineStatus::Restored;
		log_action("restore", node,
		           {{"commands", it->second.session.commands_received.size()},
		            {"responses", it->second.session.responses_sent}});
		return it->second.session.changes;
	}

	/// Summarizes the session for the IDS side and promotes Active to
	/// Confirmed once any received command targets a phantom index.
	nlohmann::json record_interaction(uint16_t node) {
		auto it = records_.find(node);
		if (it == records_.end()) return nullptr;
		QuarantineRecord& rec = it->second;
		bool hit_phantom = false;
		nlohmann::json commands = nlohmann::json::array();
		for (const auto& cmd : rec.session.commands_received) {
			commands.push_back({{"index", cmd.target_index}, {"setpoint", cmd.setpoint}});
			if (cmd.target_index >= law_.n_real && cmd.target_index < law_.n_vars())
				hit_phantom = true;
		}
		double span = rec.session.interactions.empty()
		                  ? 0.0
		                  : rec.session.interactions.back().t_request -
		                        rec.session.interactions.front().t_request;
		nlohmann::json summary{{"t", sim_.now()},
		                       {"action", "interaction"},
		                       {"node", node},
		                       {"details",
		                        {{"requests", rec.session.requests_seen},
		                         {"responses", rec.session.responses_sent},
		                         {"commands", commands},
		                         {"span", span},
		                         {"status", to_string(rec.status)}}}};
		if (log_) log_->append(summary);
		if (hit_phantom && rec.status == QuarantineStatus::Active) {
			rec.status = QuarantineStatus::Confirmed;
			log_action("confirm", node,
			           {{"commands", rec.session.commands_received.size()}});
		}
		return summary;
	}

	/// Immutable inputs for one spoofed exchange; also what the
	/// throughput benchmark hands each worker.
	SpoofSnapshot snapshot_for(uint16_t peer, const SpoofSession& session) const {
		SpoofSnapshot snap;
		snap.law = &law_;
		snap.bounds = &bounds_;
		snap.plan = &session.plan;
		snap.profile = &store_.lookup(peer);
		snap.jitter_range = jitter_ranges();
		return snap;
	}

	std::vector<double> observed_ranges() const {
		std::vector<double> r(law_.n_vars());
		for (size_t i = 0; i < r.size(); ++i) {
			auto vb = store_.folded_bounds(i);
			r[i] = vb ? (vb->hi - vb->lo) * law_.scaling : bounds_.upper[i] - bounds_.lower[i];
		}
		return r;
	}

private:
	process::ProcessState clone_live() const {
		if (live_ != nullptr) return *live_;
		auto st = process::initial_state(law_, bounds_);
		if (st) return *st;
		process::ProcessState fallback;
		fallback.x.resize(law_.n_vars());
		for (size_t i = 0; i < fallback.x.size(); ++i)
			fallback.x[i] = 0.5 * (bounds_.lower[i] + bounds_.upper[i]);
		return fallback;
	}

	std::vector<double> jitter_ranges() const {
		std::vector<double> r = observed_ranges();
		for (double& v : r) v *= cfg_.jitter_fraction;
		return r;
	}

	/// Best observation available for planning: the midpoint of the
	/// traffic-learned bounds per real variable, box midpoint otherwise.
	std::vector<double> planning_observation() const {
		std::vector<double> x(law_.n_real);
		for (size_t i = 0; i < law_.n_real; ++i) {
			auto vb = store_.folded_bounds(i);
			x[i] = vb ? 0.5 * (vb->lo + vb->hi) * law_.scaling
			          : 0.5 * (bounds_.lower[i] + bounds_.upper[i]);
		}
		return x;
	}

	void refresh_plan(SpoofSession& session, double now) {
		mislead::AdversaryModel adv;
		auto plan = mislead::plan_phantom(planning_observation(), law_, bounds_, phantoms_, adv);
		if (plan.ok()) {
			session.plan = plan.take();
		} else {
			// structural failure: fall back to an honest infeasible plan
			session.plan = mislead::PhantomPlan{};
			session.plan.y = mislead::detail::pad_observation(planning_observation(), law_, bounds_);
			session.plan.feasible = false;
		}
		session.plan.created_at = now;
		session.range_at_plan = observed_ranges();
	}

	void maybe_refresh(SpoofSession& session, double now) {
		bool due = cfg_.plan_refresh_every > 0 && session.responses_sent > 0 &&
		           session.responses_sent % cfg_.plan_refresh_every == 0;
		bool drifted = false;
		std::vector<double> current = observed_ranges();
		for (size_t i = 0; i < current.size() && !drifted; ++i) {
			double box = bounds_.upper[i] - bounds_.lower[i];
			double before = i < session.range_at_plan.size() ? session.range_at_plan[i] : 0.0;
			if (box > 0.0 && std::abs(current[i] - before) > cfg_.drift_fraction * box)
				drifted = true;
		}
		if (due || drifted) refresh_plan(session, now);
	}

	void absorb_commands(QuarantineRecord& rec, const dnp3::AppFragment& request, double now) {
		for (const auto& block : request.objects) {
			const auto* pts = block.operates();
			if (pts == nullptr) continue;
			for (const auto& p : *pts) {
				process::ControlCommand cmd;
				cmd.target_index = p.index;
				cmd.setpoint = static_cast<double>(p.setpoint) * law_.scaling;
				cmd.issuer = rec.node;
				rec.session.commands_received.push_back(cmd);

				CommandEffect effect;
				effect.cmd = cmd;
				effect.t = now;
				effect.delta.assign(law_.n_vars(), 0.0);
				auto applied = process::apply_command(rec.session.shadow, cmd, law_, bounds_);
				if (applied.ok()) {
					const auto& [next, ok] = applied.value();
					effect.applied = ok;
					for (size_t i = 0; i < next.x.size(); ++i)
						effect.delta[i] = next.x[i] - rec.session.shadow.x[i];
					rec.session.shadow = next;
					for (size_t i = 0; i < effect.delta.size(); ++i)
						rec.session.changes.max_abs_delta[i] = std::max(
						    rec.session.changes.max_abs_delta[i], std::abs(effect.delta[i]));
				}
				rec.session.changes.effects.push_back(std::move(effect));
			}
		}
	}

	void send_reply(netsim::Simulator& sim, QuarantineRecord& rec, uint16_t peer, uint16_t to,
	                const SpoofReply& reply, const dnp3::AppFragment& request, double now) {
		auto frames = dnp3::segment_fragment(reply.fragment, to, peer);
		if (!frames.ok()) return;
		std::vector<Bytes> wires;
		for (const auto& f : frames.value()) {
			auto wire = dnp3::encode_link_frame(f);
			if (!wire.ok()) return;
			wires.push_back(wire.take());
		}
		double at = now + reply.delay;
		sim.schedule(at, [peer, to, wires = std::move(wires)](netsim::Simulator& s) {
			for (const auto& w : wires)
				s.packet_out(peer, to, w, netsim::Provenance::Phantom);
		});

		rec.session.responses_sent++;
		rec.session.peer_seq[peer].advance();
		size_t points = 0;
		for (const auto& b : reply.fragment.objects) points += b.count;
		rec.session.interactions.push_back(InteractionRecord{
		    now, at, peer, static_cast<uint8_t>(request.function), points, reply.is_ack});
		log_action("spoof", rec.node,
		           {{"peer", peer},
		            {"function", dnp3::to_string(request.function)},
		            {"delay", reply.delay},
		            {"points", points},
		            {"ack", reply.is_ack}});
	}

	void log_action(const char* action, uint16_t node, nlohmann::json details,
	                LogLevel at = LogLevel::Info) {
		if (!log_) return;
		log_->append({{"t", sim_.now()},
		              {"action", action},
		              {"node", node},
		              {"details", std::move(details)}},
		             at);
	}

	netsim::Simulator& sim_;
	fingerprint::ProfileStore& store_;
	EventLog* log_ = nullptr;
	process::ProcessLaw law_;
	process::Bounds bounds_;
	std::vector<size_t> phantoms_;
	const process::ProcessState* live_ = nullptr;
	Rng rng_;
	ControllerConfig cfg_;
	std::map<uint16_t, QuarantineRecord> records_;
	uint64_t next_cookie_ = 1000;
};

} // namespace netdecoy::ctrl
