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
#include <functional>
#include <map>
#include <queue>
#include <utility>
#include <vector>

#include "netdecoy/netsim/flow.hpp"
#include "netdecoy/netsim/topology.hpp"
#include "netdecoy/util/bytes.hpp"
#include "netdecoy/util/eventlog.hpp"

namespace netdecoy::netsim {

/// Where a frame's payload values came from. Spoofed responses carry
/// Phantom; anything a real node emitted carries Live. The tag is
/// simulator metadata, not wire octets.
enum class Provenance { Live, Phantom };

inline const char* to_string(Provenance p) {
	return p == Provenance::Phantom ? "phantom" : "live";
}

struct Envelope {
	uint64_t id = 0;
	NodeId src = 0;
	NodeId dst = 0;
	Bytes frame;
	Provenance prov = Provenance::Live;
	size_t hops = 0; // switch lookups so far
};

enum class EventKind { Deliver, TimerFire, Inject };

/// Every terminal outcome increments exactly one of delivered, dropped,
/// redirected, so injected always equals their sum once the queue drains.
struct Counters {
	uint64_t injected = 0;
	uint64_t delivered = 0;
	uint64_t dropped = 0;
	uint64_t dropped_no_match = 0; // subset of dropped
	uint64_t redirected = 0;

	uint64_t terminal() const { return delivered + dropped + redirected; }
};

/// Discrete-event network: two switches, per-link fixed latency, flow
/// tables consulted at each switch hop. Ties in time break by insertion
/// order, so identical inputs replay identically.
class Simulator {
public:
	using NodeHandler = std::function<void(Simulator&, const Envelope&)>;
	using ControllerHandler = std::function<void(Simulator&, const Envelope&, size_t from_switch)>;
	using TapHandler = std::function<void(const Envelope&, double)>;

	Simulator(Topology topo, EventLog* log) : topo_(std::move(topo)), log_(log) {}

	double now() const { return now_; }
	const Topology& topology() const { return topo_; }
	const Counters& counters() const { return counters_; }
	bool idle() const { return queue_.empty(); }

	void set_node_handler(NodeId id, NodeHandler h) { node_handlers_[id] = std::move(h); }
	void set_controller_handler(ControllerHandler h) { controller_ = std::move(h); }

	/// Tap sees every frame at its first switch hop (mirror to the
	/// controller's observation point), before any rule acts on it.
	void set_tap(TapHandler h) { tap_ = std::move(h); }

	Result<std::monostate, FlowError> install_rule(size_t sw, const FlowRule& rule) {
		auto r = topo_.switches.at(sw).table.install(rule);
		if (r.ok())
			log_action("rule_install", {{"switch", sw},
			                            {"priority", rule.priority},
			                            {"cookie", rule.cookie},
			                            {"src", opt_json(rule.match.src)},
			                            {"dst", opt_json(rule.match.dst)}});
		return r;
	}

	/// Removes every rule carrying the cookie, on all switches.
	size_t remove_by_cookie(uint64_t cookie) {
		size_t n = 0;
		for (auto& sw : topo_.switches) n += sw.table.remove_by_cookie(cookie);
		if (n > 0) log_action("rule_remove", {{"cookie", cookie}, {"count", n}});
		return n;
	}

	/// A node puts a frame on its access link. Returns the packet id.
	uint64_t inject(NodeId src, NodeId dst, Bytes frame, Provenance prov = Provenance::Live) {
		Envelope env;
		env.id = next_packet_++;
		env.src = src;
		env.dst = dst;
		env.frame = std::move(frame);
		env.prov = prov;
		counters_.injected++;
		log_packet("inject", env, nullptr, "sent");
		uint64_t id = env.id;
		size_t ingress = topo_.switch_of(src);
		double at = now_ + topo_.access_latency;
		schedule_event(at, EventKind::Inject,
		               [this, ingress, env = std::move(env)]() mutable { at_switch(ingress, std::move(env)); });
		return id;
	}

	/// Controller packet-out: bypasses flow tables entirely. The frame
	/// rides the control channel to the node's switch, then its access
	/// link. Counted as injected so conservation still balances.
	uint64_t packet_out(NodeId src_label, NodeId dst, Bytes frame,
	                    Provenance prov = Provenance::Phantom) {
		Envelope env;
		env.id = next_packet_++;
		env.src = src_label;
		env.dst = dst;
		env.frame = std::move(frame);
		env.prov = prov;
		counters_.injected++;
		log_packet("packet_out", env, nullptr, "sent");
		uint64_t id = env.id;
		size_t sw = topo_.switch_of(dst);
		double latency = topo_.ctrl_latency + topo_.switches[sw].ports[topo_.switches[sw].node_port.at(dst)].latency;
		schedule_event(now_ + latency, EventKind::Deliver,
		               [this, env = std::move(env)]() mutable { deliver(std::move(env)); });
		return id;
	}

	void schedule(double t, std::function<void(Simulator&)> fn) {
		if (t < now_) t = now_;
		schedule_event(t, EventKind::TimerFire, [this, fn = std::move(fn)]() { fn(*this); });
	}

	/// Drains events with time <= t_end in (time, insertion) order, then
	/// advances the clock to t_end even if nothing fired.
	void run_until(double t_end) {
		while (!queue_.empty()) {
			const Item& top = queue_.top();
			if (top.time > t_end) break;
			Item item = top;
			queue_.pop();
			now_ = item.time;
			auto it = pending_.find(item.seq);
			auto fn = std::move(it->second);
			pending_.erase(it);
			fn();
		}
		if (t_end > now_) now_ = t_end;
	}

private:
	struct Item {
		double time = 0.0;
		uint64_t seq = 0;
		EventKind kind = EventKind::TimerFire;

		bool operator>(const Item& o) const {
			if (time != o.time) return time > o.time;
			return seq > o.seq;
		}
	};

	static nlohmann::json opt_json(const std::optional<NodeId>& v) {
		if (v) return *v;
		return nullptr;
	}

	void schedule_event(double t, EventKind kind, std::function<void()> fn) {
		uint64_t seq = next_event_++;
		pending_.emplace(seq, std::move(fn));
		queue_.push(Item{t, seq, kind});
	}

	void at_switch(size_t sw_idx, Envelope env) {
		if (env.hops == 0 && tap_) tap_(env, now_);
		const Switch& sw = topo_.switches[sw_idx];
		const FlowRule* rule = sw.table.lookup(env.src, env.dst);
		env.hops++;
		if (rule == nullptr) {
			counters_.dropped++;
			counters_.dropped_no_match++;
			log_packet("drop", env, nullptr, "no_match");
			return;
		}
		switch (rule->action.kind) {
		case ActionKind::Drop:
			counters_.dropped++;
			log_packet("drop", env, rule, "rule");
			return;
		case ActionKind::RedirectToController: {
			counters_.redirected++;
			log_packet("redirect", env, rule, "to_controller");
			double at = now_ + topo_.ctrl_latency;
			schedule_event(at, EventKind::Deliver, [this, sw_idx, env = std::move(env)]() mutable {
				if (controller_) controller_(*this, env, sw_idx);
			});
			return;
		}
		case ActionKind::Forward: {
			const Port& port = sw.ports.at(rule->action.port);
			double at = now_ + port.latency;
			if (port.peer == Port::Peer::Switch) {
				size_t next_sw = port.peer_id;
				schedule_event(at, EventKind::Deliver,
				               [this, next_sw, env = std::move(env)]() mutable { at_switch(next_sw, std::move(env)); });
			} else {
				schedule_event(at, EventKind::Deliver,
				               [this, env = std::move(env)]() mutable { deliver(std::move(env)); });
			}
			return;
		}
		}
	}

	void deliver(Envelope env) {
		counters_.delivered++;
		log_packet("deliver", env, nullptr, "delivered");
		auto it = node_handlers_.find(env.dst);
		if (it != node_handlers_.end() && it->second) it->second(*this, env);
	}

	void log_packet(const char* kind, const Envelope& env, const FlowRule* rule,
	                const char* disposition) {
		if (!log_) return;
		nlohmann::json rec{{"t", now_},
		                   {"kind", kind},
		                   {"src", env.src},
		                   {"dst", env.dst},
		                   {"frame_hex", to_hex(env.frame)},
		                   {"rule_hit", rule ? nlohmann::json(rule->cookie) : nlohmann::json(nullptr)},
		                   {"disposition", disposition}};
		if (env.prov == Provenance::Phantom) rec["provenance"] = "phantom";
		log_->append(std::move(rec));
	}

	void log_action(const char* kind, nlohmann::json fields) {
		if (!log_) return;
		fields["t"] = now_;
		fields["kind"] = kind;
		log_->append(std::move(fields));
	}

	Topology topo_;
	EventLog* log_ = nullptr;
	double now_ = 0.0;
	uint64_t next_event_ = 0;
	uint64_t next_packet_ = 0;
	Counters counters_;
	std::priority_queue<Item, std::vector<Item>, std::greater<Item>> queue_;
	std::map<uint64_t, std::function<void()>> pending_;
	std::map<NodeId, NodeHandler> node_handlers_;
	ControllerHandler controller_;
	TapHandler tap_;
};

} // namespace netdecoy::netsim
