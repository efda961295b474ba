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
#include <vector>

#include "netdecoy/netsim/flow.hpp"
#include "netdecoy/util/result.hpp"

namespace netdecoy::netsim {

/// Synthetic link address for the controller's packet-in/out channel.
inline constexpr NodeId kControllerId = 0xFFF0;

/// Priority of the destination-based rules a topology starts with.
/// Anything installed above this shadows normal forwarding.
inline constexpr int kDefaultRulePriority = 100;

struct Port {
	enum class Peer { Node, Switch } peer = Peer::Node;
	uint16_t peer_id = 0;
	double latency = 0.0;
};

struct Switch {
	FlowTable table;
	std::vector<Port> ports;
	std::map<NodeId, size_t> node_port; // locally attached nodes
	size_t core_port = 0;               // toward the other switch
};

enum class TopoError { BadSize };

/// Two access switches joined by one core link. Left nodes poll, right
/// nodes respond; ids are 1..n_left then n_left+1..n_left+n_right.
struct Topology {
	size_t n_left = 0;
	size_t n_right = 0;
	double access_latency = 0.0;
	double core_latency = 0.0;
	double ctrl_latency = 0.0;
	std::vector<Switch> switches;
	std::map<NodeId, size_t> attach; // node id -> switch index

	size_t n_nodes() const { return n_left + n_right; }
	bool has_node(NodeId id) const { return attach.count(id) != 0; }
	size_t switch_of(NodeId id) const { return attach.at(id); }

	std::vector<NodeId> left_nodes() const {
		std::vector<NodeId> out;
		for (size_t i = 1; i <= n_left; ++i) out.push_back(static_cast<NodeId>(i));
		return out;
	}

	std::vector<NodeId> right_nodes() const {
		std::vector<NodeId> out;
		for (size_t i = 1; i <= n_right; ++i) out.push_back(static_cast<NodeId>(n_left + i));
		return out;
	}
};

/// Build the dumbbell with destination-based forwarding preinstalled on
/// both switches (cookie 0). One-way node-to-node latency across the core
/// is access + core + access.
inline Result<Topology, TopoError> build_dumbbell(size_t n_left, size_t n_right,
                                                  double access_latency, double core_latency,
                                                  double ctrl_latency = 0.0) {
	if (n_left == 0 || n_right == 0) return TopoError::BadSize;
	if (access_latency < 0.0 || core_latency < 0.0 || ctrl_latency < 0.0)
		return TopoError::BadSize;

	Topology t;
	t.n_left = n_left;
	t.n_right = n_right;
	t.access_latency = access_latency;
	t.core_latency = core_latency;
	t.ctrl_latency = ctrl_latency > 0.0 ? ctrl_latency : access_latency;
	t.switches.resize(2);

	for (size_t side = 0; side < 2; ++side) {
		Switch& sw = t.switches[side];
		size_t count = side == 0 ? n_left : n_right;
		NodeId base = side == 0 ? 1 : static_cast<NodeId>(n_left + 1);
		for (size_t i = 0; i < count; ++i) {
			NodeId id = static_cast<NodeId>(base + i);
			sw.node_port[id] = sw.ports.size();
			sw.ports.push_back(Port{Port::Peer::Node, id, access_latency});
			t.attach[id] = side;
		}
		sw.core_port = sw.ports.size();
		sw.ports.push_back(
		    Port{Port::Peer::Switch, static_cast<uint16_t>(1 - side), core_latency});
	}

	// Destination-based defaults: local nodes out their access port,
	// everything else across the core.
	for (size_t side = 0; side < 2; ++side) {
		Switch& sw = t.switches[side];
		for (const auto& [id, sw_idx] : t.attach) {
			size_t port = sw_idx == side ? sw.node_port.at(id) : sw.core_port;
			FlowRule rule;
			rule.priority = kDefaultRulePriority;
			rule.match.dst = id;
			rule.action = Action{ActionKind::Forward, port};
			rule.cookie = 0;
			auto r = sw.table.install(rule);
			(void)r; // distinct dst per rule, cannot collide
		}
	}
	return t;
}

} // namespace netdecoy::netsim
