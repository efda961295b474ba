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

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "netdecoy/util/result.hpp"

namespace netdecoy::netsim {

using NodeId = uint16_t;

enum class ActionKind { Forward, RedirectToController, Drop };

struct Action {
	ActionKind kind = ActionKind::Drop;
	size_t port = 0; // meaningful for Forward

	bool operator==(const Action&) const = default;
};

/// Match on exact node ids; an empty optional is a wildcard.
struct Match {
	std::optional<NodeId> src;
	std::optional<NodeId> dst;

	bool operator==(const Match&) const = default;

	bool covers(NodeId s, NodeId d) const {
		return (!src || *src == s) && (!dst || *dst == d);
	}

	int specificity() const { return (src ? 1 : 0) + (dst ? 1 : 0); }
};

struct FlowRule {
	int priority = 0;
	Match match;
	Action action;
	uint64_t cookie = 0;

	bool operator==(const FlowRule&) const = default;
};

enum class FlowError { DuplicateRule };

/// Priority-ordered match table. Lookup order: priority descending, then
/// more exact matches first, then installation order. At most one rule
/// per (priority, match).
class FlowTable {
public:
	Result<std::monostate, FlowError> install(const FlowRule& rule) {
		for (const auto& e : entries_) {
			if (e.rule.priority == rule.priority && e.rule.match == rule.match)
				return FlowError::DuplicateRule;
		}
		entries_.push_back(Entry{rule, next_seq_++});
		std::stable_sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) {
			if (a.rule.priority != b.rule.priority) return a.rule.priority > b.rule.priority;
			if (a.rule.match.specificity() != b.rule.match.specificity())
				return a.rule.match.specificity() > b.rule.match.specificity();
			return a.seq < b.seq;
		});
		return std::monostate{};
	}

	size_t remove_by_cookie(uint64_t cookie) {
		size_t before = entries_.size();
		entries_.erase(std::remove_if(entries_.begin(), entries_.end(),
		                              [&](const Entry& e) { return e.rule.cookie == cookie; }),
		               entries_.end());
		return before - entries_.size();
	}

	const FlowRule* lookup(NodeId src, NodeId dst) const {
		for (const auto& e : entries_)
			if (e.rule.match.covers(src, dst)) return &e.rule;
		return nullptr;
	}

	std::vector<FlowRule> rules() const {
		std::vector<FlowRule> out;
		out.reserve(entries_.size());
		for (const auto& e : entries_) out.push_back(e.rule);
		return out;
	}

	size_t size() const { return entries_.size(); }

private:
	struct Entry {
		FlowRule rule;
		uint64_t seq = 0;
	};

	std::vector<Entry> entries_;
	uint64_t next_seq_ = 0;
};

} // namespace netdecoy::netsim
