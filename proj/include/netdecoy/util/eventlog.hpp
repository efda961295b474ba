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

#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

namespace netdecoy {

enum class LogLevel { Error, Warn, Info, Debug };

inline std::optional<LogLevel> parse_log_level(const std::string& s) {
	if (s == "error") return LogLevel::Error;
	if (s == "warn") return LogLevel::Warn;
	if (s == "info") return LogLevel::Info;
	if (s == "debug") return LogLevel::Debug;
	return std::nullopt;
}

/// Append-only record sink. Records are JSON objects; keys serialize in
/// sorted order, so two runs that append the same records produce
/// byte-identical JSONL.
class EventLog {
public:
	explicit EventLog(LogLevel level = LogLevel::Info) : level_(level) {}

	LogLevel level() const { return level_; }

	void append(nlohmann::json record, LogLevel at = LogLevel::Info) {
		if (at <= level_) records_.push_back(std::move(record));
	}

	const std::vector<nlohmann::json>& records() const { return records_; }
	size_t size() const { return records_.size(); }
	void clear() { records_.clear(); }

	void write_jsonl(std::ostream& os) const {
		for (const auto& r : records_) os << r.dump() << '\n';
	}

	std::string to_jsonl() const {
		std::string out;
		for (const auto& r : records_) {
			out += r.dump();
			out += '\n';
		}
		return out;
	}

	/// Records whose "kind" field equals `kind`.
	std::vector<nlohmann::json> by_kind(const std::string& kind) const {
		std::vector<nlohmann::json> out;
		for (const auto& r : records_)
			if (r.contains("kind") && r["kind"] == kind) out.push_back(r);
		return out;
	}

private:
	LogLevel level_;
	std::vector<nlohmann::json> records_;
};

} // namespace netdecoy
