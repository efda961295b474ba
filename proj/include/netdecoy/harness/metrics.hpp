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

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "netdecoy/harness/scenario.hpp"
#include "netdecoy/util/stats.hpp"

namespace netdecoy::harness {

struct IoFailure {
	std::string path;
	std::string message;
};

/// One poll/response pair as the poller saw it. The decomposition
/// invariant: rtt == fixed_component + delay_component, where the fixed
/// part is pure propagation from the topology and the delay part is the
/// service (or spoof) delay the responder actually applied.
struct RttSample {
	double t = 0.0;      // request injection time
	uint16_t node = 0;   // polling master
	uint16_t peer = 0;   // outstation address polled
	double rtt = 0.0;
	double fixed_component = 0.0;
	double delay_component = 0.0;
	bool spoofed = false;
};

/// Two-sample KS between one quarantined node's spoofed delays and the
/// learned reservoir for its peer.
struct KsEntry {
	uint16_t node = 0;
	uint16_t peer = 0;
	double statistic = 0.0;
	size_t n_spoofed = 0;
	size_t n_reservoir = 0;
};

struct RunCounters {
	uint64_t injected = 0;
	uint64_t delivered = 0;
	uint64_t dropped = 0;
	uint64_t redirected = 0;
	uint64_t polls_sent = 0;
	uint64_t responses_normal = 0;
	uint64_t responses_spoofed = 0;
	uint64_t quarantine_leaks = 0; // frames from quarantined nodes delivered to peers
	uint64_t quarantined = 0;
	uint64_t confirmed = 0;
	uint64_t restored = 0;
	uint64_t commands_captured = 0;
	uint64_t training_events = 0;
	uint64_t model_streams = 0;
};

struct MetricsReport {
	std::string scenario;
	uint64_t seed = 0;
	std::vector<RttSample> rtt;
	std::vector<double> spoof_delays;     // applied spoof delay per response, seconds
	std::vector<double> plan_iterations;  // simplex pivots per plan solved
	std::vector<KsEntry> ks;
	double spoofed_per_second = 0.0;      // responses_spoofed / duration, sim time
	double duration = 0.0;
	RunCounters counters;
};

inline void to_json(nlohmann::json& j, const RttSample& s) {
	j = nlohmann::json{{"t", s.t},
	                   {"node", s.node},
	                   {"peer", s.peer},
	                   {"rtt", s.rtt},
	                   {"fixed", s.fixed_component},
	                   {"delay", s.delay_component},
	                   {"spoofed", s.spoofed}};
}

inline void from_json(const nlohmann::json& j, RttSample& s) {
	j.at("t").get_to(s.t);
	j.at("node").get_to(s.node);
	j.at("peer").get_to(s.peer);
	j.at("rtt").get_to(s.rtt);
	j.at("fixed").get_to(s.fixed_component);
	j.at("delay").get_to(s.delay_component);
	j.at("spoofed").get_to(s.spoofed);
}

inline void to_json(nlohmann::json& j, const KsEntry& k) {
	j = nlohmann::json{{"node", k.node},
	                   {"peer", k.peer},
	                   {"statistic", k.statistic},
	                   {"n_spoofed", k.n_spoofed},
	                   {"n_reservoir", k.n_reservoir}};
}

inline void from_json(const nlohmann::json& j, KsEntry& k) {
	j.at("node").get_to(k.node);
	j.at("peer").get_to(k.peer);
	j.at("statistic").get_to(k.statistic);
	j.at("n_spoofed").get_to(k.n_spoofed);
	j.at("n_reservoir").get_to(k.n_reservoir);
}

inline void to_json(nlohmann::json& j, const RunCounters& c) {
	j = nlohmann::json{{"injected", c.injected},
	                   {"delivered", c.delivered},
	                   {"dropped", c.dropped},
	                   {"redirected", c.redirected},
	                   {"polls_sent", c.polls_sent},
	                   {"responses_normal", c.responses_normal},
	                   {"responses_spoofed", c.responses_spoofed},
	                   {"quarantine_leaks", c.quarantine_leaks},
	                   {"quarantined", c.quarantined},
	                   {"confirmed", c.confirmed},
	                   {"restored", c.restored},
	                   {"commands_captured", c.commands_captured},
	                   {"training_events", c.training_events},
	                   {"model_streams", c.model_streams}};
}

inline void from_json(const nlohmann::json& j, RunCounters& c) {
	j.at("injected").get_to(c.injected);
	j.at("delivered").get_to(c.delivered);
	j.at("dropped").get_to(c.dropped);
	j.at("redirected").get_to(c.redirected);
	j.at("polls_sent").get_to(c.polls_sent);
	j.at("responses_normal").get_to(c.responses_normal);
	j.at("responses_spoofed").get_to(c.responses_spoofed);
	j.at("quarantine_leaks").get_to(c.quarantine_leaks);
	j.at("quarantined").get_to(c.quarantined);
	j.at("confirmed").get_to(c.confirmed);
	j.at("restored").get_to(c.restored);
	j.at("commands_captured").get_to(c.commands_captured);
	j.at("training_events").get_to(c.training_events);
	j.at("model_streams").get_to(c.model_streams);
}

inline void to_json(nlohmann::json& j, const MetricsReport& m) {
	j = nlohmann::json{{"scenario", m.scenario},
	                   {"seed", m.seed},
	                   {"duration", m.duration},
	                   {"rtt", m.rtt},
	                   {"spoof_delays", m.spoof_delays},
	                   {"plan_iterations", m.plan_iterations},
	                   {"ks", m.ks},
	                   {"spoofed_per_second", m.spoofed_per_second},
	                   {"counters", m.counters}};
}

inline void from_json(const nlohmann::json& j, MetricsReport& m) {
	j.at("scenario").get_to(m.scenario);
	j.at("seed").get_to(m.seed);
	j.at("duration").get_to(m.duration);
	j.at("rtt").get_to(m.rtt);
	j.at("spoof_delays").get_to(m.spoof_delays);
	j.at("plan_iterations").get_to(m.plan_iterations);
	j.at("ks").get_to(m.ks);
	j.at("spoofed_per_second").get_to(m.spoofed_per_second);
	j.at("counters").get_to(m.counters);
}

namespace detail {

/// Shortest representation that round-trips, borrowed from the JSON
/// serializer so CSV and JSON agree byte for byte on every number.
inline std::string fmt_num(double v) { return nlohmann::json(v).dump(); }

inline std::string csv_field(const std::string& s) {
	if (s.find_first_of(",\"\n") == std::string::npos) return s;
	std::string out = "\"";
	for (char c : s) {
		if (c == '"') out += "\"\"";
		else out += c;
	}
	out += "\"";
	return out;
}

inline void csv_row(std::ostream& os, const std::string& scenario, uint64_t seed,
                    const std::string& metric, const std::string& klass,
                    const SeriesSummary& s) {
	os << csv_field(scenario) << "," << seed << "," << metric << "," << klass << ","
	   << fmt_num(s.mean) << "," << fmt_num(s.p50) << "," << fmt_num(s.p99) << ","
	   << fmt_num(s.ci99_low) << "," << fmt_num(s.ci99_high) << "\n";
}

} // namespace detail

inline constexpr const char* kMetricsCsvHeader =
    "scenario,seed,metric,class,mean,p50,p99,ci99_low,ci99_high";

/// Sample series as summary rows. Counters stay in the JSON report;
/// empty series are skipped, so an empty report is a bare header.
inline std::string metrics_csv(const MetricsReport& m) {
	std::ostringstream os;
	os << kMetricsCsvHeader << "\n";

	std::vector<double> normal, spoofed;
	for (const auto& s : m.rtt) (s.spoofed ? spoofed : normal).push_back(s.rtt);
	if (!normal.empty())
		detail::csv_row(os, m.scenario, m.seed, "rtt", "normal", summarize(normal));
	if (!spoofed.empty())
		detail::csv_row(os, m.scenario, m.seed, "rtt", "spoofed", summarize(spoofed));
	if (!m.spoof_delays.empty())
		detail::csv_row(os, m.scenario, m.seed, "spoof_delay", "all", summarize(m.spoof_delays));
	if (!m.plan_iterations.empty())
		detail::csv_row(os, m.scenario, m.seed, "plan_iterations", "all",
		                summarize(m.plan_iterations));
	if (!m.ks.empty()) {
		std::vector<double> stats;
		stats.reserve(m.ks.size());
		for (const auto& k : m.ks) stats.push_back(k.statistic);
		detail::csv_row(os, m.scenario, m.seed, "ks_delay", "all", summarize(stats));
	}
	if (m.counters.responses_spoofed > 0)
		detail::csv_row(os, m.scenario, m.seed, "spoofed_per_second", "all",
		                summarize({m.spoofed_per_second}));
	return os.str();
}

inline std::string metrics_json(const MetricsReport& m) {
	nlohmann::json j = m;
	return j.dump(2) + "\n";
}

/// Wall-clock measurements. Kept apart from the metrics files, which
/// must be byte-identical across equal-seed runs.
struct TimingRow {
	std::string phase;
	double ms = 0.0;
};

inline std::string timings_csv(const std::vector<TimingRow>& rows) {
	std::ostringstream os;
	os << "phase,wall_ms\n";
	for (const auto& r : rows)
		os << detail::csv_field(r.phase) << "," << detail::fmt_num(r.ms) << "\n";
	return os.str();
}

inline Result<std::monostate, IoFailure> write_text_file(const std::string& path,
                                                         const std::string& content) {
	std::ofstream out(path, std::ios::binary);
	if (!out) return IoFailure{path, "cannot open for writing"};
	out << content;
	if (!out) return IoFailure{path, "write failed"};
	return std::monostate{};
}

inline Result<MetricsReport, IoFailure> read_metrics_json(const std::string& path) {
	std::ifstream in(path);
	if (!in) return IoFailure{path, "cannot open"};
	nlohmann::json j;
	try {
		in >> j;
		return j.get<MetricsReport>();
	} catch (const nlohmann::json::exception& e) {
		return IoFailure{path, std::string("malformed metrics: ") + e.what()};
	}
}

/// The `report` verb: regenerate the CSV view from a stored JSON report.
inline Result<std::monostate, IoFailure> report_csv(const std::string& metrics_json_path,
                                                    const std::string& csv_out_path) {
	auto m = read_metrics_json(metrics_json_path);
	if (!m.ok()) return m.error();
	return write_text_file(csv_out_path, metrics_csv(m.value()));
}

} // namespace netdecoy::harness
