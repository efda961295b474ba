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
#include <cstdio>
#include <filesystem>
#include <string>

#include "CLI11.hpp"
#include "netdecoy/harness/bench.hpp"
#include "netdecoy/harness/run.hpp"

namespace {

using namespace netdecoy;

int cmd_run(const std::string& scenario_path, bool seed_set, uint64_t seed,
            const std::string& out_dir, const std::string& log_level) {
	auto level = parse_log_level(log_level);
	if (!level) {
		std::fprintf(stderr, "netdecoy: unknown log level '%s'\n", log_level.c_str());
		return 2;
	}
	auto sc = harness::load_scenario_file(scenario_path);
	if (!sc.ok()) {
		const auto& e = sc.error();
		if (e.path.empty())
			std::fprintf(stderr, "netdecoy: %s\n", e.message.c_str());
		else
			std::fprintf(stderr, "netdecoy: scenario field '%s': %s\n", e.path.c_str(),
			             e.message.c_str());
		return 2;
	}
	harness::Scenario scenario = sc.take();
	if (seed_set) scenario.seed = seed;

	auto art = harness::run_scenario(scenario, *level);
	auto w = harness::write_artifacts(art, out_dir);
	if (!w.ok()) {
		std::fprintf(stderr, "netdecoy: %s: %s\n", w.error().path.c_str(),
		             w.error().message.c_str());
		return 1;
	}

	const auto& m = art.report;
	std::printf("scenario %s seed %llu: %llu events logged\n", m.scenario.c_str(),
	            static_cast<unsigned long long>(m.seed),
	            static_cast<unsigned long long>(art.log.records().size()));
	std::printf("  polls %llu, spoofed responses %llu, quarantined %llu, confirmed %llu, "
	            "leaks %llu\n",
	            static_cast<unsigned long long>(m.counters.polls_sent),
	            static_cast<unsigned long long>(m.counters.responses_spoofed),
	            static_cast<unsigned long long>(m.counters.quarantined),
	            static_cast<unsigned long long>(m.counters.confirmed),
	            static_cast<unsigned long long>(m.counters.quarantine_leaks));
	std::printf("  wrote %s/{events.jsonl, metrics.json, metrics.csv, timings.csv}\n",
	            out_dir.c_str());
	return 0;
}

int cmd_bench(size_t points, size_t packet_size, double duration, size_t workers, uint64_t seed,
              const std::string& out_dir) {
	size_t expected = harness::response_wire_octets(points);
	if (packet_size != 0 && packet_size != expected) {
		std::fprintf(stderr,
		             "netdecoy: --packet-size %zu is inconsistent with %zu points "
		             "(codec arithmetic gives %zu octets)\n",
		             packet_size, points, expected);
		return 2;
	}

	harness::BenchConfig cfg;
	cfg.n_points = points;
	cfg.duration = duration;
	cfg.workers = workers;
	cfg.seed = seed;
	auto r = harness::bench_spoof(cfg);

	std::printf("spoof bench: %zu points, %zu octets on the wire, %zu worker%s, %.2fs\n",
	            r.n_points, r.packet_octets, r.workers, r.workers == 1 ? "" : "s", r.duration);
	std::printf("  %llu responses, %.1f packets/s\n",
	            static_cast<unsigned long long>(r.packets), r.pps);
	std::printf("  generation latency ms: mean %.4f, p50 %.4f, p99 %.4f\n", r.mean_ms, r.p50_ms,
	            r.p99_ms);
	std::printf("  derived throughput %.2f Mbit/s (packet rate x size; comparison only)\n",
	            r.derived_mbps);

	std::error_code ec;
	std::filesystem::create_directories(out_dir, ec);
	if (ec) {
		std::fprintf(stderr, "netdecoy: %s: %s\n", out_dir.c_str(), ec.message().c_str());
		return 1;
	}
	harness::MetricsReport m;
	m.scenario = "bench-spoof";
	m.seed = seed;
	m.spoof_delays = r.latencies_ms;
	std::string csv = harness::metrics_csv(m);
	csv += "bench-spoof," + std::to_string(seed) + ",pps,all," +
	       harness::detail::fmt_num(r.pps) + "," + harness::detail::fmt_num(r.pps) + "," +
	       harness::detail::fmt_num(r.pps) + "," + harness::detail::fmt_num(r.pps) + "," +
	       harness::detail::fmt_num(r.pps) + "\n";
	auto path = (std::filesystem::path(out_dir) / "bench.csv").string();
	auto w = harness::write_text_file(path, csv);
	if (!w.ok()) {
		std::fprintf(stderr, "netdecoy: %s: %s\n", w.error().path.c_str(),
		             w.error().message.c_str());
		return 1;
	}
	std::printf("  wrote %s (wall-clock results; not covered by the determinism contract)\n",
	            path.c_str());
	return 0;
}

int cmd_report(const std::string& metrics_path, const std::string& out_dir) {
	std::error_code ec;
	std::filesystem::create_directories(out_dir, ec);
	if (ec) {
		std::fprintf(stderr, "netdecoy: %s: %s\n", out_dir.c_str(), ec.message().c_str());
		return 1;
	}
	auto csv_path = (std::filesystem::path(out_dir) / "metrics.csv").string();
	auto r = harness::report_csv(metrics_path, csv_path);
	if (!r.ok()) {
		std::fprintf(stderr, "netdecoy: %s: %s\n", r.error().path.c_str(),
		             r.error().message.c_str());
		return 1;
	}
	std::printf("wrote %s\n", csv_path.c_str());
	return 0;
}

} // namespace

int main(int argc, char** argv) {
	CLI::App app{"in-network honeypot simulator"};
	app.require_subcommand(1);

	uint64_t seed = 0;
	std::string out_dir = "out";
	std::string log_level = "info";
	auto* seed_opt =
	    app.add_option("--seed", seed, "override the scenario seed")->capture_default_str();
	app.add_option("--out-dir", out_dir, "directory for output files")->capture_default_str();
	app.add_option("--log-level", log_level, "error, warn, info, or debug")
	    ->capture_default_str();

	auto* run = app.add_subcommand("run", "execute a scenario file end to end");
	std::string scenario_path;
	run->add_option("scenario", scenario_path, "scenario JSON file")
	    ->required()
	    ->check(CLI::ExistingFile);
	run->fallthrough();

	auto* bench = app.add_subcommand("bench-spoof", "measure spoof-path throughput");
	size_t points = 200;
	size_t packet_size = 0;
	double duration = 3.0;
	size_t workers = 1;
	bench->add_option("--points", points, "analog points per response")
	    ->capture_default_str()
	    ->check(CLI::Range(size_t{1}, size_t{400}));
	bench->add_option("--packet-size", packet_size,
	                  "expected wire octets; must match the codec arithmetic");
	bench->add_option("--duration", duration, "seconds per worker")
	    ->capture_default_str()
	    ->check(CLI::PositiveNumber);
	bench->add_option("--workers", workers, "parallel spoof workers")
	    ->capture_default_str()
	    ->check(CLI::Range(size_t{1}, size_t{64}));
	bench->fallthrough();

	auto* report = app.add_subcommand("report", "regenerate metrics.csv from metrics.json");
	std::string metrics_path;
	report->add_option("--metrics", metrics_path, "metrics.json produced by run")
	    ->capture_default_str();
	report->fallthrough();

	CLI11_PARSE(app, argc, argv);

	if (run->parsed())
		return cmd_run(scenario_path, seed_opt->count() > 0, seed, out_dir, log_level);
	if (bench->parsed()) return cmd_bench(points, packet_size, duration, workers,
	                                      seed_opt->count() > 0 ? seed : 1, out_dir);
	if (report->parsed()) {
		if (metrics_path.empty())
			metrics_path = (std::filesystem::path(out_dir) / "metrics.json").string();
		return cmd_report(metrics_path, out_dir);
	}
	return 0;
}
