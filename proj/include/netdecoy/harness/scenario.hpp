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
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "netdecoy/ids/ids.hpp"
#include "netdecoy/lp/simplex.hpp"
#include "netdecoy/process/law.hpp"
#include "netdecoy/util/result.hpp"

namespace netdecoy::harness {

struct ConfigError {
	std::string path;    // dotted field path, e.g. "topology.n_left"
	std::string message;
};

struct TopologyCfg {
	size_t n_left = 4;
	size_t n_right = 4;
	double access_latency = 0.0005;
	double core_latency = 0.002;
	double ctrl_latency = 0.0005;
};

struct RestoreCfg {
	uint16_t node = 0;
	double time = 0.0;
};

/// Everything one experiment needs. Left nodes poll, right nodes answer;
/// suspicious pollers follow the scripted alert schedule (synthesized
/// from spoof_fraction when none is given).
struct Scenario {
	std::string name = "scenario";
	TopologyCfg topo;
	process::ProcessLaw law;
	process::Bounds bounds;
	double sigma = 0.005;        // per-step process noise
	double service_min = 0.005;  // outstation reply delay range
	double service_max = 0.015;
	std::vector<size_t> phantoms;
	double poll_period = 0.5;
	double spoof_fraction = 0.8;
	uint64_t seed = 1;
	double duration = 60.0;
	double training_window = 20.0;
	ids::IdsConfig ids_cfg;
	size_t operate_after_polls = 10; // spoofed replies before the attacker commands
	std::vector<RestoreCfg> restores;

	size_t n_masters() const { return topo.n_left; }
	size_t quarantine_target() const {
		return static_cast<size_t>(
		    std::ceil(spoof_fraction * static_cast<double>(topo.n_left)));
	}
};

namespace detail {

/// Typed field access that remembers where it was looking.
class Cursor {
public:
	Cursor(const nlohmann::json& j, std::string path) : j_(&j), path_(std::move(path)) {}

	const std::string& path() const { return path_; }
	const nlohmann::json& raw() const { return *j_; }
	bool has(const char* key) const { return j_->contains(key); }

	Result<Cursor, ConfigError> child(const char* key) const {
		if (!j_->contains(key)) return ConfigError{join(key), "missing required field"};
		return Cursor((*j_)[key], join(key));
	}

	template <typename T>
	Result<T, ConfigError> get(const char* key) const {
		if (!j_->contains(key)) return ConfigError{join(key), "missing required field"};
		return coerce<T>((*j_)[key], join(key));
	}

	template <typename T>
	Result<T, ConfigError> get_or(const char* key, T fallback) const {
		if (!j_->contains(key)) return fallback;
		return coerce<T>((*j_)[key], join(key));
	}

	template <typename T>
	static Result<T, ConfigError> coerce(const nlohmann::json& v, std::string at) {
		try {
			return v.get<T>();
		} catch (const nlohmann::json::exception& e) {
			return ConfigError{std::move(at), e.what()};
		}
	}

	std::string join(const char* key) const {
		return path_.empty() ? std::string(key) : path_ + "." + key;
	}

private:
	const nlohmann::json* j_;
	std::string path_;
};

} // namespace detail

/// Shape and invariant checks beyond what parsing can see.
inline Result<std::monostate, ConfigError> validate_scenario(const Scenario& sc) {
	if (sc.topo.n_left == 0) return ConfigError{"topology.n_left", "must be at least 1"};
	if (sc.topo.n_right == 0) return ConfigError{"topology.n_right", "must be at least 1"};
	if (sc.topo.access_latency <= 0.0)
		return ConfigError{"topology.access_latency", "must be positive"};
	if (sc.topo.core_latency <= 0.0)
		return ConfigError{"topology.core_latency", "must be positive"};
	if (sc.topo.ctrl_latency <= 0.0)
		return ConfigError{"topology.ctrl_latency", "must be positive"};
	if (sc.spoof_fraction < 0.0 || sc.spoof_fraction > 1.0)
		return ConfigError{"spoof_fraction", "must lie in [0, 1]"};
	if (sc.duration < 0.0) return ConfigError{"duration", "must be nonnegative"};
	if (sc.training_window < 0.0) return ConfigError{"training_window", "must be nonnegative"};
	if (sc.duration > 0.0 && sc.poll_period <= 0.0)
		return ConfigError{"poll_period", "must be positive for a nonzero duration"};
	if (sc.sigma < 0.0) return ConfigError{"process.sigma", "must be nonnegative"};
	if (sc.service_min <= 0.0 || sc.service_max < sc.service_min)
		return ConfigError{"process.service_min", "need 0 < service_min <= service_max"};

	auto law_ok = process::validate(sc.law, sc.bounds);
	if (!law_ok.ok())
		return ConfigError{"process", std::string("invalid law: ") + to_string(law_ok.error())};
	if (sc.law.n_vars() + 1 > lp::kMaxVariables)
		return ConfigError{"process", "law too large for the plan solver"};

	for (size_t i = 0; i < sc.phantoms.size(); ++i) {
		size_t p = sc.phantoms[i];
		if (p < sc.law.n_real || p >= sc.law.n_vars())
			return ConfigError{"phantoms[" + std::to_string(i) + "]",
			                   "must name a phantom variable index"};
	}
	if (sc.spoof_fraction > 0.0 && sc.phantoms.empty())
		return ConfigError{"phantoms", "needed when spoof_fraction > 0"};

	size_t n_nodes = sc.topo.n_left + sc.topo.n_right;
	for (size_t i = 0; i < sc.ids_cfg.scripted.size(); ++i) {
		const auto& s = sc.ids_cfg.scripted[i];
		if (s.node == 0 || s.node > n_nodes)
			return ConfigError{"ids.scripted[" + std::to_string(i) + "].node", "unknown node"};
	}
	for (size_t i = 0; i < sc.restores.size(); ++i) {
		const auto& r = sc.restores[i];
		if (r.node == 0 || r.node > n_nodes)
			return ConfigError{"restores[" + std::to_string(i) + "].node", "unknown node"};
	}
	return std::monostate{};
}

inline Result<Scenario, ConfigError> load_scenario(const nlohmann::json& j) {
	using detail::Cursor;
	if (!j.is_object()) return ConfigError{"", "scenario must be a JSON object"};
	Cursor root(j, "");
	Scenario sc;

#define NETDECOY_TRY(dst, expr)                                                                    \
	{                                                                                              \
		auto r_ = (expr);                                                                          \
		if (!r_.ok()) return r_.error();                                                           \
		dst = r_.take();                                                                           \
	}

	NETDECOY_TRY(sc.name, root.get_or<std::string>("name", "scenario"));

	{
		auto topo = root.child("topology");
		if (!topo.ok()) return topo.error();
		NETDECOY_TRY(sc.topo.n_left, topo.value().get<size_t>("n_left"));
		NETDECOY_TRY(sc.topo.n_right, topo.value().get<size_t>("n_right"));
		NETDECOY_TRY(sc.topo.access_latency, topo.value().get<double>("access_latency"));
		NETDECOY_TRY(sc.topo.core_latency, topo.value().get<double>("core_latency"));
		NETDECOY_TRY(sc.topo.ctrl_latency,
		             topo.value().get_or<double>("ctrl_latency", sc.topo.access_latency));
	}

	{
		auto proc = root.child("process");
		if (!proc.ok()) return proc.error();
		const Cursor& p = proc.value();
		NETDECOY_TRY(sc.law.n_real, p.get<size_t>("n_real"));
		NETDECOY_TRY(sc.law.n_phantom, p.get<size_t>("n_phantom"));
		std::vector<std::vector<double>> rows;
		NETDECOY_TRY(rows, p.get<std::vector<std::vector<double>>>("law_c"));
		sc.law.c = Matrix{rows.size(), sc.law.n_vars(), {}};
		sc.law.c.a.reserve(rows.size() * sc.law.n_vars());
		for (size_t r = 0; r < rows.size(); ++r) {
			if (rows[r].size() != sc.law.n_vars())
				return ConfigError{"process.law_c[" + std::to_string(r) + "]",
				                   "row width must equal n_real + n_phantom"};
			for (double v : rows[r]) sc.law.c.a.push_back(v);
		}
		NETDECOY_TRY(sc.law.d, p.get<std::vector<double>>("law_d"));
		NETDECOY_TRY(sc.law.scaling, p.get_or<double>("scaling", 0.01));
		NETDECOY_TRY(sc.bounds.lower, p.get<std::vector<double>>("lower"));
		NETDECOY_TRY(sc.bounds.upper, p.get<std::vector<double>>("upper"));
		NETDECOY_TRY(sc.bounds.safety_limit, p.get<std::vector<double>>("safety_limit"));
		NETDECOY_TRY(sc.sigma, p.get_or<double>("sigma", 0.005));
		NETDECOY_TRY(sc.service_min, p.get_or<double>("service_min", 0.005));
		NETDECOY_TRY(sc.service_max, p.get_or<double>("service_max", 0.015));
	}

	NETDECOY_TRY(sc.phantoms, root.get_or<std::vector<size_t>>("phantoms", {}));
	NETDECOY_TRY(sc.poll_period, root.get_or<double>("poll_period", 0.5));
	NETDECOY_TRY(sc.spoof_fraction, root.get_or<double>("spoof_fraction", 0.8));
	NETDECOY_TRY(sc.seed, root.get_or<uint64_t>("seed", 1));
	NETDECOY_TRY(sc.duration, root.get_or<double>("duration", 60.0));
	NETDECOY_TRY(sc.training_window, root.get_or<double>("training_window", 20.0));

	if (root.has("ids")) {
		auto idsc = root.child("ids");
		if (!idsc.ok()) return idsc.error();
		const Cursor& c = idsc.value();
		NETDECOY_TRY(sc.ids_cfg.k, c.get_or<double>("k", 4.0));
		NETDECOY_TRY(sc.ids_cfg.half_life, c.get_or<double>("half_life", 5.0));
		if (c.has("scripted")) {
			auto arr = c.child("scripted");
			if (!arr.ok()) return arr.error();
			if (!arr.value().raw().is_array())
				return ConfigError{arr.value().path(), "must be an array"};
			size_t i = 0;
			for (const auto& item : arr.value().raw()) {
				Cursor ic(item, arr.value().path() + "[" + std::to_string(i) + "]");
				ids::ScriptedAlert s;
				NETDECOY_TRY(s.node, ic.get<uint16_t>("node"));
				NETDECOY_TRY(s.time, ic.get<double>("time"));
				NETDECOY_TRY(s.score, ic.get_or<double>("score", 0.0));
				sc.ids_cfg.scripted.push_back(s);
				++i;
			}
		}
	}

	if (root.has("adversary")) {
		auto adv = root.child("adversary");
		if (!adv.ok()) return adv.error();
		NETDECOY_TRY(sc.operate_after_polls,
		             adv.value().get_or<size_t>("operate_after_polls", 10));
	}

	if (root.has("restores")) {
		auto arr = root.child("restores");
		if (!arr.ok()) return arr.error();
		if (!arr.value().raw().is_array())
			return ConfigError{arr.value().path(), "must be an array"};
		size_t i = 0;
		for (const auto& item : arr.value().raw()) {
			Cursor ic(item, "restores[" + std::to_string(i) + "]");
			RestoreCfg r;
			NETDECOY_TRY(r.node, ic.get<uint16_t>("node"));
			NETDECOY_TRY(r.time, ic.get<double>("time"));
			sc.restores.push_back(r);
			++i;
		}
	}
#undef NETDECOY_TRY

	auto ok = validate_scenario(sc);
	if (!ok.ok()) return ok.error();
	return sc;
}

inline Result<Scenario, ConfigError> load_scenario_file(const std::string& path) {
	std::ifstream in(path);
	if (!in) return ConfigError{"", "cannot open scenario file: " + path};
	nlohmann::json j;
	try {
		in >> j;
	} catch (const nlohmann::json::exception& e) {
		return ConfigError{"", std::string("scenario is not valid JSON: ") + e.what()};
	}
	return load_scenario(j);
}

/// The scripted quarantine schedule: what was configured, or one alert
/// per suspicious poller spaced a poll period apart after training.
inline std::vector<ids::ScriptedAlert> quarantine_schedule(const Scenario& sc) {
	if (!sc.ids_cfg.scripted.empty()) return sc.ids_cfg.scripted;
	std::vector<ids::ScriptedAlert> out;
	size_t target = sc.quarantine_target();
	for (size_t i = 0; i < target && i < sc.topo.n_left; ++i) {
		ids::ScriptedAlert s;
		s.node = static_cast<uint16_t>(i + 1);
		s.time = sc.training_window + static_cast<double>(i + 1) * sc.poll_period;
		out.push_back(s);
	}
	return out;
}

} // namespace netdecoy::harness
