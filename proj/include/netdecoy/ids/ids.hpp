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
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

namespace netdecoy::ids {

struct TrafficEvent {
	uint16_t node = 0;
	uint8_t klass = 0; // request function octet, 0 = unknown
	double t = 0.0;
};

struct Alert {
	uint16_t node = 0;
	double score = 0.0; // the offending rate, events/s
	double time = 0.0;
};

struct RateStats {
	double mu = 0.0;
	double sigma = 0.0; // population deviation
	size_t samples = 0;
};

/// Per-node per-class rate statistics over a training window. Streams
/// are independent: excluding one node cannot move any other node's
/// numbers, only the per-class aggregate.
class NormalModel {
public:
	using Key = std::pair<uint16_t, uint8_t>;

	void put(uint16_t node, uint8_t klass, RateStats s) { stats_[Key{node, klass}] = s; }

	const RateStats* lookup(uint16_t node, uint8_t klass) const {
		auto it = stats_.find(Key{node, klass});
		return it == stats_.end() ? nullptr : &it->second;
	}

	/// Mean rate across every modeled node for one class.
	std::optional<double> global_mean(uint8_t klass) const {
		double sum = 0.0;
		size_t n = 0;
		for (const auto& [key, st] : stats_) {
			if (key.second != klass) continue;
			sum += st.mu * static_cast<double>(st.samples);
			n += st.samples;
		}
		if (n == 0) return std::nullopt;
		return sum / static_cast<double>(n);
	}

	bool empty() const { return stats_.empty(); }
	size_t size() const { return stats_.size(); }
	const std::map<Key, RateStats>& all() const { return stats_; }

private:
	std::map<Key, RateStats> stats_;
};

/// Rate samples are reciprocals of same-stream inter-arrival gaps;
/// excluded nodes contribute nothing. Events must be time-ordered.
inline NormalModel train_normal(const std::vector<TrafficEvent>& events,
                                const std::set<uint16_t>& exclusions) {
	struct Acc {
		double last_t = -1.0;
		size_t n = 0;
		double mean = 0.0;
		double m2 = 0.0; // Welford
	};
	std::map<NormalModel::Key, Acc> accs;
	for (const auto& ev : events) {
		if (exclusions.count(ev.node) != 0) continue;
		Acc& a = accs[NormalModel::Key{ev.node, ev.klass}];
		if (a.last_t >= 0.0 && ev.t > a.last_t) {
			double sample = 1.0 / (ev.t - a.last_t);
			a.n++;
			double d = sample - a.mean;
			a.mean += d / static_cast<double>(a.n);
			a.m2 += d * (sample - a.mean);
		}
		a.last_t = ev.t;
	}
	NormalModel model;
	for (const auto& [key, a] : accs) {
		if (a.n == 0) continue;
		RateStats st;
		st.mu = a.mean;
		st.sigma = std::sqrt(a.m2 / static_cast<double>(a.n));
		st.samples = a.n;
		model.put(key.first, key.second, st);
	}
	return model;
}

struct ScriptedAlert {
	uint16_t node = 0;
	double time = 0.0;
	double score = 0.0;
};

struct IdsConfig {
	double k = 4.0;          // alert when rate > mu + k*sigma
	double half_life = 5.0;  // seconds; EWMA decay of the rate estimate
	std::vector<ScriptedAlert> scripted;
};

/// Rate-anomaly detector. Keeps one exponentially weighted rate per
/// (node, class) stream and flags it against the trained model. Streams
/// without a model entry never alert; scripted alerts bypass all of it.
class Ids {
public:
	Ids(IdsConfig cfg, NormalModel model) : cfg_(std::move(cfg)), model_(std::move(model)) {
		std::stable_sort(cfg_.scripted.begin(), cfg_.scripted.end(),
		                 [](const ScriptedAlert& a, const ScriptedAlert& b) { return a.time < b.time; });
	}

	const NormalModel& model() const { return model_; }
	const IdsConfig& config() const { return cfg_; }

	/// Install a freshly trained model. Live rate tracks carry over, so
	/// detection starts from the rates the training traffic left behind.
	void set_model(NormalModel model) { model_ = std::move(model); }

	std::optional<Alert> ingest(const TrafficEvent& ev) {
		Track& tr = tracks_[NormalModel::Key{ev.node, ev.klass}];
		if (tr.last_t >= 0.0 && ev.t > tr.last_t) {
			double dt = ev.t - tr.last_t;
			double sample = 1.0 / dt;
			double w = std::exp2(-dt / cfg_.half_life);
			tr.rate = tr.rate < 0.0 ? sample : w * tr.rate + (1.0 - w) * sample;
		}
		tr.last_t = ev.t;
		if (tr.rate < 0.0) return std::nullopt;
		const RateStats* st = model_.lookup(ev.node, ev.klass);
		if (st == nullptr) return std::nullopt;
		// tiny absolute guard so a stream replaying its exact training
		// rate cannot alert on rounding noise when sigma is zero
		double threshold = st->mu + cfg_.k * st->sigma + 1e-9 * std::max(1.0, st->mu);
		if (tr.rate > threshold) return Alert{ev.node, tr.rate, ev.t};
		return std::nullopt;
	}

	/// Scripted alerts whose time has come, each emitted exactly once.
	std::vector<Alert> due_scripted(double now) {
		std::vector<Alert> out;
		while (next_scripted_ < cfg_.scripted.size() &&
		       cfg_.scripted[next_scripted_].time <= now) {
			const ScriptedAlert& s = cfg_.scripted[next_scripted_++];
			out.push_back(Alert{s.node, s.score, s.time});
		}
		return out;
	}

	/// Current smoothed rate for a stream, if one has formed.
	std::optional<double> rate(uint16_t node, uint8_t klass) const {
		auto it = tracks_.find(NormalModel::Key{node, klass});
		if (it == tracks_.end() || it->second.rate < 0.0) return std::nullopt;
		return it->second.rate;
	}

private:
	struct Track {
		double last_t = -1.0;
		double rate = -1.0;
	};

	IdsConfig cfg_;
	NormalModel model_;
	std::map<NormalModel::Key, Track> tracks_;
	size_t next_scripted_ = 0;
};

} // namespace netdecoy::ids
