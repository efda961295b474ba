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
#include <variant>
#include <vector>

#include "netdecoy/util/bytes.hpp"
#include "netdecoy/util/result.hpp"

namespace netdecoy::dnp3 {

// Application fragment layout (before transport segmentation):
//
//   [app_control 1] [function 1] [block_count u16le]
//   per block: [group 1] [variation 1] [qualifier u16le] [count u16le] [points]
//
// app_control: FIR 0x80 | FIN 0x40 | 4-bit sequence; bits 0x30 reserved zero.
// The only qualifier in this subset is 0x0008 (16-bit count, no prefixes).
// Point bodies depend on (function, group):
//   READ            -> header-only block, count = points requested from index 0
//   RESPONSE + g30  -> analog points  [flag 1][value i32le]      (5 octets)
//   OPERATE/WRITE/RESPONSE + g12 -> operate points [index u16le][setpoint i32le]
//
// So a fragment carrying n analog points encodes to 4 + 6 + 5n octets.

enum class FunctionCode : uint8_t {
	Read = 0x01,
	Write = 0x02,
	Operate = 0x04,
	Response = 0x81,
};

inline const char* to_string(FunctionCode f) {
	switch (f) {
	case FunctionCode::Read: return "READ";
	case FunctionCode::Write: return "WRITE";
	case FunctionCode::Operate: return "OPERATE";
	case FunctionCode::Response: return "RESPONSE";
	}
	return "?";
}

inline bool is_request(FunctionCode f) { return f != FunctionCode::Response; }

inline constexpr uint8_t kGroupAnalogInput = 30;
inline constexpr uint8_t kGroupControl = 12;
inline constexpr uint16_t kQualifierCount16 = 0x0008;
inline constexpr size_t kAppHeaderSize = 4;
inline constexpr size_t kBlockHeaderSize = 6;
inline constexpr size_t kAnalogPointSize = 5;
inline constexpr size_t kOperatePointSize = 6;

struct AnalogPoint {
	uint8_t flag = 0x01; // online
	int32_t value = 0;
	bool operator==(const AnalogPoint&) const = default;
};

struct OperatePoint {
	uint16_t index = 0;
	int32_t setpoint = 0;
	bool operator==(const OperatePoint&) const = default;
};

struct ObjectBlock {
	uint8_t group = kGroupAnalogInput;
	uint8_t variation = 1;
	uint16_t count = 0;
	// monostate = header-only block (READ requests)
	std::variant<std::monostate, std::vector<AnalogPoint>, std::vector<OperatePoint>> points;

	bool operator==(const ObjectBlock&) const = default;

	const std::vector<AnalogPoint>* analog() const { return std::get_if<std::vector<AnalogPoint>>(&points); }
	const std::vector<OperatePoint>* operates() const { return std::get_if<std::vector<OperatePoint>>(&points); }
};

struct AppFragment {
	uint8_t transport_seq = 0; // 6-bit; first transport sequence when segmented
	bool fir = true;
	bool fin = true;
	uint8_t app_seq = 0; // 4-bit
	FunctionCode function = FunctionCode::Read;
	std::vector<ObjectBlock> objects;

	bool operator==(const AppFragment&) const = default;
};

enum class AppError {
	Truncated,
	BadAppControl,
	BadFunction,
	BadQualifier,
	UnsupportedObject,
	CountMismatch,
	TrailingOctets,
};

inline const char* to_string(AppError e) {
	switch (e) {
	case AppError::Truncated: return "Truncated";
	case AppError::BadAppControl: return "BadAppControl";
	case AppError::BadFunction: return "BadFunction";
	case AppError::BadQualifier: return "BadQualifier";
	case AppError::UnsupportedObject: return "UnsupportedObject";
	case AppError::CountMismatch: return "CountMismatch";
	case AppError::TrailingOctets: return "TrailingOctets";
	}
	return "?";
}

inline size_t encoded_block_size(const ObjectBlock& b) {
	size_t body = 0;
	if (const auto* a = b.analog()) body = a->size() * kAnalogPointSize;
	if (const auto* o = b.operates()) body = o->size() * kOperatePointSize;
	return kBlockHeaderSize + body;
}

inline size_t encoded_fragment_size(const AppFragment& f) {
	size_t n = kAppHeaderSize;
	for (const auto& b : f.objects) n += encoded_block_size(b);
	return n;
}

inline Result<Bytes, AppError> encode_fragment(const AppFragment& frag) {
	Bytes out;
	out.reserve(encoded_fragment_size(frag));
	uint8_t ctrl = static_cast<uint8_t>((frag.fir ? 0x80 : 0) | (frag.fin ? 0x40 : 0) | (frag.app_seq & 0x0F));
	out.push_back(ctrl);
	out.push_back(static_cast<uint8_t>(frag.function));
	put_u16le(out, static_cast<uint16_t>(frag.objects.size()));
	for (const auto& b : frag.objects) {
		if (const auto* a = b.analog(); a && a->size() != b.count) return AppError::CountMismatch;
		if (const auto* o = b.operates(); o && o->size() != b.count) return AppError::CountMismatch;
		out.push_back(b.group);
		out.push_back(b.variation);
		put_u16le(out, kQualifierCount16);
		put_u16le(out, b.count);
		if (const auto* a = b.analog()) {
			for (const auto& p : *a) {
				out.push_back(p.flag);
				put_i32le(out, p.value);
			}
		} else if (const auto* o = b.operates()) {
			for (const auto& p : *o) {
				put_u16le(out, p.index);
				put_i32le(out, p.setpoint);
			}
		}
	}
	return out;
}

namespace detail {

inline bool parse_function(uint8_t raw, FunctionCode& out) {
	switch (raw) {
	case 0x01: out = FunctionCode::Read; return true;
	case 0x02: out = FunctionCode::Write; return true;
	case 0x04: out = FunctionCode::Operate; return true;
	case 0x81: out = FunctionCode::Response; return true;
	default: return false;
	}
}

} // namespace detail

/// Decodes one application fragment. transport_seq is not part of the
/// app encoding; the result carries 0 (reassembly fills the real one).
inline Result<AppFragment, AppError> decode_fragment(ByteView in) {
	if (in.size() < kAppHeaderSize) return AppError::Truncated;
	uint8_t ctrl = in[0];
	if ((ctrl & 0x30) != 0) return AppError::BadAppControl;
	AppFragment frag;
	frag.fir = (ctrl & 0x80) != 0;
	frag.fin = (ctrl & 0x40) != 0;
	frag.app_seq = ctrl & 0x0F;
	if (!detail::parse_function(in[1], frag.function)) return AppError::BadFunction;
	uint16_t n_blocks = get_u16le(in, 2);
	size_t pos = kAppHeaderSize;
	frag.objects.reserve(n_blocks);
	for (uint16_t i = 0; i < n_blocks; ++i) {
		if (in.size() < pos + kBlockHeaderSize) return AppError::Truncated;
		ObjectBlock b;
		b.group = in[pos];
		b.variation = in[pos + 1];
		if (get_u16le(in, pos + 2) != kQualifierCount16) return AppError::BadQualifier;
		b.count = get_u16le(in, pos + 4);
		pos += kBlockHeaderSize;
		bool analog_body = frag.function == FunctionCode::Response && b.group == kGroupAnalogInput;
		bool operate_body = b.group == kGroupControl;
		if (frag.function == FunctionCode::Read) {
			b.points = std::monostate{};
		} else if (analog_body) {
			if (in.size() < pos + b.count * kAnalogPointSize) return AppError::Truncated;
			std::vector<AnalogPoint> pts(b.count);
			for (auto& p : pts) {
				p.flag = in[pos];
				p.value = get_i32le(in, pos + 1);
				pos += kAnalogPointSize;
			}
			b.points = std::move(pts);
		} else if (operate_body) {
			if (in.size() < pos + b.count * kOperatePointSize) return AppError::Truncated;
			std::vector<OperatePoint> pts(b.count);
			for (auto& p : pts) {
				p.index = get_u16le(in, pos);
				p.setpoint = get_i32le(in, pos + 2);
				pos += kOperatePointSize;
			}
			b.points = std::move(pts);
		} else {
			return AppError::UnsupportedObject;
		}
		frag.objects.push_back(std::move(b));
	}
	if (pos != in.size()) return AppError::TrailingOctets;
	return frag;
}

/// Measurement report: one group-30 variation-1 block, flags online.
inline AppFragment encode_analog_response(const std::vector<int32_t>& values, uint8_t seq) {
	AppFragment frag;
	frag.transport_seq = seq & 0x3F;
	frag.app_seq = seq & 0x0F;
	frag.function = FunctionCode::Response;
	ObjectBlock b;
	b.group = kGroupAnalogInput;
	b.variation = 1;
	b.count = static_cast<uint16_t>(values.size());
	std::vector<AnalogPoint> pts;
	pts.reserve(values.size());
	for (int32_t v : values) pts.push_back(AnalogPoint{0x01, v});
	b.points = std::move(pts);
	frag.objects.push_back(std::move(b));
	return frag;
}

/// Poll for the first n_points analog inputs.
inline AppFragment encode_read_request(uint16_t n_points, uint8_t seq) {
	AppFragment frag;
	frag.transport_seq = seq & 0x3F;
	frag.app_seq = seq & 0x0F;
	frag.function = FunctionCode::Read;
	ObjectBlock b;
	b.group = kGroupAnalogInput;
	b.variation = 1;
	b.count = n_points;
	b.points = std::monostate{};
	frag.objects.push_back(std::move(b));
	return frag;
}

/// Setpoint command on explicit indices (group 12).
inline AppFragment encode_operate(const std::vector<OperatePoint>& points, uint8_t seq) {
	AppFragment frag;
	frag.transport_seq = seq & 0x3F;
	frag.app_seq = seq & 0x0F;
	frag.function = FunctionCode::Operate;
	ObjectBlock b;
	b.group = kGroupControl;
	b.variation = 1;
	b.count = static_cast<uint16_t>(points.size());
	b.points = points;
	frag.objects.push_back(std::move(b));
	return frag;
}

/// Success acknowledgment for a command request: echoes its group-12
/// blocks back under the request's sequence numbers.
inline AppFragment make_operate_ack(const AppFragment& request) {
	AppFragment ack;
	ack.transport_seq = request.transport_seq;
	ack.app_seq = request.app_seq;
	ack.function = FunctionCode::Response;
	for (const auto& b : request.objects) {
		if (b.group == kGroupControl) ack.objects.push_back(b);
	}
	return ack;
}

} // namespace netdecoy::dnp3
