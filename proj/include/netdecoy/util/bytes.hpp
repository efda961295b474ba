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
#include <span>
#include <string>
#include <vector>

namespace netdecoy {

using Bytes = std::vector<uint8_t>;
using ByteView = std::span<const uint8_t>;

// All multi-octet wire fields are little-endian.
inline void put_u16le(Bytes& out, uint16_t v) {
	out.push_back(static_cast<uint8_t>(v & 0xFF));
	out.push_back(static_cast<uint8_t>((v >> 8) & 0xFF));
}

inline void put_i32le(Bytes& out, int32_t v) {
	auto u = static_cast<uint32_t>(v);
	out.push_back(static_cast<uint8_t>(u & 0xFF));
	out.push_back(static_cast<uint8_t>((u >> 8) & 0xFF));
	out.push_back(static_cast<uint8_t>((u >> 16) & 0xFF));
	out.push_back(static_cast<uint8_t>((u >> 24) & 0xFF));
}

inline uint16_t get_u16le(ByteView b, size_t off) {
	return static_cast<uint16_t>(b[off] | (b[off + 1] << 8));
}

inline int32_t get_i32le(ByteView b, size_t off) {
	uint32_t u = static_cast<uint32_t>(b[off]) | (static_cast<uint32_t>(b[off + 1]) << 8) |
	             (static_cast<uint32_t>(b[off + 2]) << 16) | (static_cast<uint32_t>(b[off + 3]) << 24);
	return static_cast<int32_t>(u);
}

inline std::string to_hex(ByteView data) {
	static const char* digits = "0123456789abcdef";
	std::string s;
	s.reserve(data.size() * 2);
	for (uint8_t b : data) {
		s.push_back(digits[b >> 4]);
		s.push_back(digits[b & 0x0F]);
	}
	return s;
}

inline int hex_nibble(char c) {
	if (c >= '0' && c <= '9') return c - '0';
	if (c >= 'a' && c <= 'f') return c - 'a' + 10;
	if (c >= 'A' && c <= 'F') return c - 'A' + 10;
	return -1;
}

// Returns empty on any malformed input (odd length or non-hex chars).
inline Bytes from_hex(const std::string& s) {
	if (s.size() % 2 != 0) return {};
	Bytes out;
	out.reserve(s.size() / 2);
	for (size_t i = 0; i < s.size(); i += 2) {
		int hi = hex_nibble(s[i]);
		int lo = hex_nibble(s[i + 1]);
		if (hi < 0 || lo < 0) return {};
		out.push_back(static_cast<uint8_t>((hi << 4) | lo));
	}
	return out;
}

} // namespace netdecoy
