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

#include <array>
#include <cstdint>

#include "netdecoy/util/bytes.hpp"

namespace netdecoy::dnp3 {

// CRC-16/DNP: polynomial x^16+x^13+x^12+x^11+x^10+x^8+x^6+x^5+x^2+1
// (0x3D65), init 0, reflected in/out, final complement. Transmitted
// low octet first.
namespace detail {

constexpr uint16_t kPolyReflected = 0xA6BC; // 0x3D65 bit-reversed

constexpr std::array<uint16_t, 256> make_crc_table() {
	std::array<uint16_t, 256> table{};
	for (uint32_t i = 0; i < 256; ++i) {
		uint16_t r = static_cast<uint16_t>(i);
		for (int bit = 0; bit < 8; ++bit) {
			r = (r & 1) ? static_cast<uint16_t>((r >> 1) ^ kPolyReflected)
			            : static_cast<uint16_t>(r >> 1);
		}
		table[i] = r;
	}
	return table;
}

inline constexpr std::array<uint16_t, 256> kCrcTable = make_crc_table();

} // namespace detail

inline uint16_t crc_dnp(ByteView data) {
	uint16_t crc = 0;
	for (uint8_t b : data) {
		crc = static_cast<uint16_t>((crc >> 8) ^ detail::kCrcTable[(crc ^ b) & 0xFF]);
	}
	return static_cast<uint16_t>(~crc);
}

inline void append_crc(Bytes& out, ByteView covered) {
	put_u16le(out, crc_dnp(covered));
}

} // namespace netdecoy::dnp3
