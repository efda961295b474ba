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

#include "netdecoy/util/bytes.hpp"

namespace netdecoy::testing {

// Reference CRC by explicit polynomial long division over GF(2), written
// independently of the table-driven implementation. The message is taken
// LSB-first per octet (serial transmission order), 16 zero bits are
// appended, and the sequence is divided by
// x^16+x^13+x^12+x^11+x^10+x^8+x^6+x^5+x^2+1 (0x13D65). The remainder is
// emitted low-order bit first and complemented.
inline uint16_t crc_dnp_bitwise(ByteView data) {
	constexpr uint32_t kGenerator = 0x13D65;
	uint32_t reg = 0;
	auto feed_bit = [&](uint32_t bit) {
		reg = (reg << 1) | bit;
		if (reg & 0x10000) reg ^= kGenerator;
	};
	for (uint8_t octet : data) {
		for (int k = 0; k < 8; ++k) feed_bit((octet >> k) & 1);
	}
	for (int k = 0; k < 16; ++k) feed_bit(0);

	uint16_t remainder = static_cast<uint16_t>(reg & 0xFFFF);
	uint16_t reflected = 0;
	for (int k = 0; k < 16; ++k) {
		reflected = static_cast<uint16_t>((reflected << 1) | ((remainder >> k) & 1));
	}
	return static_cast<uint16_t>(~reflected);
}

} // namespace netdecoy::testing
