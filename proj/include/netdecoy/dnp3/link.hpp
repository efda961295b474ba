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

#include <cstddef>
#include <cstdint>

#include "netdecoy/dnp3/crc.hpp"
#include "netdecoy/util/bytes.hpp"
#include "netdecoy/util/result.hpp"

namespace netdecoy::dnp3 {

// Link frame layout:
//
//   0x05 0x64 LEN CTRL DST_LO DST_HI SRC_LO SRC_HI CRC_LO CRC_HI
//   [<=16 octets user data] CRC_LO CRC_HI
//   ... repeated; the final partial block also gets a CRC
//
// LEN counts CTRL + DST + SRC + user data (5 + n), CRCs excluded.
// Wire size is therefore 10 + n + 2*ceil(n/16).

struct LinkFrame {
	uint8_t control = 0x44;
	uint16_t dest = 0;
	uint16_t src = 0;
	Bytes user_data;

	bool operator==(const LinkFrame&) const = default;
};

inline constexpr size_t kMaxUserData = 250;
inline constexpr size_t kLinkHeaderSize = 10;
inline constexpr uint8_t kStart0 = 0x05;
inline constexpr uint8_t kStart1 = 0x64;

inline constexpr size_t encoded_link_size(size_t user_len) {
	return kLinkHeaderSize + user_len + 2 * ((user_len + 15) / 16);
}

enum class LinkError {
	UserDataTooLong,
	BadStartOctets,
	BadHeaderCrc,
	BadBlockCrc,
	TruncatedFrame,
	TrailingOctets,
};

inline const char* to_string(LinkError e) {
	switch (e) {
	case LinkError::UserDataTooLong: return "UserDataTooLong";
	case LinkError::BadStartOctets: return "BadStartOctets";
	case LinkError::BadHeaderCrc: return "BadHeaderCrc";
	case LinkError::BadBlockCrc: return "BadBlockCrc";
	case LinkError::TruncatedFrame: return "TruncatedFrame";
	case LinkError::TrailingOctets: return "TrailingOctets";
	}
	return "?";
}

struct LinkDecodeError {
	LinkError kind;
	size_t offset; // position in the input where the check failed
};

inline Result<Bytes, LinkError> encode_link_frame(const LinkFrame& frame) {
	if (frame.user_data.size() > kMaxUserData) return LinkError::UserDataTooLong;
	Bytes out;
	out.reserve(encoded_link_size(frame.user_data.size()));
	out.push_back(kStart0);
	out.push_back(kStart1);
	out.push_back(static_cast<uint8_t>(5 + frame.user_data.size()));
	out.push_back(frame.control);
	put_u16le(out, frame.dest);
	put_u16le(out, frame.src);
	append_crc(out, ByteView(out.data(), 8));
	size_t pos = 0;
	while (pos < frame.user_data.size()) {
		size_t n = std::min<size_t>(16, frame.user_data.size() - pos);
		size_t block_start = out.size();
		out.insert(out.end(), frame.user_data.begin() + static_cast<long>(pos),
		           frame.user_data.begin() + static_cast<long>(pos + n));
		append_crc(out, ByteView(out.data() + block_start, n));
		pos += n;
	}
	return out;
}

/// Exact-length decode: the buffer must hold one frame and nothing else.
/// A length field below 5 is reported as TruncatedFrame at the length octet.
inline Result<LinkFrame, LinkDecodeError> decode_link_frame(ByteView in) {
	if (in.size() < kLinkHeaderSize) return LinkDecodeError{LinkError::TruncatedFrame, in.size()};
	if (in[0] != kStart0) return LinkDecodeError{LinkError::BadStartOctets, 0};
	if (in[1] != kStart1) return LinkDecodeError{LinkError::BadStartOctets, 1};
	if (crc_dnp(in.subspan(0, 8)) != get_u16le(in, 8)) {
		return LinkDecodeError{LinkError::BadHeaderCrc, 8};
	}
	if (in[2] < 5) return LinkDecodeError{LinkError::TruncatedFrame, 2};
	size_t user_len = static_cast<size_t>(in[2]) - 5;
	size_t expected = encoded_link_size(user_len);
	if (in.size() < expected) return LinkDecodeError{LinkError::TruncatedFrame, in.size()};
	if (in.size() > expected) return LinkDecodeError{LinkError::TrailingOctets, expected};

	LinkFrame frame;
	frame.control = in[3];
	frame.dest = get_u16le(in, 4);
	frame.src = get_u16le(in, 6);
	frame.user_data.reserve(user_len);
	size_t pos = kLinkHeaderSize;
	size_t remaining = user_len;
	while (remaining > 0) {
		size_t n = std::min<size_t>(16, remaining);
		if (crc_dnp(in.subspan(pos, n)) != get_u16le(in, pos + n)) {
			return LinkDecodeError{LinkError::BadBlockCrc, pos + n};
		}
		frame.user_data.insert(frame.user_data.end(), in.begin() + static_cast<long>(pos),
		                       in.begin() + static_cast<long>(pos + n));
		pos += n + 2;
		remaining -= n;
	}
	return frame;
}

} // namespace netdecoy::dnp3
