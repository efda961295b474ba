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

#include <vector>

#include "netdecoy/dnp3/app.hpp"
#include "netdecoy/dnp3/link.hpp"

namespace netdecoy::dnp3 {

// Transport: one octet per link frame, FIN 0x80 | FIR 0x40 | 6-bit seq,
// followed by up to 249 octets of the fragment encoding.

inline constexpr size_t kMaxFragmentEncoded = 2048;
inline constexpr size_t kTransportChunk = kMaxUserData - 1; // 249

enum class TransportError {
	FragmentTooLarge,
	EncodeFailed,
	EmptyFrameList,
	MissingTransportOctet,
	BadSequence,
	MissingFir,
	UnexpectedFir,
	MissingFin,
	MixedAddresses,
	BadFragment,
};

inline const char* to_string(TransportError e) {
	switch (e) {
	case TransportError::FragmentTooLarge: return "FragmentTooLarge";
	case TransportError::EncodeFailed: return "EncodeFailed";
	case TransportError::EmptyFrameList: return "EmptyFrameList";
	case TransportError::MissingTransportOctet: return "MissingTransportOctet";
	case TransportError::BadSequence: return "BadSequence";
	case TransportError::MissingFir: return "MissingFir";
	case TransportError::UnexpectedFir: return "UnexpectedFir";
	case TransportError::MissingFin: return "MissingFin";
	case TransportError::MixedAddresses: return "MixedAddresses";
	case TransportError::BadFragment: return "BadFragment";
	}
	return "?";
}

inline Result<std::vector<LinkFrame>, TransportError> segment_fragment(const AppFragment& frag,
                                                                       uint16_t dest, uint16_t src,
                                                                       uint8_t control = 0x44) {
	auto encoded = encode_fragment(frag);
	if (!encoded) return TransportError::EncodeFailed;
	const Bytes& app = encoded.value();
	if (app.size() > kMaxFragmentEncoded) return TransportError::FragmentTooLarge;

	std::vector<LinkFrame> frames;
	size_t pos = 0;
	uint8_t seq = frag.transport_seq & 0x3F;
	bool first = true;
	do {
		size_t n = std::min(kTransportChunk, app.size() - pos);
		bool last = (pos + n == app.size());
		LinkFrame f;
		f.control = control;
		f.dest = dest;
		f.src = src;
		f.user_data.reserve(n + 1);
		f.user_data.push_back(static_cast<uint8_t>((last ? 0x80 : 0) | (first ? 0x40 : 0) | seq));
		f.user_data.insert(f.user_data.end(), app.begin() + static_cast<long>(pos),
		                   app.begin() + static_cast<long>(pos + n));
		frames.push_back(std::move(f));
		pos += n;
		seq = (seq + 1) & 0x3F;
		first = false;
	} while (pos < app.size());
	return frames;
}

/// Inverse of segment_fragment. Recovers the fragment and its starting
/// transport sequence from an in-order, complete frame list.
inline Result<AppFragment, TransportError> reassemble_fragment(const std::vector<LinkFrame>& frames) {
	if (frames.empty()) return TransportError::EmptyFrameList;
	Bytes app;
	uint8_t expect_seq = 0;
	uint8_t first_seq = 0;
	for (size_t i = 0; i < frames.size(); ++i) {
		const LinkFrame& f = frames[i];
		if (f.user_data.empty()) return TransportError::MissingTransportOctet;
		if (f.dest != frames[0].dest || f.src != frames[0].src) return TransportError::MixedAddresses;
		uint8_t t = f.user_data[0];
		bool fin = (t & 0x80) != 0;
		bool fir = (t & 0x40) != 0;
		uint8_t seq = t & 0x3F;
		if (i == 0) {
			if (!fir) return TransportError::MissingFir;
			first_seq = seq;
			expect_seq = seq;
		} else if (fir) {
			return TransportError::UnexpectedFir;
		}
		if (seq != expect_seq) return TransportError::BadSequence;
		expect_seq = (expect_seq + 1) & 0x3F;
		if (fin != (i == frames.size() - 1)) return TransportError::MissingFin;
		app.insert(app.end(), f.user_data.begin() + 1, f.user_data.end());
	}
	auto frag = decode_fragment(app);
	if (!frag) return TransportError::BadFragment;
	AppFragment out = frag.take();
	out.transport_seq = first_seq;
	return out;
}

/// Wire size of a fragment after segmentation and link framing.
inline size_t encoded_wire_size(size_t fragment_size) {
	size_t total = 0;
	size_t pos = 0;
	do {
		size_t n = std::min(kTransportChunk, fragment_size - pos);
		total += encoded_link_size(n + 1);
		pos += n;
	} while (pos < fragment_size);
	return total;
}

} // namespace netdecoy::dnp3
