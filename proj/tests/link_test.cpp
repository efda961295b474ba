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
#include <catch2/catch_amalgamated.hpp>

#include "netdecoy/dnp3/link.hpp"
#include "netdecoy/util/rng.hpp"

using namespace netdecoy;
using namespace netdecoy::dnp3;

namespace {

LinkFrame random_frame(Rng& rng, size_t max_user = kMaxUserData) {
	LinkFrame f;
	f.control = static_cast<uint8_t>(rng.below(256));
	f.dest = static_cast<uint16_t>(rng.below(65536));
	f.src = static_cast<uint16_t>(rng.below(65536));
	f.user_data.resize(rng.below(max_user + 1));
	for (auto& b : f.user_data) b = static_cast<uint8_t>(rng.below(256));
	return f;
}

} // namespace

TEST_CASE("encode sizes") {
	LinkFrame f;
	f.dest = 1;
	f.src = 2;

	SECTION("empty user data is a 10-octet frame") {
		auto out = encode_link_frame(f);
		REQUIRE(out.ok());
		CHECK(out.value().size() == 10);
		CHECK(out.value()[0] == 0x05);
		CHECK(out.value()[1] == 0x64);
	}
	SECTION("16 octets of user data need one block crc") {
		f.user_data.assign(16, 0xAB);
		auto out = encode_link_frame(f);
		REQUIRE(out.ok());
		CHECK(out.value().size() == 28);
	}
	SECTION("250 octets is the maximum, 292 on the wire") {
		f.user_data.assign(250, 0x11);
		auto out = encode_link_frame(f);
		REQUIRE(out.ok());
		CHECK(out.value().size() == 292);
		auto back = decode_link_frame(out.value());
		REQUIRE(back.ok());
		CHECK(back.value() == f);
	}
	SECTION("251 octets is rejected") {
		f.user_data.assign(251, 0x11);
		auto out = encode_link_frame(f);
		REQUIRE(!out.ok());
		CHECK(out.error() == LinkError::UserDataTooLong);
	}
}

TEST_CASE("decode is the inverse of encode") {
	Rng rng(0x11F0);
	for (int iter = 0; iter < 10000; ++iter) {
		LinkFrame f = random_frame(rng);
		auto wire = encode_link_frame(f);
		REQUIRE(wire.ok());
		auto back = decode_link_frame(wire.value());
		REQUIRE(back.ok());
		REQUIRE(back.value() == f);
	}
}

TEST_CASE("single-octet corruption is rejected") {
	Rng rng(0xBAD);
	for (int iter = 0; iter < 2000; ++iter) {
		LinkFrame f = random_frame(rng);
		auto wire = encode_link_frame(f).take();
		size_t pos = rng.below(wire.size());
		uint8_t flip = static_cast<uint8_t>(1 + rng.below(255));
		wire[pos] ^= flip;
		auto back = decode_link_frame(wire);
		// either rejected outright or (for a corrupted length octet with
		// the header crc now failing) never equal to the original
		if (back.ok()) {
			REQUIRE(!(back.value() == f));
		}
	}
}

TEST_CASE("corrupting a user-data block reports BadBlockCrc") {
	LinkFrame f;
	f.dest = 10;
	f.src = 20;
	f.user_data.assign(40, 0x5A);
	auto wire = encode_link_frame(f).take();
	wire[12] ^= 0x01; // inside the first 16-octet block
	auto back = decode_link_frame(wire);
	REQUIRE(!back.ok());
	CHECK(back.error().kind == LinkError::BadBlockCrc);
	CHECK(back.error().offset == 26); // crc position of the first block
}

TEST_CASE("decode error taxonomy") {
	LinkFrame f;
	f.user_data.assign(20, 0x77);
	auto wire = encode_link_frame(f).take();

	SECTION("bad start octets") {
		auto w = wire;
		w[0] = 0x06;
		auto r = decode_link_frame(w);
		REQUIRE(!r.ok());
		CHECK(r.error().kind == LinkError::BadStartOctets);
		CHECK(r.error().offset == 0);
	}
	SECTION("bad header crc") {
		auto w = wire;
		w[8] ^= 0xFF;
		auto r = decode_link_frame(w);
		REQUIRE(!r.ok());
		CHECK(r.error().kind == LinkError::BadHeaderCrc);
		CHECK(r.error().offset == 8);
	}
	SECTION("truncated after header") {
		Bytes w(wire.begin(), wire.begin() + 10);
		auto r = decode_link_frame(w);
		REQUIRE(!r.ok());
		CHECK(r.error().kind == LinkError::TruncatedFrame);
		CHECK(r.error().offset == 10);
	}
	SECTION("trailing octets") {
		auto w = wire;
		w.push_back(0x00);
		auto r = decode_link_frame(w);
		REQUIRE(!r.ok());
		CHECK(r.error().kind == LinkError::TrailingOctets);
		CHECK(r.error().offset == wire.size());
	}
}
